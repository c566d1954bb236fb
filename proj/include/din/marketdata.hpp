#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "din/dates.hpp"

namespace din::marketdata {

using Eigen::MatrixXd;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class AssetClass { futures, equity, crypto, fx, synthetic };

std::string to_string(AssetClass c);
AssetClass asset_class_from_string(const std::string& s);

// Date-indexed panel of prices. mask(t,i) is true where an observation exists.
struct PricePanel {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    MatrixXd values;
    BoolArray mask;
    AssetClass asset_class = AssetClass::synthetic;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
    void check() const;  // throws on violated invariants
    int row_of(const Date& d) const;  // -1 if absent
};

// Same layout, values are simple daily returns. One fewer row than the source prices.
struct ReturnsPanel {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    MatrixXd values;
    BoolArray mask;
    AssetClass asset_class = AssetClass::synthetic;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
    void check() const;
    int row_of(const Date& d) const;
};

// Annualised ex-ante volatility, sqrt(252) * daily EW std. Causal: row t uses
// returns up to and including t.
struct VolPanel {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    MatrixXd values;
    BoolArray mask;
    int span = 63;
    static constexpr double kAnnualisationDays = 252.0;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
    int row_of(const Date& d) const;
};

struct LeadLagPair {
    int leader = 0;
    int follower = 0;
    int lag = 1;          // days, >= 1
    double coupling = 0.5;  // follower return picks up coupling * leader return at t-lag
};

struct SynthConfig {
    int n_assets = 10;
    int n_days = 2520;
    std::uint64_t seed = 0;
    // Regime mix weights (>= 0); each scales the std of one planted component
    // relative to base_daily_vol.
    double trend_weight = 0.0;
    double mean_reversion_weight = 0.0;
    double cluster_weight = 0.0;
    double lead_lag_weight = 0.0;
    double base_daily_vol = 0.01;
    double trend_persistence = 0.99;        // AR(1) coefficient of the drift state
    double mean_reversion_persistence = 0.9;
    std::vector<int> cluster_assignments;   // per asset; empty -> single cluster
    std::vector<LeadLagPair> lead_lag_pairs;
    // Subtract the cross-asset mean return each day, so an equal-weight
    // portfolio has ~zero mean by construction.
    bool demean_market = false;
    Date start_date = Date(2000, 1, 3);

    void check() const;
};

struct LoadSchema {
    std::string date_column = "date";
};

// External CSV format: header `date,ASSET1,...`, ISO-8601 dates, empty cell = missing.
PricePanel load_prices(const std::string& path, const LoadSchema& schema = {});
void write_prices_csv(const PricePanel& panel, const std::string& path);

ReturnsPanel compute_returns(const PricePanel& prices);

VolPanel ew_volatility(const ReturnsPanel& returns, int span);

PricePanel winsorise(const PricePanel& prices, double n_std = 5.0, int span = 252);

// Drops assets with more than max_missing fraction of missing data over
// train_range (strict inequality), then forward-fills remaining gaps with zero
// returns. Column order is preserved.
ReturnsPanel filter_universe(const ReturnsPanel& returns, const DateSpan& train_range,
                             double max_missing = 0.10);

PricePanel synth_generate(const SynthConfig& config);

// Membership file: CSV `date,asset,member(0|1)`. Membership at a date is the
// most recent flag at or before it.
struct MembershipTable {
    struct Entry {
        Date date;
        int asset = 0;
        bool member = true;
    };
    std::vector<std::string> assets;
    std::vector<Entry> entries;  // sorted by date

    bool is_member(int asset, const Date& d) const;
};

MembershipTable load_membership(const std::string& path, const std::vector<std::string>& assets);

// Universe rule for dynamic-membership datasets: assets flagged as members at
// any point in the week ending at train_end.
std::vector<int> universe_at(const MembershipTable& table, const Date& train_end, int n_assets);

// Per-date active-universe mask (T x N). Without a membership table every
// asset is active on all dates.
BoolArray universe_mask(const std::vector<Date>& dates, int n_assets,
                        const MembershipTable* table = nullptr);

std::uint64_t panel_checksum(const ReturnsPanel& panel);

}  // namespace din::marketdata
