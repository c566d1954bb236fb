#include "din/marketdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "din/core.hpp"
#include "din/rng.hpp"

namespace din::marketdata {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

int find_row(const std::vector<Date>& dates, const Date& d) {
    auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end() || *it != d) return -1;
    return static_cast<int>(it - dates.begin());
}

void check_common(const std::vector<Date>& dates, const std::vector<std::string>& assets,
                  const MatrixXd& values, const BoolArray& mask, const char* what) {
    if (static_cast<Eigen::Index>(dates.size()) != values.rows())
        throw data_error(std::string(what) + ": dates/values row mismatch");
    if (static_cast<Eigen::Index>(assets.size()) != values.cols())
        throw data_error(std::string(what) + ": assets/values column mismatch");
    if (mask.rows() != values.rows() || mask.cols() != values.cols())
        throw data_error(std::string(what) + ": mask shape mismatch");
    for (std::size_t t = 1; t < dates.size(); ++t)
        if (!(dates[t - 1] < dates[t]))
            throw data_error(std::string(what) + ": dates not strictly increasing at row " +
                             std::to_string(t));
    for (Eigen::Index t = 0; t < values.rows(); ++t)
        for (Eigen::Index i = 0; i < values.cols(); ++i)
            if (mask(t, i) && !std::isfinite(values(t, i)))
                throw data_error(std::string(what) + ": non-finite value at present cell");
}

}  // namespace

std::string to_string(AssetClass c) {
    switch (c) {
        case AssetClass::futures: return "futures";
        case AssetClass::equity: return "equity";
        case AssetClass::crypto: return "crypto";
        case AssetClass::fx: return "fx";
        case AssetClass::synthetic: return "synthetic";
    }
    return "synthetic";
}

AssetClass asset_class_from_string(const std::string& s) {
    if (s == "futures") return AssetClass::futures;
    if (s == "equity") return AssetClass::equity;
    if (s == "crypto") return AssetClass::crypto;
    if (s == "fx") return AssetClass::fx;
    if (s == "synthetic") return AssetClass::synthetic;
    throw config_error("unknown asset class '" + s + "'");
}

void PricePanel::check() const { check_common(dates, assets, values, mask, "PricePanel"); }
int PricePanel::row_of(const Date& d) const { return find_row(dates, d); }

void ReturnsPanel::check() const {
    check_common(dates, assets, values, mask, "ReturnsPanel");
    for (Eigen::Index t = 0; t < values.rows(); ++t)
        for (Eigen::Index i = 0; i < values.cols(); ++i)
            if (mask(t, i) && values(t, i) <= -1.0)
                throw data_error("ReturnsPanel: return <= -100% at row " + std::to_string(t));
}
int ReturnsPanel::row_of(const Date& d) const { return find_row(dates, d); }

int VolPanel::row_of(const Date& d) const { return find_row(dates, d); }

void SynthConfig::check() const {
    if (n_assets < 1 || n_days < 3) throw config_error("SynthConfig: need n_assets >= 1, n_days >= 3");
    if (trend_weight < 0 || mean_reversion_weight < 0 || cluster_weight < 0 || lead_lag_weight < 0)
        throw config_error("SynthConfig: mix weights must be >= 0");
    if (base_daily_vol <= 0) throw config_error("SynthConfig: base_daily_vol must be > 0");
    for (const auto& p : lead_lag_pairs) {
        if (p.lag < 1) throw config_error("SynthConfig: lead-lag lag must be >= 1 day");
        if (p.leader < 0 || p.leader >= n_assets || p.follower < 0 || p.follower >= n_assets)
            throw config_error("SynthConfig: lead-lag asset index out of range");
    }
    if (!cluster_assignments.empty() && static_cast<int>(cluster_assignments.size()) != n_assets)
        throw config_error("SynthConfig: cluster_assignments size mismatch");
}

PricePanel load_prices(const std::string& path, const LoadSchema& schema) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open price file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw data_error("empty price file '" + path + "'");
    auto header = split_csv_line(line);
    if (header.empty() || header[0] != schema.date_column)
        throw data_error("price file '" + path + "': first column must be '" +
                         schema.date_column + "'");

    PricePanel panel;
    panel.assets.assign(header.begin() + 1, header.end());
    const auto n_assets = static_cast<Eigen::Index>(panel.assets.size());
    if (n_assets == 0) throw data_error("price file '" + path + "': no asset columns");

    std::vector<Date> dates;
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<bool>> masks;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<Eigen::Index>(cells.size()) != n_assets + 1)
            throw data_error("price file row " + std::to_string(line_no) + ": expected " +
                             std::to_string(n_assets + 1) + " cells, got " +
                             std::to_string(cells.size()));
        Date d;
        if (!Date::try_parse(cells[0], d))
            throw data_error("price file row " + std::to_string(line_no) +
                             ": unparsable date '" + cells[0] + "'");
        std::vector<double> vals(static_cast<std::size_t>(n_assets), 0.0);
        std::vector<bool> present(static_cast<std::size_t>(n_assets), false);
        for (Eigen::Index i = 0; i < n_assets; ++i) {
            const std::string& cell = cells[static_cast<std::size_t>(i) + 1];
            if (cell.empty()) continue;
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != cell.size())
                throw data_error("price file row " + std::to_string(line_no) + ", column '" +
                                 panel.assets[static_cast<std::size_t>(i)] +
                                 "': non-numeric price '" + cell + "'");
            vals[static_cast<std::size_t>(i)] = v;
            present[static_cast<std::size_t>(i)] = true;
        }
        dates.push_back(d);
        rows.push_back(std::move(vals));
        masks.push_back(std::move(present));
    }

    if (dates.empty()) throw data_error("price file '" + path + "': no data rows");

    std::vector<std::size_t> order(dates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return dates[a] < dates[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (dates[order[i - 1]] == dates[order[i]])
            throw data_error("price file '" + path + "': duplicate date " +
                             dates[order[i]].to_string());

    const auto n_rows = static_cast<Eigen::Index>(dates.size());
    panel.dates.resize(dates.size());
    panel.values.resize(n_rows, n_assets);
    panel.mask.resize(n_rows, n_assets);
    for (Eigen::Index t = 0; t < n_rows; ++t) {
        const auto src = order[static_cast<std::size_t>(t)];
        panel.dates[static_cast<std::size_t>(t)] = dates[src];
        for (Eigen::Index i = 0; i < n_assets; ++i) {
            panel.values(t, i) = rows[src][static_cast<std::size_t>(i)];
            panel.mask(t, i) = masks[src][static_cast<std::size_t>(i)];
        }
    }
    panel.check();
    return panel;
}

void write_prices_csv(const PricePanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write '" + path + "'");
    out << "date";
    for (const auto& a : panel.assets) out << ',' << a;
    out << '\n';
    out.precision(17);
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        out << panel.dates[static_cast<std::size_t>(t)].to_string();
        for (Eigen::Index i = 0; i < panel.cols(); ++i) {
            out << ',';
            if (panel.mask(t, i)) out << panel.values(t, i);
        }
        out << '\n';
    }
}

ReturnsPanel compute_returns(const PricePanel& prices) {
    if (prices.rows() < 2) throw data_error("compute_returns: need at least 2 price rows");
    for (Eigen::Index t = 0; t < prices.rows(); ++t)
        for (Eigen::Index i = 0; i < prices.cols(); ++i)
            if (prices.mask(t, i) && prices.values(t, i) <= 0.0)
                throw data_error("compute_returns: non-positive price for asset '" +
                                 prices.assets[static_cast<std::size_t>(i)] + "' at " +
                                 prices.dates[static_cast<std::size_t>(t)].to_string());

    ReturnsPanel out;
    out.assets = prices.assets;
    out.asset_class = prices.asset_class;
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    const auto rows = prices.rows() - 1;
    out.values = MatrixXd::Zero(rows, prices.cols());
    out.mask = BoolArray::Constant(rows, prices.cols(), false);
    for (Eigen::Index t = 0; t < rows; ++t) {
        for (Eigen::Index i = 0; i < prices.cols(); ++i) {
            if (prices.mask(t, i) && prices.mask(t + 1, i)) {
                out.values(t, i) = prices.values(t + 1, i) / prices.values(t, i) - 1.0;
                out.mask(t, i) = true;
            }
        }
    }
    out.check();
    return out;
}

VolPanel ew_volatility(const ReturnsPanel& returns, int span) {
    if (span < 2) throw config_error("ew_volatility: span must be >= 2");
    VolPanel out;
    out.dates = returns.dates;
    out.assets = returns.assets;
    out.span = span;
    out.values = MatrixXd::Zero(returns.rows(), returns.cols());
    out.mask = BoolArray::Constant(returns.rows(), returns.cols(), false);

    const double alpha = 2.0 / (span + 1.0);
    const double ann = std::sqrt(VolPanel::kAnnualisationDays);
    for (Eigen::Index i = 0; i < returns.cols(); ++i) {
        bool seeded = false;
        double m = 0.0, v = 0.0;
        for (Eigen::Index t = 0; t < returns.rows(); ++t) {
            if (returns.mask(t, i)) {
                const double x = returns.values(t, i);
                if (!seeded) {
                    m = x;
                    v = 0.0;
                    seeded = true;
                } else {
                    const double prev_m = m;
                    m = (1.0 - alpha) * m + alpha * x;
                    v = (1.0 - alpha) * v + alpha * (x - prev_m) * (x - m);
                }
            }
            if (seeded) {
                out.values(t, i) = std::sqrt(std::max(v, 0.0)) * ann;
                out.mask(t, i) = true;
            }
        }
    }
    return out;
}

PricePanel winsorise(const PricePanel& prices, double n_std, int span) {
    PricePanel out = prices;
    const double alpha = 2.0 / (span + 1.0);
    // EW state burn-in: no clipping until the std estimate has seen enough returns.
    const int warmup = std::max(10, span / 4);

    for (Eigen::Index i = 0; i < prices.cols(); ++i) {
        std::vector<Eigen::Index> present;
        for (Eigen::Index t = 0; t < prices.rows(); ++t)
            if (prices.mask(t, i)) present.push_back(t);
        if (present.size() < 2) continue;

        double rebuilt = prices.values(present[0], i);
        out.values(present[0], i) = rebuilt;
        bool seeded = false;
        double m = 0.0, v = 0.0;
        int n_obs = 0;
        for (std::size_t k = 1; k < present.size(); ++k) {
            const Eigen::Index prev = present[k - 1];
            const Eigen::Index cur = present[k];
            double r = prices.values(cur, i) / prices.values(prev, i) - 1.0;
            const bool adjacent = (cur == prev + 1);
            if (adjacent) {
                if (seeded && n_obs >= warmup) {
                    const double limit = n_std * std::sqrt(std::max(v, 0.0));
                    r = std::clamp(r, -limit, limit);
                }
                // Update the std estimate from the clipped series, so a second
                // pass reproduces the same state and makes no further changes.
                if (!seeded) {
                    m = r;
                    v = 0.0;
                    seeded = true;
                } else {
                    const double prev_m = m;
                    m = (1.0 - alpha) * m + alpha * r;
                    v = (1.0 - alpha) * v + alpha * (r - prev_m) * (r - m);
                }
                ++n_obs;
            }
            rebuilt *= (1.0 + r);
            out.values(cur, i) = rebuilt;
        }
    }
    return out;
}

ReturnsPanel filter_universe(const ReturnsPanel& returns, const DateSpan& train_range,
                             double max_missing) {
    std::vector<Eigen::Index> train_rows;
    for (Eigen::Index t = 0; t < returns.rows(); ++t)
        if (train_range.contains(returns.dates[static_cast<std::size_t>(t)]))
            train_rows.push_back(t);
    if (train_rows.empty()) throw data_error("filter_universe: train range covers no rows");

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < returns.cols(); ++i) {
        Eigen::Index missing = 0;
        for (auto t : train_rows)
            if (!returns.mask(t, i)) ++missing;
        const double frac = static_cast<double>(missing) / static_cast<double>(train_rows.size());
        if (frac <= max_missing) keep.push_back(i);
    }
    if (keep.empty()) throw data_error("filter_universe: no assets survive the missing-data rule");

    ReturnsPanel out;
    out.dates = returns.dates;
    out.asset_class = returns.asset_class;
    out.values = MatrixXd::Zero(returns.rows(), static_cast<Eigen::Index>(keep.size()));
    out.mask = BoolArray::Constant(returns.rows(), static_cast<Eigen::Index>(keep.size()), true);
    for (std::size_t j = 0; j < keep.size(); ++j) {
        out.assets.push_back(returns.assets[static_cast<std::size_t>(keep[j])]);
        for (Eigen::Index t = 0; t < returns.rows(); ++t)
            out.values(t, static_cast<Eigen::Index>(j)) =
                returns.mask(t, keep[j]) ? returns.values(t, keep[j]) : 0.0;
    }
    return out;
}

PricePanel synth_generate(const SynthConfig& config) {
    config.check();
    Rng rng(config.seed);

    const int n = config.n_assets;
    const int days = config.n_days - 1;  // return rows; prices get one extra row
    const double base = config.base_daily_vol;

    std::vector<int> clusters = config.cluster_assignments;
    if (clusters.empty()) clusters.assign(static_cast<std::size_t>(n), 0);
    const int n_clusters = 1 + *std::max_element(clusters.begin(), clusters.end());

    const double phi = config.trend_persistence;
    const double psi = config.mean_reversion_persistence;
    const double sd_drift = config.trend_weight * base;
    const double sd_drift_innov = sd_drift * std::sqrt(std::max(1.0 - phi * phi, 1e-12));
    const double sd_dev = config.mean_reversion_weight * base /
                          std::sqrt(std::max(2.0 * (1.0 - psi), 1e-12));
    const double sd_dev_innov = sd_dev * std::sqrt(std::max(1.0 - psi * psi, 1e-12));
    const double sd_cluster = config.cluster_weight * base;

    MatrixXd r = MatrixXd::Zero(days, n);
    std::vector<double> drift(static_cast<std::size_t>(n), 0.0);
    std::vector<double> dev(static_cast<std::size_t>(n), 0.0);

    for (int t = 0; t < days; ++t) {
        std::vector<double> factor(static_cast<std::size_t>(n_clusters), 0.0);
        for (int c = 0; c < n_clusters; ++c) factor[static_cast<std::size_t>(c)] = rng.normal();
        for (int i = 0; i < n; ++i) {
            auto ui = static_cast<std::size_t>(i);
            drift[ui] = phi * drift[ui] + rng.normal(0.0, sd_drift_innov);
            const double prev_dev = dev[ui];
            dev[ui] = psi * dev[ui] + rng.normal(0.0, sd_dev_innov);
            double x = drift[ui] + (dev[ui] - prev_dev) + rng.normal(0.0, base);
            x += sd_cluster * factor[static_cast<std::size_t>(clusters[ui])];
            r(t, i) = x;
        }
        if (config.lead_lag_weight > 0.0) {
            for (const auto& p : config.lead_lag_pairs) {
                if (t - p.lag >= 0)
                    r(t, p.follower) += config.lead_lag_weight * p.coupling * r(t - p.lag, p.leader);
            }
        }
        if (config.demean_market) {
            const double mean = r.row(t).mean();
            r.row(t).array() -= mean;
        }
        for (int i = 0; i < n; ++i) r(t, i) = std::max(r(t, i), -0.5);
    }

    PricePanel panel;
    panel.asset_class = AssetClass::synthetic;
    panel.dates = weekday_calendar(config.start_date, config.n_days);
    panel.assets.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "A%02d", i);
        panel.assets.emplace_back(buf);
    }
    panel.values.resize(config.n_days, n);
    panel.mask = BoolArray::Constant(config.n_days, n, true);
    for (int i = 0; i < n; ++i) {
        double p = 100.0;
        panel.values(0, i) = p;
        for (int t = 0; t < days; ++t) {
            p *= (1.0 + r(t, i));
            panel.values(t + 1, i) = p;
        }
    }
    panel.check();
    return panel;
}

bool MembershipTable::is_member(int asset, const Date& d) const {
    bool found = false;
    bool value = true;
    bool any_for_asset = false;
    for (const auto& e : entries) {
        if (e.asset != asset) continue;
        any_for_asset = true;
        if (e.date <= d) {
            value = e.member;
            found = true;
        } else {
            break;
        }
    }
    if (!any_for_asset) return true;  // assets absent from the table are always in
    return found ? value : false;
}

MembershipTable load_membership(const std::string& path, const std::vector<std::string>& assets) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open membership file '" + path + "'");
    MembershipTable table;
    table.assets = assets;
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < assets.size(); ++i) index[assets[i]] = static_cast<int>(i);

    std::string line;
    if (!std::getline(in, line)) throw data_error("empty membership file '" + path + "'");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 3)
            throw data_error("membership file row " + std::to_string(line_no) +
                             ": expected date,asset,member");
        auto it = index.find(cells[1]);
        if (it == index.end())
            throw data_error("membership file row " + std::to_string(line_no) +
                             ": unknown asset '" + cells[1] + "'");
        MembershipTable::Entry e;
        e.date = Date::parse(cells[0]);
        e.asset = it->second;
        e.member = cells[2] == "1";
        table.entries.push_back(e);
    }
    std::stable_sort(table.entries.begin(), table.entries.end(),
                     [](const auto& a, const auto& b) { return a.date < b.date; });
    return table;
}

std::vector<int> universe_at(const MembershipTable& table, const Date& train_end, int n_assets) {
    std::vector<int> out;
    for (int i = 0; i < n_assets; ++i) {
        bool in = false;
        for (int back = 0; back < 7 && !in; ++back)
            in = table.is_member(i, train_end.add_days(-back));
        if (in) out.push_back(i);
    }
    return out;
}

BoolArray universe_mask(const std::vector<Date>& dates, int n_assets,
                        const MembershipTable* table) {
    BoolArray mask = BoolArray::Constant(static_cast<Eigen::Index>(dates.size()), n_assets, true);
    if (table) {
        for (std::size_t t = 0; t < dates.size(); ++t)
            for (int i = 0; i < n_assets; ++i)
                mask(static_cast<Eigen::Index>(t), i) = table->is_member(i, dates[t]);
    }
    return mask;
}

std::uint64_t panel_checksum(const ReturnsPanel& panel) {
    Fnv1a h;
    h.update(static_cast<std::uint64_t>(panel.rows()));
    h.update(static_cast<std::uint64_t>(panel.cols()));
    for (const auto& a : panel.assets) h.update(a);
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        h.update(static_cast<std::int64_t>(panel.dates[static_cast<std::size_t>(t)].serial()));
        for (Eigen::Index i = 0; i < panel.cols(); ++i) {
            h.update(panel.mask(t, i) ? panel.values(t, i) : std::numeric_limits<double>::quiet_NaN());
        }
    }
    return h.digest();
}

}  // namespace din::marketdata
