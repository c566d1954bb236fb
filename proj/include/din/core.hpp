#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace din {

// Error categories map onto CLI exit codes: config -> 2, data -> 3, training -> 4.
enum class ErrorKind { config, data, training, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Error config_error(const std::string& msg) { return Error(ErrorKind::config, msg); }
inline Error data_error(const std::string& msg) { return Error(ErrorKind::data, msg); }
inline Error training_error(const std::string& msg) { return Error(ErrorKind::training, msg); }

// FNV-1a, used for config hashes and data checksums. Stable across platforms.
class Fnv1a {
public:
    void update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    void update(const std::string& s) { update(s.data(), s.size()); }
    void update(std::uint64_t v) { update(&v, sizeof(v)); }
    void update(std::int64_t v) { update(&v, sizeof(v)); }
    void update(double v) { update(&v, sizeof(v)); }
    std::uint64_t digest() const { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a(const std::string& s);
std::string to_hex(std::uint64_t v);

}  // namespace din
