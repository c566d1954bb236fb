#include "din/core.hpp"

#include <cstdio>

namespace din {

std::string Fnv1a::hex() const { return to_hex(state_); }

std::uint64_t fnv1a(const std::string& s) {
    Fnv1a h;
    h.update(s);
    return h.digest();
}

std::string to_hex(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace din
