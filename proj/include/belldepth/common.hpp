#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bell {

// Setting/outcome indices pack party 1 into the most significant bit.
inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }
inline double parity_sign(std::uint64_t v) { return parity(v) ? -1.0 : 1.0; }

inline std::string bits_to_string(int n, unsigned idx) {
    std::string s(n, '0');
    for (int i = 0; i < n; ++i)
        if (idx >> (n - 1 - i) & 1u) s[i] = '1';
    return s;
}

inline unsigned bits_from_string(int n, const std::string& s) {
    if ((int)s.size() != n) throw std::invalid_argument("bitstring length != n");
    unsigned idx = 0;
    for (int i = 0; i < n; ++i) {
        char c = s[i];
        if (c != '0' && c != '1') throw std::invalid_argument("bitstring must be over {0,1}");
        idx = idx << 1 | (c == '1' ? 1u : 0u);
    }
    return idx;
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace bell
