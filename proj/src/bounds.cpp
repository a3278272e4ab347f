#include "belldepth/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "belldepth/localset.hpp"
#include "belldepth/quantum.hpp"

namespace bell {

namespace {

void extend_partitions(int remaining, int cap, std::vector<int>& prefix,
                       std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(Partition{prefix});
        return;
    }
    for (int part = std::min(cap, remaining); part >= 1; --part) {
        prefix.push_back(part);
        extend_partitions(remaining - part, part, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

int Partition::total() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
}

int Partition::block_count() const { return (int)parts.size(); }

int Partition::singleton_count() const {
    return (int)std::count(parts.begin(), parts.end(), 1);
}

Partition make_partition(std::vector<int> parts) {
    require(!parts.empty(), "partition needs at least one part");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        require(parts[i] >= 1, "parts must be positive");
        require(i == 0 || parts[i] <= parts[i - 1], "parts must be non-increasing");
    }
    return Partition{std::move(parts)};
}

std::vector<Partition> partitions_up_to(int n, int k) {
    require(n >= 1 && k >= 1 && k <= n, "need 1 <= k <= n");
    std::vector<Partition> out;
    std::vector<int> prefix;
    extend_partitions(n, k, prefix, out);
    return out;
}

std::vector<Partition> partitions_with_max(int n, int k) {
    require(n >= 1 && k >= 1 && k <= n, "need 1 <= k <= n");
    std::vector<Partition> out;
    std::vector<int> prefix{k};
    extend_partitions(n - k, k, prefix, out);
    return out;
}

WitnessBound producible_quantum_bound(int n, int k) {
    require(n >= 1 && k >= 1 && k <= n, "need 1 <= k <= n");
    WitnessBound w{"iota", n, k, 1.0, true, "local bound"};
    if (k >= 2) {
        w.bound = quantum_max(k).value;
        w.note = "block-size reduction; ansatz maximum at " + std::to_string(k) + " parties";
    }
    return w;
}

WitnessBound producible_ns_bound(int k) {
    require(k >= 1, "need k >= 1");
    return WitnessBound{"ns", k, k, 3.0 - std::exp2(2 - k), true,
                        "no-signaling producibility bound"};
}

double algebraic_max(int n) {
    require(n >= 1, "party count must be >= 1");
    return 3.0 - std::exp2(2 - n);
}

Behavior algebraic_max_witness(int n) {
    require(n >= 1 && n <= 12, "witness construction supports n <= 12");
    const std::size_t m = (std::size_t)1 << n;
    std::vector<double> p(m * m);
    const double base = 1.0 / (double)m;
    for (std::size_t x = 0; x < m; ++x) {
        double g = x == m - 1 ? -1.0 : 1.0;
        for (std::size_t a = 0; a < m; ++a)
            p[(a << n) | x] = base * (1.0 + parity_sign(a) * g);
    }
    return make_behavior(n, std::move(p));
}

double visibility_threshold(int n, int k) {
    require(k >= 1 && k < n && n <= 8, "need 1 <= k < n <= 8");
    return producible_quantum_bound(n, k).bound / quantum_max(n).value;
}

double mabk_partition_bound(const Partition& p) {
    const int n = p.total();
    require(n >= 2, "partition bound needs n >= 2");
    const int m = p.block_count();
    const int L = p.singleton_count();
    return std::exp2(0.5 * (n + L - 2 * m + 1));
}

WitnessBound mabk_producible_bound(int n, int k) {
    require(n >= 2 && k >= 1 && k <= n, "need 1 <= k <= n and n >= 2");
    WitnessBound w{"mabk", n, k, 1.0, true, "local bound"};
    if (k == 1) return w;
    double best = 0;
    Partition arg;
    for (const Partition& p : partitions_up_to(n, k)) {
        double b = mabk_partition_bound(p);
        if (b > best) {
            best = b;
            arg = p;
        }
    }
    w.bound = best;
    w.valid = std::abs(best - std::exp2(0.5 * (k - 1))) < 1e-12;
    w.note = "achieved by blocks {";
    for (std::size_t i = 0; i < arg.parts.size(); ++i)
        w.note += (i ? "," : "") + std::to_string(arg.parts[i]);
    w.note += "}";
    return w;
}

WitnessBound gamma_producible_bound(int n, int k, double gamma, int restarts,
                                    std::uint64_t seed) {
    require(n >= 1 && k >= 1 && k <= n, "need 1 <= k <= n");
    require(gamma > 0 && gamma <= 2, "gamma must lie in (0,2]");
    WitnessBound w{"gamma", n, k, 1.0, true, ""};
    if (k == 1) {
        w.bound = local_bound(gamma_functional(1, gamma)).value;
        w.note = "exact single-party enumeration";
        return w;
    }
    SeesawResult r = seesaw(gamma_functional(k, gamma), k, restarts, seed);
    w.bound = r.value;
    w.note = "see-saw at " + std::to_string(k) + " parties, " + std::to_string(restarts) +
             " restarts, seed " + std::to_string(seed);
    return w;
}

}  // namespace bell
