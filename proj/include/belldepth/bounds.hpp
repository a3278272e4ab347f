#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "belldepth/correl.hpp"

namespace bell {

// Grouping of n parties into blocks, parts non-increasing.
struct Partition {
    std::vector<int> parts;

    int total() const;
    int block_count() const;
    int singleton_count() const;
};

struct WitnessBound {
    std::string family;  // "iota" | "gamma" | "mabk" | "ns"
    int n = 0;
    int k = 0;
    double bound = 0;
    bool valid = true;
    std::string note;
};

Partition make_partition(std::vector<int> parts);

// All partitions of n with parts bounded by k (max part <= k), and the
// subset whose largest part equals k; descending lexicographic order.
std::vector<Partition> partitions_up_to(int n, int k);
std::vector<Partition> partitions_with_max(int n, int k);

WitnessBound producible_quantum_bound(int n, int k);
WitnessBound producible_ns_bound(int k);

double algebraic_max(int n);
// No-signaling behavior reaching algebraic_max(n) on the I_n functional.
Behavior algebraic_max_witness(int n);

double visibility_threshold(int n, int k);

double mabk_partition_bound(const Partition& p);
WitnessBound mabk_producible_bound(int n, int k);

WitnessBound gamma_producible_bound(int n, int k, double gamma, int restarts = 50,
                                    std::uint64_t seed = 20260814);

}  // namespace bell
