#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "belldepth/bounds.hpp"
#include "belldepth/correl.hpp"

namespace bell {

// Per-party symbols of a moment-matrix entry at relaxation level 1:
// 0 = I, 1 = A0, 2 = A1, 3 = A0 A1, 4 = A1 A0.
struct MomentLabel {
    std::vector<int> word;     // one symbol per party, party 1 first
    bool observable = false;   // no symbol 3/4: reduces to a marginal correlator
    unsigned subset = 0;       // parties carrying a measurement (observable labels)
    unsigned settings = 0;     // their settings, party 1 = MSB
};

// Moment matrix of monomials {I, A0, A1} per party; rows indexed base-3,
// party 1 in the most significant trit.  Entries with the same label (up to
// a global adjoint, which fixes the real part) share one variable.
struct MomentStructure {
    int n = 0;
    int level = 1;
    int dim = 0;
    std::vector<MomentLabel> labels;  // observables first, then free entries
    std::vector<int> entry_label;     // dim*dim -> index into labels
    int observable_count = 0;
    int free_count = 0;

    int label_of(int r, int c) const { return entry_label[(std::size_t)r * dim + c]; }
};

struct SdpEntry {
    int var = 0;  // 0 is the constant matrix
    int block = 0;
    int i = 0;
    int j = 0;
    double value = 0;
};

struct SdpProblem {
    int nvars = 0;
    std::vector<int> block_sizes;  // negative size marks a diagonal block
    std::vector<double> objective;
    std::vector<SdpEntry> entries;
    json catalog;  // sidecar content, not part of the solver file
};

MomentStructure build_moment_structure(int n, int level = 1);

// Entry permutation realizing the partial transpose over the given party
// group (mask, party 1 = MSB); an involution on flattened (row, col) pairs.
std::vector<std::size_t> partial_transpose_indexing(const MomentStructure& s,
                                                    unsigned group_mask);

SdpProblem export_producible_sdp(const BellFunctional& f, const Partition& p, int level,
                                 const std::string& path);
SdpProblem export_membership_sdp(const Behavior& b, int k, int level,
                                 const std::string& path);

SdpProblem parse_sdpa_file(const std::string& path);
bool same_problem(const SdpProblem& a, const SdpProblem& b);

// Consecutive party blocks realizing a partition, party 1 = MSB masks.
std::vector<unsigned> groups_from_partition(int n, const Partition& p);
// All groupings of n parties into blocks of size <= k, as group-mask lists.
std::vector<std::vector<unsigned>> set_partitions_max_block(int n, int k);

}  // namespace bell
