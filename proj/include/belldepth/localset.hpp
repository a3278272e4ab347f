#pragma once

#include <cstddef>
#include <vector>

#include "belldepth/correl.hpp"

namespace bell {

// Deterministic local strategy: party i answers a_i(x_i) in {-1,+1}.
// Encoded as a base-4 code with party 1 in the most significant digit;
// digit bit 0 holds a_i(0), bit 1 holds a_i(1), bit value 0 meaning +1.
struct DeterministicStrategy {
    int n = 0;
    unsigned code = 0;

    int a(int party, int setting) const;
    CorrelationTensor tensor() const;
    Behavior behavior() const;
};

struct LocalBoundResult {
    double value = 0;
    DeterministicStrategy strategy;
};

struct WernerWolfResult {
    bool sign_valued = false;
    std::vector<double> f;  // f(r) = sum_x beta(x) (-1)^{r.x}, indexed like settings
};

struct FacetReport {
    std::size_t saturating_count = 0;
    int affine_rank = 0;
    int required_rank = 0;
    bool is_facet = false;
};

std::vector<DeterministicStrategy> enumerate_deterministic(int n);

// Exact maximum over deterministic strategies; ties broken by lowest code.
LocalBoundResult local_bound(const BellFunctional& f);
LocalBoundResult local_bound_serial(const BellFunctional& f);

WernerWolfResult werner_wolf_check(const BellFunctional& f);

// Affine rank of the saturating vertices in full-correlation space
// (required rank 2^n - 1) and in behavior space (required rank 3^n - 2).
FacetReport facet_check_full_correlation(const BellFunctional& f, double bound);
FacetReport facet_check_local_polytope(const BellFunctional& f, double bound);

}  // namespace bell
