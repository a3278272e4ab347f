#include "belldepth/localset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace bell {

namespace {

using boost::multiprecision::cpp_int;

constexpr std::int64_t kPrime = 2147483647;  // 2^31 - 1

// v[r] <- sum_x v[x] (-1)^{popcount(r & x)}, in place.
template <class T>
void walsh_transform(std::vector<T>& v) {
    for (std::size_t h = 1; h < v.size(); h <<= 1)
        for (std::size_t i = 0; i < v.size(); i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                T a = v[j], b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
}

// Smallest power of two making every coefficient integral, or 0 if none
// fits comfortably in 64-bit arithmetic.
std::int64_t dyadic_scale(const std::vector<double>& beta) {
    for (int k = 0; k <= 40; ++k) {
        double s = std::exp2(k);
        bool ok = true;
        for (double b : beta) {
            double v = b * s;
            if (std::abs(v - std::round(v)) > 1e-9 * std::max(1.0, std::abs(v))) {
                ok = false;
                break;
            }
        }
        if (ok) return (std::int64_t)s;
    }
    return 0;
}

std::vector<std::int64_t> scaled_walsh(const BellFunctional& f, std::int64_t scale) {
    std::vector<std::int64_t> v(f.beta.size());
    for (std::size_t x = 0; x < v.size(); ++x)
        v[x] = (std::int64_t)std::llround(f.beta[x] * (double)scale);
    walsh_transform(v);
    return v;
}

// Strategy code -> bit masks of negative answers at setting 0 and 1,
// party 1 in the most significant bit.
void code_masks(int n, unsigned code, unsigned& neg0, unsigned& neg1) {
    neg0 = neg1 = 0;
    for (int i = 0; i < n; ++i) {
        unsigned d = code >> (2 * i) & 3u;
        neg0 |= (d & 1u) << i;
        neg1 |= (d >> 1 & 1u) << i;
    }
}

template <class Value>
LocalBoundResult scan_strategies(int n, const std::vector<Value>& fhat, double inv_scale,
                                 bool parallel) {
    const std::size_t total = (std::size_t)1 << (2 * n);
    struct Best {
        Value value;
        unsigned code;
    };
    auto scan_range = [&](std::size_t lo, std::size_t hi) {
        Best best{fhat[((unsigned)1 << n) - 1], 0};
        bool first = true;
        for (std::size_t c = lo; c < hi; ++c) {
            unsigned neg0, neg1;
            code_masks(n, (unsigned)c, neg0, neg1);
            Value v = fhat[neg0 ^ neg1];
            if (parity(neg0)) v = -v;
            if (first || v > best.value) {
                best = Best{v, (unsigned)c};
                first = false;
            }
        }
        return best;
    };
    Best overall{};
    if (!parallel) {
        overall = scan_range(0, total);
    } else {
        int threads = 1;
#ifdef _OPENMP
        threads = omp_get_max_threads();
#endif
        if ((std::size_t)threads > total) threads = (int)total;
        std::vector<Best> partial(threads);
#ifdef _OPENMP
#pragma omp parallel num_threads(threads)
#endif
        {
            int t = 0;
#ifdef _OPENMP
            t = omp_get_thread_num();
#endif
            std::size_t lo = total * t / threads;
            std::size_t hi = total * (t + 1) / threads;
            partial[t] = scan_range(lo, hi);
        }
        overall = partial[0];
        for (int t = 1; t < threads; ++t)
            if (partial[t].value > overall.value) overall = partial[t];
    }
    return LocalBoundResult{(double)overall.value * inv_scale,
                            DeterministicStrategy{n, overall.code}};
}

LocalBoundResult local_bound_impl(const BellFunctional& f, bool parallel) {
    require(f.n >= 1 && f.n <= 10, "local bound supports 1 <= n <= 10");
    std::int64_t scale = dyadic_scale(f.beta);
    if (scale != 0) return scan_strategies(f.n, scaled_walsh(f, scale), 1.0 / (double)scale, parallel);
    std::vector<double> fhat(f.beta);
    walsh_transform(fhat);
    return scan_strategies(f.n, fhat, 1.0, parallel);
}

int rank_mod_p(std::vector<std::vector<std::int64_t>>& m) {
    if (m.empty()) return 0;
    const std::size_t cols = m[0].size();
    for (auto& row : m)
        for (auto& v : row) v = ((v % kPrime) + kPrime) % kPrime;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[rank], m[pivot]);
        // Normalize pivot row to 1 via Fermat inverse.
        std::int64_t inv = 1, base = m[rank][col], e = kPrime - 2;
        while (e) {
            if (e & 1) inv = (__int128)inv * base % kPrime;
            base = (__int128)base * base % kPrime;
            e >>= 1;
        }
        for (std::size_t j = col; j < cols; ++j)
            m[rank][j] = (__int128)m[rank][j] * inv % kPrime;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::size_t i = rank + 1; i < m.size(); ++i) {
            std::int64_t factor = m[i][col];
            if (factor == 0) continue;
            for (std::size_t j = col; j < cols; ++j) {
                std::int64_t v = m[i][j] - (__int128)factor * m[rank][j] % kPrime;
                m[i][j] = v < 0 ? v + kPrime : v;
            }
        }
        ++rank;
    }
    return (int)rank;
}

int rank_exact(std::vector<std::vector<cpp_int>>& m) {
    if (m.empty()) return 0;
    const std::size_t cols = m[0].size();
    std::size_t rank = 0;
    cpp_int prev = 1;
    for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t i = rank + 1; i < m.size(); ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                m[i][j] = (m[rank][col] * m[i][j] - m[i][col] * m[rank][j]) / prev;
            m[i][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return (int)rank;
}

// Affine rank (dimension of the affine hull) of +-1-valued points, exact:
// a fast mod-p elimination certifies the rank whenever it reaches the cap
// implied by the saturated hyperplane; otherwise fall back to fraction-free
// elimination over the integers.
int affine_rank_exact(const std::vector<std::vector<int>>& points, int cap) {
    if (points.size() <= 1) return 0;
    const std::size_t cols = points[0].size();
    std::vector<std::vector<std::int64_t>> diff(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) {
        diff[i - 1].resize(cols);
        for (std::size_t j = 0; j < cols; ++j)
            diff[i - 1][j] = points[i][j] - points[0][j];
    }
    int r = rank_mod_p(diff);
    if (r >= cap) return r;
    std::vector<std::vector<cpp_int>> exact(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) {
        exact[i - 1].resize(cols);
        for (std::size_t j = 0; j < cols; ++j)
            exact[i - 1][j] = points[i][j] - points[0][j];
    }
    return rank_exact(exact);
}

}  // namespace

int DeterministicStrategy::a(int party, int setting) const {
    unsigned d = code >> (2 * (n - party)) & 3u;
    return (d >> setting & 1u) ? -1 : 1;
}

CorrelationTensor DeterministicStrategy::tensor() const {
    unsigned neg0, neg1;
    code_masks(n, code, neg0, neg1);
    std::vector<double> e((std::size_t)1 << n);
    for (unsigned x = 0; x < e.size(); ++x)
        e[x] = parity_sign((neg0 & ~x) | (neg1 & x));
    return make_tensor(n, std::move(e));
}

Behavior DeterministicStrategy::behavior() const {
    unsigned neg0, neg1;
    code_masks(n, code, neg0, neg1);
    const std::size_t m = (std::size_t)1 << n;
    std::vector<double> p(m * m, 0.0);
    for (unsigned x = 0; x < m; ++x) {
        unsigned a = (neg0 & ~x) | (neg1 & x);
        p[((std::size_t)a << n) | x] = 1.0;
    }
    return make_behavior(n, std::move(p));
}

std::vector<DeterministicStrategy> enumerate_deterministic(int n) {
    require(n >= 1 && n <= 10, "enumeration supports 1 <= n <= 10");
    std::vector<DeterministicStrategy> out;
    out.reserve((std::size_t)1 << (2 * n));
    for (std::size_t c = 0; c < (std::size_t)1 << (2 * n); ++c)
        out.push_back(DeterministicStrategy{n, (unsigned)c});
    return out;
}

LocalBoundResult local_bound(const BellFunctional& f) { return local_bound_impl(f, true); }

LocalBoundResult local_bound_serial(const BellFunctional& f) { return local_bound_impl(f, false); }

WernerWolfResult werner_wolf_check(const BellFunctional& f) {
    require(f.n >= 1 && f.n <= 20, "sign transform supports 1 <= n <= 20");
    std::vector<double> fhat(f.beta);
    walsh_transform(fhat);
    bool ok = true;
    for (double v : fhat)
        if (std::abs(std::abs(v) - 1.0) > 1e-9) ok = false;
    return WernerWolfResult{ok, std::move(fhat)};
}

FacetReport facet_check_full_correlation(const BellFunctional& f, double bound) {
    require(f.n >= 1 && f.n <= 8, "full-correlation facet check supports n <= 8");
    const int n = f.n;
    const std::size_t m = (std::size_t)1 << n;
    std::int64_t scale = dyadic_scale(f.beta);
    require(scale != 0, "facet check needs dyadic coefficients");
    std::int64_t target = std::llround(bound * (double)scale);
    require(std::abs(bound * (double)scale - (double)target) < 1e-9,
            "bound is not reachable exactly at this scale");
    auto fhat = scaled_walsh(f, scale);

    std::vector<std::vector<int>> points;
    for (int sigma : {+1, -1})
        for (std::size_t r = 0; r < m; ++r) {
            if (sigma * fhat[r] != target) continue;
            std::vector<int> v(m);
            for (std::size_t x = 0; x < m; ++x)
                v[x] = parity(r & x) ? -sigma : sigma;
            points.push_back(std::move(v));
        }
    require(!points.empty(), "no deterministic vertex saturates the bound");

    FacetReport rep;
    rep.saturating_count = points.size();
    rep.required_rank = (int)m - 1;
    rep.affine_rank = affine_rank_exact(points, rep.required_rank);
    rep.is_facet = rep.affine_rank == rep.required_rank;
    return rep;
}

FacetReport facet_check_local_polytope(const BellFunctional& f, double bound) {
    require(f.n >= 1 && f.n <= 6, "behavior-space facet check supports n <= 6");
    const int n = f.n;
    const unsigned full = ((unsigned)1 << n) - 1;
    std::int64_t scale = dyadic_scale(f.beta);
    require(scale != 0, "facet check needs dyadic coefficients");
    std::int64_t target = std::llround(bound * (double)scale);
    require(std::abs(bound * (double)scale - (double)target) < 1e-9,
            "bound is not reachable exactly at this scale");
    auto fhat = scaled_walsh(f, scale);

    // Coordinates: marginal correlators E_S(x_S) over every nonempty party
    // subset S, a linear chart of the no-signaling subspace (dim 3^n - 1).
    std::vector<std::pair<unsigned, unsigned>> coords;
    for (unsigned S = 1; S <= full; ++S) {
        unsigned xs = 0;
        while (true) {
            coords.emplace_back(S, xs);
            if (xs == S) break;
            xs = (xs - S) & S;  // next submask upward
        }
    }

    std::vector<std::vector<int>> points;
    for (std::size_t c = 0; c < (std::size_t)1 << (2 * n); ++c) {
        unsigned neg0, neg1;
        code_masks(n, (unsigned)c, neg0, neg1);
        std::int64_t v = fhat[neg0 ^ neg1];
        if (parity(neg0)) v = -v;
        if (v != target) continue;
        std::vector<int> row(coords.size());
        for (std::size_t k = 0; k < coords.size(); ++k) {
            auto [S, xs] = coords[k];
            row[k] = parity_sign(((neg0 & ~xs) | (neg1 & xs)) & S) > 0 ? 1 : -1;
        }
        points.push_back(std::move(row));
    }
    require(!points.empty(), "no deterministic vertex saturates the bound");

    FacetReport rep;
    rep.saturating_count = points.size();
    rep.required_rank = 1;
    for (int i = 0; i < n; ++i) rep.required_rank *= 3;
    rep.required_rank -= 2;
    rep.affine_rank = affine_rank_exact(points, rep.required_rank);
    rep.is_facet = rep.affine_rank == rep.required_rank;
    return rep;
}

}  // namespace bell
