#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "belldepth/localset.hpp"

using namespace bell;

namespace {

// Direct O(4^n) oracle for the sign transform.
std::vector<double> direct_sign_transform(const BellFunctional& f) {
    const std::size_t m = f.beta.size();
    std::vector<double> out(m, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t x = 0; x < m; ++x) out[r] += f.beta[x] * parity_sign(r & x);
    return out;
}

// Direct local bound: evaluate every deterministic tensor.
LocalBoundResult direct_local_bound(const BellFunctional& f) {
    LocalBoundResult best;
    bool first = true;
    for (const auto& s : enumerate_deterministic(f.n)) {
        double v = evaluate(f, s.tensor());
        if (first || v > best.value + 1e-12) {
            best = LocalBoundResult{v, s};
            first = false;
        }
    }
    return best;
}

BellFunctional random_dyadic_functional(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dist(-8, 8);
    std::vector<double> beta((std::size_t)1 << n);
    for (double& b : beta) b = dist(rng) / 8.0;
    return BellFunctional{n, std::move(beta), "random"};
}

// beta with f(r) = sign(r); every such functional has local bound 1 and is
// a facet of the full-correlation polytope.
BellFunctional functional_from_sign(int n, const std::vector<int>& sign) {
    const std::size_t m = (std::size_t)1 << n;
    std::vector<double> beta(m, 0.0);
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t r = 0; r < m; ++r) beta[x] += sign[r] * parity_sign(r & x);
        beta[x] /= (double)m;
    }
    return BellFunctional{n, std::move(beta), "sign"};
}

}  // namespace

TEST_CASE("strategy decoding matches the documented code layout") {
    CHECK(enumerate_deterministic(2).size() == 16);
    CHECK(enumerate_deterministic(3).size() == 64);

    DeterministicStrategy s{2, 6};  // digits (1,2): party 1 = (-1,+1), party 2 = (+1,-1)
    CHECK(s.a(1, 0) == -1);
    CHECK(s.a(1, 1) == +1);
    CHECK(s.a(2, 0) == +1);
    CHECK(s.a(2, 1) == -1);

    for (const auto& str : enumerate_deterministic(3)) {
        auto t = str.tensor();
        for (unsigned x = 0; x < 8; ++x) {
            int prod = str.a(1, x >> 2 & 1) * str.a(2, x >> 1 & 1) * str.a(3, x & 1);
            CHECK(t.at(x) == (double)prod);
        }
        auto b = str.behavior();
        auto from_b = correlators_from_behavior(b);
        for (unsigned x = 0; x < 8; ++x) CHECK(from_b.at(x) == t.at(x));
    }
}

TEST_CASE("local bound is exactly 1 for the corner family") {
    for (int n = 2; n <= 6; ++n) {
        auto r = local_bound(sliwa_functional(n));
        CHECK(r.value == 1.0);
        CHECK(evaluate(sliwa_functional(n), r.strategy.tensor()) == 1.0);
    }
    for (int n = 2; n <= 5; ++n) CHECK(local_bound(mabk_functional(n)).value == doctest::Approx(1.0).epsilon(1e-12));
    for (double gamma : {0.25, 1.0, 1.75}) CHECK(local_bound(gamma_functional(4, gamma)).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parallel and serial scans agree, ties go to the lowest code") {
    std::mt19937_64 rng(31);
    for (int n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            auto f = random_dyadic_functional(n, rng);
            auto a = local_bound(f);
            auto b = local_bound_serial(f);
            auto c = direct_local_bound(f);
            CHECK(a.value == b.value);
            CHECK(a.strategy.code == b.strategy.code);
            CHECK(std::abs(a.value - c.value) < 1e-9);
            CHECK(a.strategy.code == c.strategy.code);
        }
    }
    BellFunctional zero{3, std::vector<double>(8, 0.0), "zero"};
    auto r = local_bound(zero);
    CHECK(r.value == 0.0);
    CHECK(r.strategy.code == 0);
}

TEST_CASE("sign transform matches the direct oracle and the closed form") {
    std::mt19937_64 rng(37);
    for (int n = 2; n <= 6; ++n) {
        auto f = sliwa_functional(n);
        auto ww = werner_wolf_check(f);
        CHECK(ww.sign_valued);
        auto direct = direct_sign_transform(f);
        for (std::size_t r = 0; r < ww.f.size(); ++r) {
            CHECK(std::abs(ww.f[r] - direct[r]) < 1e-9);
            double closed = (r == 0 ? 2.0 : 0.0) - parity_sign(r);
            CHECK(ww.f[r] == doctest::Approx(closed));
        }
        auto g = random_dyadic_functional(n, rng);
        auto gw = werner_wolf_check(g);
        auto gd = direct_sign_transform(g);
        for (std::size_t r = 0; r < gw.f.size(); ++r) CHECK(std::abs(gw.f[r] - gd[r]) < 1e-9);
    }
    CHECK(!werner_wolf_check(gamma_functional(3, 1.0)).sign_valued);

    // quarter-wave coefficients give signs that flip every two Hamming weights
    auto m3 = werner_wolf_check(mabk_functional(3));
    CHECK(m3.sign_valued);
    for (unsigned r = 0; r < 8; ++r)
        CHECK(m3.f[r] == doctest::Approx(std::popcount(r) & 2 ? -1.0 : 1.0));
}

TEST_CASE("full-correlation facet ranks") {
    for (int n = 2; n <= 5; ++n) {
        auto rep = facet_check_full_correlation(sliwa_functional(n), 1.0);
        CHECK(rep.saturating_count == (std::size_t)1 << n);
        CHECK(rep.required_rank == (1 << n) - 1);
        CHECK(rep.affine_rank == rep.required_rank);
        CHECK(rep.is_facet);
    }
}

TEST_CASE("every sign-valued functional is a full-correlation facet") {
    std::mt19937_64 rng(41);
    for (int n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<int> sign((std::size_t)1 << n);
            for (int& s : sign) s = rng() & 1 ? 1 : -1;
            auto f = functional_from_sign(n, sign);
            CHECK(werner_wolf_check(f).sign_valued);
            CHECK(local_bound(f).value == 1.0);
            CHECK(facet_check_full_correlation(f, 1.0).is_facet);
        }
    }
}

TEST_CASE("lifted functionals are not facets") {
    // CHSH/2 acting on parties 1-2 of three, blind to party 3's setting.
    auto m2 = mabk_functional(2);
    std::vector<double> beta(8);
    for (unsigned x = 0; x < 8; ++x) beta[x] = m2.beta[x >> 1] / 2.0;
    BellFunctional lifted{3, std::move(beta), "lifted"};
    CHECK(local_bound(lifted).value == doctest::Approx(1.0).epsilon(1e-12));
    auto rep = facet_check_full_correlation(lifted, 1.0);
    CHECK(!rep.is_facet);
    CHECK(rep.affine_rank < rep.required_rank);

    // Mermin/2 is sign-valued, so it is a genuine facet.
    auto mermin = facet_check_full_correlation(mabk_functional(3), 1.0);
    CHECK(mermin.is_facet);
    CHECK(mermin.affine_rank == 7);
}

TEST_CASE("behavior-space facet ranks") {
    for (int n = 2; n <= 4; ++n) {
        auto rep = facet_check_local_polytope(sliwa_functional(n), 1.0);
        std::size_t expected_points = (std::size_t)1 << (2 * n - 1);
        CHECK(rep.saturating_count == expected_points);
        int required = 1;
        for (int i = 0; i < n; ++i) required *= 3;
        required -= 2;
        CHECK(rep.required_rank == required);
        CHECK(rep.affine_rank == required);
        CHECK(rep.is_facet);
    }
}

TEST_CASE("facet checks reject non-dyadic coefficients") {
    std::vector<double> beta(4, 1.0 / 3.0);
    BellFunctional f{2, std::move(beta), "thirds"};
    CHECK_THROWS(facet_check_full_correlation(f, 1.0));
}
