#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "belldepth/correl.hpp"

using namespace bell;

namespace {

CorrelationTensor random_tensor(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> e((std::size_t)1 << n);
    for (double& v : e) v = dist(rng);
    return make_tensor(n, std::move(e));
}

Behavior pr_box() {
    std::vector<double> p(16, 0.0);
    for (unsigned x = 0; x < 4; ++x)
        for (unsigned a = 0; a < 4; ++a)
            if (((a >> 1) ^ (a & 1)) == ((x >> 1) & x & 1)) p[(a << 2) | x] = 0.5;
    return make_behavior(2, std::move(p));
}

}  // namespace

TEST_CASE("functional coefficient layout") {
    auto f3 = sliwa_functional(3);
    CHECK(f3.n == 3);
    CHECK(f3.name == "I3");
    for (unsigned x = 0; x < 7; ++x) CHECK(f3.beta[x] == 0.25);
    CHECK(f3.beta[7] == -0.75);

    auto g = gamma_functional(3, 1.0);
    for (unsigned x = 0; x < 7; ++x) CHECK(g.beta[x] == 0.125);
    CHECK(g.beta[7] == 0.125 - 1.0);

    auto g2 = gamma_functional(4, 2.0);
    auto f4 = sliwa_functional(4);
    for (unsigned x = 0; x < 16; ++x) CHECK(g2.beta[x] == f4.beta[x]);

    auto m2 = mabk_functional(2);
    CHECK(m2.name == "M2");
    for (unsigned x : {0u, 1u, 2u}) CHECK(m2.beta[x] == doctest::Approx(0.5));
    CHECK(m2.beta[3] == doctest::Approx(-0.5));

    auto m3 = mabk_functional(3);
    for (unsigned x : {1u, 2u, 4u}) CHECK(m3.beta[x] == doctest::Approx(0.5));
    for (unsigned x : {0u, 3u, 5u, 6u}) CHECK(std::abs(m3.beta[x]) < 1e-15);
    CHECK(m3.beta[7] == doctest::Approx(-0.5));

    CHECK_THROWS(gamma_functional(3, 0.0));
    CHECK_THROWS(gamma_functional(3, 2.5));
    CHECK_THROWS(mabk_functional(1));
    CHECK_THROWS(sliwa_functional(0));
}

TEST_CASE("evaluate agrees with the projection form") {
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 6; ++n) {
        CHECK(evaluate(sliwa_functional(n), constant_tensor(n, 1.0)) == doctest::Approx(1.0));
        for (int trial = 0; trial < 20; ++trial) {
            auto t = random_tensor(n, rng);
            auto pm = zeta_mu(t);
            CHECK(std::abs(evaluate(sliwa_functional(n), t) - (2 * pm.mu - pm.zeta)) < 1e-12);
            double gamma = 0.3 + 1.7 * trial / 19.0;
            CHECK(std::abs(evaluate(gamma_functional(n, gamma), t) - (gamma * pm.mu - pm.zeta)) <
                  1e-12);
        }
    }
}

TEST_CASE("evaluate is bilinear in the tensor argument") {
    std::mt19937_64 rng(11);
    auto f = sliwa_functional(3);
    for (int trial = 0; trial < 25; ++trial) {
        auto t1 = random_tensor(3, rng);
        auto t2 = random_tensor(3, rng);
        double lam = std::uniform_real_distribution<double>(0, 1)(rng);
        std::vector<double> mixed(t1.e.size());
        for (std::size_t x = 0; x < mixed.size(); ++x)
            mixed[x] = lam * t1.e[x] + (1 - lam) * t2.e[x];
        double direct = evaluate(f, make_tensor(3, mixed));
        CHECK(std::abs(direct - (lam * evaluate(f, t1) + (1 - lam) * evaluate(f, t2))) < 1e-12);
    }
}

TEST_CASE("tensor validation clamps tiny excursions and rejects large ones") {
    auto t = make_tensor(1, {1.0 + 5e-10, -1.0});
    CHECK(t.at(0) == 1.0);
    CHECK_THROWS(make_tensor(1, {1.0 + 1e-8, 0.0}));
    CHECK_THROWS(make_tensor(2, {0.0, 0.0}));
    CHECK_THROWS(make_tensor(1, {std::nan(""), 0.0}));
}

TEST_CASE("behavior validation") {
    CHECK_THROWS(make_behavior(1, {0.5, 0.6, 0.5, 0.6}));
    CHECK_THROWS(make_behavior(1, {-0.1, 0.5, 1.1, 0.5}));
    auto b = make_behavior(1, {0.25, 0.75, 0.75, 0.25});
    CHECK(b.at(0, 1) == 0.75);
}

TEST_CASE("correlators of the PR box reach the algebraic maximum") {
    auto b = pr_box();
    CHECK(check_no_signaling(b).ok);
    auto t = correlators_from_behavior(b);
    CHECK(t.at(0) == doctest::Approx(1.0));
    CHECK(t.at(1) == doctest::Approx(1.0));
    CHECK(t.at(2) == doctest::Approx(1.0));
    CHECK(t.at(3) == doctest::Approx(-1.0));
    CHECK(evaluate(sliwa_functional(2), t) == doctest::Approx(2.0));
}

TEST_CASE("signaling behaviors are flagged with a located violation") {
    // Party 2 announces party 1's setting; party 1 answers uniformly.
    std::vector<double> p(16, 0.0);
    for (unsigned x = 0; x < 4; ++x)
        for (unsigned a = 0; a < 4; ++a)
            if ((a & 1) == ((x >> 1) & 1)) p[(a << 2) | x] = 0.5;
    auto b = make_behavior(2, std::move(p));
    auto report = check_no_signaling(b);
    CHECK(!report.ok);
    CHECK(!report.violations.empty());
    CHECK(report.violations[0].find("marginal on parties") != std::string::npos);
}

TEST_CASE("deterministic product behaviors pass the no-signaling check") {
    // All parties answer +1 regardless of setting.
    for (int n = 1; n <= 3; ++n) {
        const std::size_t m = (std::size_t)1 << n;
        std::vector<double> p(m * m, 0.0);
        for (std::size_t x = 0; x < m; ++x) p[x] = 1.0;
        CHECK(check_no_signaling(make_behavior(n, std::move(p))).ok);
    }
}

TEST_CASE("projection commutes with convex mixing") {
    auto b1 = pr_box();
    std::vector<double> q(16, 0.0);
    for (unsigned x = 0; x < 4; ++x) q[x] = 1.0;  // all-plus deterministic point
    auto b2 = make_behavior(2, std::move(q));
    for (double lam : {0.0, 0.3, 0.8, 1.0}) {
        std::vector<double> p(16);
        for (std::size_t i = 0; i < 16; ++i) p[i] = lam * b1.p[i] + (1 - lam) * b2.p[i];
        auto mixed = zeta_mu(correlators_from_behavior(make_behavior(2, std::move(p))));
        auto z1 = zeta_mu(correlators_from_behavior(b1));
        auto z2 = zeta_mu(correlators_from_behavior(b2));
        CHECK(mixed.zeta == doctest::Approx(lam * z1.zeta + (1 - lam) * z2.zeta));
        CHECK(mixed.mu == doctest::Approx(lam * z1.mu + (1 - lam) * z2.mu));
    }
}

TEST_CASE("tensor and behavior JSON round trips") {
    std::mt19937_64 rng(23);
    auto t = random_tensor(3, rng);
    auto t2 = tensor_from_json(json::parse(tensor_to_json(t).dump()));
    CHECK(t2.n == t.n);
    for (std::size_t x = 0; x < t.e.size(); ++x) CHECK(t2.e[x] == t.e[x]);

    auto b = pr_box();
    auto b2 = behavior_from_json(json::parse(behavior_to_json(b).dump()));
    CHECK(b2.n == b.n);
    for (std::size_t i = 0; i < b.p.size(); ++i) CHECK(b2.p[i] == b.p[i]);

    json bad = tensor_to_json(t);
    bad["correlators"].erase(bad["correlators"].begin());
    CHECK_THROWS(tensor_from_json(bad));
}
