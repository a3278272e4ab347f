#include <doctest.h>

#include <cmath>
#include <vector>

#include "belldepth/bounds.hpp"
#include "belldepth/localset.hpp"
#include "belldepth/quantum.hpp"

using namespace bell;

TEST_CASE("partition enumeration in descending lexicographic order") {
    auto p52 = partitions_up_to(5, 2);
    REQUIRE(p52.size() == 3);
    CHECK(p52[0].parts == std::vector<int>{2, 2, 1});
    CHECK(p52[1].parts == std::vector<int>{2, 1, 1, 1});
    CHECK(p52[2].parts == std::vector<int>{1, 1, 1, 1, 1});

    auto p44 = partitions_up_to(4, 4);
    REQUIRE(p44.size() == 5);
    CHECK(p44[0].parts == std::vector<int>{4});
    CHECK(p44[4].parts == std::vector<int>{1, 1, 1, 1});

    CHECK(partitions_up_to(10, 10).size() == 42);

    auto w63 = partitions_with_max(6, 3);
    REQUIRE(w63.size() == 3);
    for (const auto& p : w63) {
        CHECK(p.parts[0] == 3);
        CHECK(p.total() == 6);
    }

    auto p = make_partition({3, 2, 2, 1});
    CHECK(p.total() == 8);
    CHECK(p.block_count() == 4);
    CHECK(p.singleton_count() == 1);
    CHECK_THROWS(make_partition({2, 3}));
    CHECK_THROWS(make_partition({3, 0}));
    CHECK_THROWS(make_partition({}));
}

TEST_CASE("producible bounds are monotone and sandwiched") {
    for (int n = 2; n <= 8; ++n) {
        double prev = 0;
        for (int k = 1; k <= n; ++k) {
            auto q = producible_quantum_bound(n, k);
            CHECK(q.bound > prev);
            prev = q.bound;
            if (k >= 2) {
                auto ns = producible_ns_bound(k);
                CHECK(1.0 < q.bound);
                CHECK(q.bound < ns.bound);
                CHECK(ns.bound < 3.0);
            }
        }
        CHECK(producible_quantum_bound(n, 1).bound == 1.0);
        CHECK(producible_quantum_bound(n, n).bound ==
              doctest::Approx(quantum_max(n).value).epsilon(1e-12));
    }
    CHECK(producible_ns_bound(1).bound == doctest::Approx(1.0));
    CHECK(producible_ns_bound(2).bound == doctest::Approx(2.0));
    CHECK(producible_ns_bound(4).bound == doctest::Approx(2.75));
    CHECK_THROWS(producible_quantum_bound(3, 4));
}

TEST_CASE("explicit no-signaling behavior reaches the algebraic maximum") {
    for (int n = 2; n <= 4; ++n) {
        CHECK(algebraic_max(n) == 3.0 - std::exp2(2 - n));
        auto b = algebraic_max_witness(n);
        CHECK(check_no_signaling(b).ok);
        double v = evaluate(sliwa_functional(n), correlators_from_behavior(b));
        CHECK(v == doctest::Approx(algebraic_max(n)).epsilon(1e-12));
    }
}

TEST_CASE("visibility thresholds") {
    for (int n = 2; n <= 8; ++n) {
        CHECK(visibility_threshold(n, 1) ==
              doctest::Approx(1.0 / quantum_max(n).value).epsilon(1e-12));
        for (int k = 2; k < n; ++k)
            CHECK(visibility_threshold(n, k) ==
                  doctest::Approx(quantum_max(k).value / quantum_max(n).value).epsilon(1e-12));
    }
    CHECK_THROWS(visibility_threshold(3, 3));
    CHECK_THROWS(visibility_threshold(9, 1));
}

TEST_CASE("partition bounds for the quarter-wave family") {
    CHECK(mabk_partition_bound(make_partition({3})) == doctest::Approx(2.0));
    CHECK(mabk_partition_bound(make_partition({3, 1})) == doctest::Approx(2.0));
    CHECK(mabk_partition_bound(make_partition({3, 2})) == doctest::Approx(2.0));
    CHECK(mabk_partition_bound(make_partition({3, 3})) ==
          doctest::Approx(2 * std::sqrt(2.0)));
    CHECK(mabk_partition_bound(make_partition({4, 3})) == doctest::Approx(4.0));
    CHECK(mabk_partition_bound(make_partition({3, 3, 1})) ==
          doctest::Approx(2 * std::sqrt(2.0)));
    CHECK(mabk_partition_bound(make_partition({2, 2, 2})) == doctest::Approx(std::sqrt(2.0)));
    CHECK(mabk_partition_bound(make_partition({2, 2, 1})) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("quarter-wave producible bounds flag the failing witnesses") {
    for (int n = 3; n <= 8; ++n) {
        auto w = mabk_producible_bound(n, n - 1);
        CHECK(w.bound == doctest::Approx(std::exp2(0.5 * (n - 2))).epsilon(1e-12));
        CHECK(w.valid);
    }
    for (int n = 2; n <= 7; ++n) {
        auto w2 = mabk_producible_bound(n, 2);
        CHECK(w2.bound == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(w2.valid);
    }
    auto bad63 = mabk_producible_bound(6, 3);
    CHECK(!bad63.valid);
    CHECK(bad63.bound == doctest::Approx(2 * std::sqrt(2.0)));
    CHECK(bad63.note.find("3,3") != std::string::npos);
    auto bad74 = mabk_producible_bound(7, 4);
    CHECK(!bad74.valid);
    CHECK(bad74.bound == doctest::Approx(4.0));
    CHECK(mabk_producible_bound(6, 4).valid);
    CHECK(mabk_producible_bound(7, 5).valid);
    CHECK(mabk_producible_bound(5, 1).bound == 1.0);
}

TEST_CASE("steeper-slope family bounds") {
    auto k1 = gamma_producible_bound(4, 1, 0.8);
    CHECK(k1.bound == 1.0);
    CHECK(k1.note.find("enumeration") != std::string::npos);

    auto k2 = gamma_producible_bound(4, 2, 2.0, 10, 3);
    CHECK(k2.bound == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(k2.note.find("see-saw") != std::string::npos);
    CHECK(k2.note.find("seed 3") != std::string::npos);

    // gamma = 2 coincides with the corner family at every k.
    auto k3 = gamma_producible_bound(5, 3, 2.0, 10, 3);
    CHECK(k3.bound == doctest::Approx(producible_quantum_bound(5, 3).bound).epsilon(1e-5));

    auto again = gamma_producible_bound(4, 2, 1.4, 10, 3);
    auto same = gamma_producible_bound(4, 2, 1.4, 10, 3);
    CHECK(again.bound == same.bound);
    CHECK_THROWS(gamma_producible_bound(4, 2, 2.4));
}
