#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <vector>

#include "belldepth/bounds.hpp"
#include "belldepth/sdpexport.hpp"

using namespace bell;

namespace {

int pow3(int e) { return (int)std::lround(std::pow(3.0, e)); }

}  // namespace

TEST_CASE("moment structure dimensions") {
    for (int n = 1; n <= 3; ++n) {
        auto ms = build_moment_structure(n);
        CHECK(ms.dim == pow3(n));
        CHECK(ms.observable_count == pow3(n));
        int words = (int)std::lround(std::pow(5.0, n));
        CHECK(ms.free_count == (words - pow3(n)) / 2);
        CHECK((int)ms.labels.size() == ms.observable_count + ms.free_count);
        for (int l = 0; l < ms.observable_count; ++l) CHECK(ms.labels[l].observable);
        for (int l = ms.observable_count; l < (int)ms.labels.size(); ++l)
            CHECK(!ms.labels[l].observable);

        for (int r = 0; r < ms.dim; ++r) {
            CHECK(ms.label_of(r, r) == ms.label_of(0, 0));  // every diagonal is <I>
            for (int c = 0; c < ms.dim; ++c) CHECK(ms.label_of(r, c) == ms.label_of(c, r));
        }
    }
    CHECK_THROWS(build_moment_structure(5));
    CHECK_THROWS(build_moment_structure(2, 2));
}

TEST_CASE("moment labels carry the marginal-correlator coordinates") {
    auto ms = build_moment_structure(2);
    // Row A0 (trits 01), column A1 of party 2 is not expressible; take row I,A0
    // against column I,A1: product word (0, A0 A1) is free.
    int free_entries = 0;
    for (int r = 0; r < ms.dim; ++r)
        for (int c = 0; c < ms.dim; ++c)
            if (!ms.labels[ms.label_of(r, c)].observable) ++free_entries;
    CHECK(free_entries > 0);

    for (const auto& lab : ms.labels) {
        if (!lab.observable) continue;
        unsigned subset = 0, settings = 0;
        for (int p = 1; p <= 2; ++p) {
            int d = lab.word[p - 1];
            if (d != 0) subset |= 1u << (2 - p);
            if (d == 2) settings |= 1u << (2 - p);
        }
        CHECK(lab.subset == subset);
        CHECK(lab.settings == settings);
    }
}

TEST_CASE("partial transpose indexing is an involution matching a direct oracle") {
    auto trit_of = [](int index, int n, int party) {
        int shift = 1;
        for (int i = 0; i < n - party; ++i) shift *= 3;
        return index / shift % 3;
    };
    for (int n : {2, 3}) {
        auto ms = build_moment_structure(n);
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            auto perm = partial_transpose_indexing(ms, mask);
            REQUIRE((int)perm.size() == ms.dim * ms.dim);
            for (std::size_t i = 0; i < perm.size(); ++i)
                CHECK(perm[perm[i]] == i);
            for (int r = 0; r < ms.dim; ++r)
                for (int c = 0; c < ms.dim; ++c) {
                    int nr = 0, nc = 0;
                    for (int p = 1; p <= n; ++p) {
                        bool swap = (mask >> (n - p)) & 1u;
                        nr = nr * 3 + trit_of(swap ? c : r, n, p);
                        nc = nc * 3 + trit_of(swap ? r : c, n, p);
                    }
                    CHECK(perm[(std::size_t)r * ms.dim + c] ==
                          (std::size_t)nr * ms.dim + nc);
                }
        }
        // transposing every party is the plain matrix transpose
        auto full = partial_transpose_indexing(ms, (1u << n) - 1);
        for (int r = 0; r < ms.dim; ++r)
            for (int c = 0; c < ms.dim; ++c)
                CHECK(full[(std::size_t)r * ms.dim + c] ==
                      (std::size_t)c * ms.dim + r);
    }
    auto ms2 = build_moment_structure(2);
    CHECK_THROWS(partial_transpose_indexing(ms2, 0));
    CHECK_THROWS(partial_transpose_indexing(ms2, 4));

    // a symmetric value assignment stays symmetric under the permutation
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1, 1);
    std::vector<double> val(ms2.labels.size());
    for (auto& v : val) v = unif(rng);
    auto perm = partial_transpose_indexing(ms2, 2);
    for (int r = 0; r < ms2.dim; ++r)
        for (int c = 0; c < ms2.dim; ++c) {
            double a = val[ms2.entry_label[perm[(std::size_t)r * ms2.dim + c]]];
            double b = val[ms2.entry_label[perm[(std::size_t)c * ms2.dim + r]]];
            CHECK(a == b);
        }
}

TEST_CASE("party groupings") {
    auto g = groups_from_partition(4, make_partition({2, 1, 1}));
    CHECK(g == std::vector<unsigned>{0b1100, 0b0010, 0b0001});
    CHECK_THROWS(groups_from_partition(4, make_partition({2, 1})));

    auto s32 = set_partitions_max_block(3, 2);
    CHECK(s32.size() == 4);
    for (const auto& cls : s32) {
        unsigned seen = 0;
        for (unsigned m : cls) {
            CHECK((seen & m) == 0);
            seen |= m;
        }
        CHECK(seen == 7);
    }
    CHECK(set_partitions_max_block(3, 3).size() == 5);
    CHECK(set_partitions_max_block(3, 1).size() == 1);
    CHECK(set_partitions_max_block(4, 4).size() == 15);
    CHECK(set_partitions_max_block(4, 2).size() == 10);
}

TEST_CASE("producible relaxation export and round trip") {
    const std::string path = "sdp_prod_tmp.dat-s";
    auto f = sliwa_functional(2);
    auto prob = export_producible_sdp(f, make_partition({1, 1}), 1, path);

    const int n = 2, m = 1 << n;
    auto ms = build_moment_structure(n);
    CHECK(prob.nvars == m * m + ms.free_count);
    REQUIRE(prob.block_sizes.size() == 4);  // moment, two transposes, constraints
    CHECK(prob.block_sizes[0] == ms.dim);
    CHECK(prob.block_sizes[1] == ms.dim);
    CHECK(prob.block_sizes[2] == ms.dim);
    CHECK(prob.block_sizes[3] < 0);

    REQUIRE((int)prob.objective.size() == prob.nvars);
    for (int a = 0; a < m; ++a)
        for (int x = 0; x < m; ++x)
            CHECK(prob.objective[(a << n) | x] ==
                  -f.beta[x] * ((a == 0 || a == 3) ? 1.0 : -1.0));
    for (int v = m * m; v < prob.nvars; ++v) CHECK(prob.objective[v] == 0.0);

    auto parsed = parse_sdpa_file(path);
    CHECK(same_problem(prob, parsed));
    parsed.entries[0].value += 1.0;
    CHECK(!same_problem(prob, parsed));

    std::ifstream side(path + ".vars.json");
    REQUIRE(side.good());
    json catalog = json::parse(side);
    CHECK(catalog["problem"] == "producible-bound");
    CHECK((int)catalog["variables"].size() == prob.nvars);
    CHECK(catalog["blocks"].size() == prob.block_sizes.size());

    std::remove(path.c_str());
    std::remove((path + ".vars.json").c_str());
}

TEST_CASE("every moment slot is covered exactly once") {
    const std::string path = "sdp_cover_tmp.dat-s";
    for (int n = 2; n <= 3; ++n) {
        auto prob = export_producible_sdp(sliwa_functional(n), make_partition({n}), 1, path);
        auto ms = build_moment_structure(n);
        const int m = 1 << n;

        std::map<std::pair<int, int>, std::vector<SdpEntry>> slots;
        for (const auto& e : prob.entries)
            if (e.block == 1) slots[{e.i, e.j}].push_back(e);

        CHECK((int)slots.size() == ms.dim * (ms.dim + 1) / 2);
        for (int r = 0; r < ms.dim; ++r)
            for (int c = r; c < ms.dim; ++c) {
                const auto& terms = slots.at({r + 1, c + 1});
                if (ms.labels[ms.label_of(r, c)].observable) {
                    CHECK((int)terms.size() == m);
                    for (const auto& e : terms) {
                        CHECK(e.var >= 1);
                        CHECK(e.var <= m * m);
                        CHECK(std::abs(e.value) == 1.0);
                    }
                } else {
                    REQUIRE(terms.size() == 1);
                    CHECK(terms[0].var > m * m);
                    CHECK(terms[0].var <= prob.nvars);
                    CHECK(terms[0].value == 1.0);
                }
            }
    }
    std::remove(path.c_str());
    std::remove((path + ".vars.json").c_str());
}

TEST_CASE("membership relaxation export and round trip") {
    const std::string path = "sdp_member_tmp.dat-s";
    auto b = algebraic_max_witness(2);
    auto prob = export_membership_sdp(b, 2, 1, path);

    auto ms = build_moment_structure(2);
    const int vars_per_class = 16 + ms.free_count;
    CHECK(prob.nvars == 2 * vars_per_class);  // {12} and {1|2}
    for (double c : prob.objective) CHECK(c == 0.0);
    // class {12}: moment + 1 transpose; class {1|2}: moment + 2; then constraints
    REQUIRE(prob.block_sizes.size() == 6);
    CHECK(prob.block_sizes.back() < 0);

    auto parsed = parse_sdpa_file(path);
    CHECK(same_problem(prob, parsed));

    std::ifstream side(path + ".vars.json");
    REQUIRE(side.good());
    json catalog = json::parse(side);
    CHECK(catalog["problem"] == "membership-feasibility");
    CHECK(catalog["classes"].size() == 2);
    CHECK((int)catalog["variables"].size() == prob.nvars);

    CHECK_THROWS(export_membership_sdp(b, 3, 1, path));
    std::remove(path.c_str());
    std::remove((path + ".vars.json").c_str());
}

TEST_CASE("parser rejects malformed files") {
    const std::string path = "sdp_bad_tmp.dat-s";
    {
        std::ofstream out(path);
        out << "3\n1\n2 2\n0 0 0\n";
    }
    CHECK_THROWS(parse_sdpa_file(path));  // block count mismatch
    {
        std::ofstream out(path);
        out << "2\n1\n-4\n0 0\n1 1 1 1 bad\n";
    }
    CHECK_THROWS(parse_sdpa_file(path));
    CHECK_THROWS(parse_sdpa_file("no_such_file.dat-s"));
    std::remove(path.c_str());
}
