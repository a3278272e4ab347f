#include "belldepth/sdpexport.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bell {

namespace {

int ipow(int b, int e) {
    int r = 1;
    while (e--) r *= b;
    return r;
}

int trit(int index, int n, int party) { return index / ipow(3, n - party) % 3; }

// (row monomial)^dagger * (column monomial) for one party.
int product_symbol(int row_sym, int col_sym) {
    static const int table[3][3] = {{0, 1, 2}, {1, 0, 3}, {2, 4, 0}};
    return table[row_sym][col_sym];
}

int dagger_word(int word, int n) {
    static const int flip[5] = {0, 1, 2, 4, 3};
    int out = 0;
    for (int p = 0; p < n; ++p) {
        int digit = word / ipow(5, p) % 5;
        out += flip[digit] * ipow(5, p);
    }
    return out;
}

std::vector<int> word_digits(int word, int n) {
    std::vector<int> d(n);
    for (int p = 1; p <= n; ++p) d[p - 1] = word / ipow(5, n - p) % 5;
    return d;
}

const char* kSymbolNames[5] = {"I", "A0", "A1", "A0A1", "A1A0"};

struct Builder {
    SdpProblem prob;
    int diag_block = 0;
    int diag_slots = 0;

    void put(int var, int block, int i, int j, double v) {
        if (v == 0) return;
        prob.entries.push_back(SdpEntry{var, block, i, j, v});
    }
    int slot() { return ++diag_slots; }
    void equality(const std::vector<std::pair<int, double>>& terms, double rhs) {
        int s1 = slot(), s2 = slot();
        for (auto [v, c] : terms) {
            put(v, diag_block, s1, s1, c);
            put(v, diag_block, s2, s2, -c);
        }
        put(0, diag_block, s1, s1, rhs);
        put(0, diag_block, s2, s2, -rhs);
    }
};

// Linear expansion of one moment entry over the class's variables:
// observable labels expand into the 2^n outcome probabilities of the
// zero-completed setting, free labels are a single variable.
void add_label_terms(const MomentStructure& ms, int label_idx, int var_base, Builder& b,
                     int block, int i, int j) {
    const MomentLabel& lab = ms.labels[label_idx];
    const int n = ms.n;
    if (lab.observable) {
        const std::size_t m = (std::size_t)1 << n;
        for (std::size_t a = 0; a < m; ++a)
            b.put(var_base + 1 + (int)((a << n) | lab.settings), block, i, j,
                  parity_sign(a & lab.subset));
    } else {
        b.put(var_base + 1 + ((int)1 << (2 * n)) + (label_idx - ms.observable_count), block, i,
              j, 1.0);
    }
}

void add_moment_blocks(const MomentStructure& ms, int var_base, int first_block,
                       const std::vector<unsigned>& groups, Builder& b) {
    const int dim = ms.dim;
    for (int r = 0; r < dim; ++r)
        for (int c = r; c < dim; ++c)
            add_label_terms(ms, ms.label_of(r, c), var_base, b, first_block, r + 1, c + 1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        auto perm = partial_transpose_indexing(ms, groups[g]);
        for (int r = 0; r < dim; ++r)
            for (int c = r; c < dim; ++c) {
                std::size_t src = perm[(std::size_t)r * dim + c];
                int sr = (int)(src / dim), sc = (int)(src % dim);
                add_label_terms(ms, ms.label_of(sr, sc), var_base, b,
                                first_block + 1 + (int)g, r + 1, c + 1);
            }
    }
}

// Nonnegativity of each probability, per-setting normalization to `mass`
// (or to the class's shared mass when mass < 0), and no-signaling of the
// block of probability variables rooted at var_base.
void add_behavior_constraints(int n, int var_base, Builder& b, double mass,
                              bool tie_settings_to_first) {
    const std::size_t m = (std::size_t)1 << n;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t x = 0; x < m; ++x) {
            int s = b.slot();
            b.put(var_base + 1 + (int)((a << n) | x), b.diag_block, s, s, 1.0);
        }
    if (!tie_settings_to_first) {
        for (std::size_t x = 0; x < m; ++x) {
            std::vector<std::pair<int, double>> terms;
            for (std::size_t a = 0; a < m; ++a)
                terms.emplace_back(var_base + 1 + (int)((a << n) | x), 1.0);
            b.equality(terms, mass);
        }
    } else {
        for (std::size_t x = 1; x < m; ++x) {
            std::vector<std::pair<int, double>> terms;
            for (std::size_t a = 0; a < m; ++a) {
                terms.emplace_back(var_base + 1 + (int)((a << n) | x), 1.0);
                terms.emplace_back(var_base + 1 + (int)((a << n) | 0), -1.0);
            }
            b.equality(terms, 0.0);
        }
    }
    for (int party = 1; party <= n; ++party) {
        const std::size_t bit = (std::size_t)1 << (n - party);
        for (std::size_t arest = 0; arest < m; ++arest) {
            if (arest & bit) continue;
            for (std::size_t xrest = 0; xrest < m; ++xrest) {
                if (xrest & bit) continue;
                std::vector<std::pair<int, double>> terms;
                for (int ai = 0; ai < 2; ++ai) {
                    std::size_t a = arest | (ai ? bit : 0);
                    terms.emplace_back(var_base + 1 + (int)((a << n) | xrest), 1.0);
                    terms.emplace_back(var_base + 1 + (int)((a << n) | (xrest | bit)), -1.0);
                }
                b.equality(terms, 0.0);
            }
        }
    }
}

json variable_names(int n, const MomentStructure& ms, const std::string& prefix) {
    json vars = json::array();
    const std::size_t m = (std::size_t)1 << n;
    for (std::size_t idx = 0; idx < m * m; ++idx) {
        std::size_t a = idx >> n, x = idx & (m - 1);
        vars.push_back(prefix + "P(" + bits_to_string(n, (unsigned)a) + "|" +
                       bits_to_string(n, (unsigned)x) + ")");
    }
    for (int l = ms.observable_count; l < (int)ms.labels.size(); ++l) {
        std::string name = prefix + "u:";
        for (int p = 0; p < n; ++p)
            name += std::string(p ? "," : "") + kSymbolNames[ms.labels[l].word[p]];
        vars.push_back(name);
    }
    return vars;
}

void finish(Builder& b, json catalog, const std::string& path) {
    b.prob.block_sizes.push_back(-b.diag_slots);
    std::sort(b.prob.entries.begin(), b.prob.entries.end(),
              [](const SdpEntry& x, const SdpEntry& y) {
                  return std::tie(x.var, x.block, x.i, x.j) < std::tie(y.var, y.block, y.i, y.j);
              });
    for (std::size_t i = 1; i < b.prob.entries.size(); ++i) {
        const SdpEntry& p = b.prob.entries[i - 1];
        const SdpEntry& q = b.prob.entries[i];
        require(std::tie(p.var, p.block, p.i, p.j) != std::tie(q.var, q.block, q.i, q.j),
                "internal: duplicate sdp entry");
    }
    b.prob.catalog = std::move(catalog);

    std::ofstream out(path);
    require(out.good(), "cannot open " + path + " for writing");
    out << b.prob.nvars << "\n" << b.prob.block_sizes.size() << "\n";
    for (std::size_t i = 0; i < b.prob.block_sizes.size(); ++i)
        out << (i ? " " : "") << b.prob.block_sizes[i];
    out << "\n";
    out << std::setprecision(17);
    for (int v = 0; v < b.prob.nvars; ++v) out << (v ? " " : "") << b.prob.objective[v];
    out << "\n";
    for (const SdpEntry& e : b.prob.entries)
        out << e.var << " " << e.block << " " << e.i << " " << e.j << " " << e.value << "\n";
    require(out.good(), "write failed for " + path);
    out.close();

    std::ofstream side(path + ".vars.json");
    require(side.good(), "cannot open sidecar for " + path);
    side << b.prob.catalog.dump(2) << "\n";
    require(side.good(), "sidecar write failed for " + path);
}

}  // namespace

MomentStructure build_moment_structure(int n, int level) {
    require(n >= 1 && n <= 4, "moment structure supports 1 <= n <= 4");
    require(level == 1, "only relaxation level 1 is supported");
    MomentStructure ms;
    ms.n = n;
    ms.level = 1;
    ms.dim = ipow(3, n);
    const int words = ipow(5, n);
    std::vector<int> label_of_word(words, -1);

    std::vector<int> canon;
    std::vector<char> seen(words, 0);
    for (int r = 0; r < ms.dim; ++r)
        for (int c = 0; c < ms.dim; ++c) {
            int word = 0;
            for (int p = 1; p <= n; ++p)
                word = word * 5 + product_symbol(trit(r, n, p), trit(c, n, p));
            int cw = std::min(word, dagger_word(word, n));
            if (!seen[cw]) {
                seen[cw] = 1;
                canon.push_back(cw);
            }
        }
    auto is_observable = [&](int w) {
        for (int p = 0; p < n; ++p)
            if (w / ipow(5, p) % 5 >= 3) return false;
        return true;
    };
    std::sort(canon.begin(), canon.end(), [&](int a, int b) {
        bool oa = is_observable(a), ob = is_observable(b);
        if (oa != ob) return oa;
        return a < b;
    });
    for (int w : canon) {
        MomentLabel lab;
        lab.word = word_digits(w, n);
        lab.observable = is_observable(w);
        if (lab.observable) {
            ++ms.observable_count;
            for (int p = 1; p <= n; ++p) {
                int d = lab.word[p - 1];
                if (d == 0) continue;
                lab.subset |= 1u << (n - p);
                if (d == 2) lab.settings |= 1u << (n - p);
            }
        } else {
            ++ms.free_count;
        }
        label_of_word[w] = (int)ms.labels.size();
        ms.labels.push_back(std::move(lab));
    }
    ms.entry_label.resize((std::size_t)ms.dim * ms.dim);
    for (int r = 0; r < ms.dim; ++r)
        for (int c = 0; c < ms.dim; ++c) {
            int word = 0;
            for (int p = 1; p <= n; ++p)
                word = word * 5 + product_symbol(trit(r, n, p), trit(c, n, p));
            ms.entry_label[(std::size_t)r * ms.dim + c] =
                label_of_word[std::min(word, dagger_word(word, n))];
        }
    return ms;
}

std::vector<std::size_t> partial_transpose_indexing(const MomentStructure& s,
                                                    unsigned group_mask) {
    const unsigned full = ((unsigned)1 << s.n) - 1;
    require(group_mask != 0, "party group must be nonempty");
    require((group_mask & ~full) == 0, "party group out of range");
    std::vector<std::size_t> perm((std::size_t)s.dim * s.dim);
    for (int r = 0; r < s.dim; ++r)
        for (int c = 0; c < s.dim; ++c) {
            int nr = 0, nc = 0;
            for (int p = 1; p <= s.n; ++p) {
                bool swap = group_mask >> (s.n - p) & 1u;
                nr = nr * 3 + (swap ? trit(c, s.n, p) : trit(r, s.n, p));
                nc = nc * 3 + (swap ? trit(r, s.n, p) : trit(c, s.n, p));
            }
            perm[(std::size_t)r * s.dim + c] = (std::size_t)nr * s.dim + nc;
        }
    return perm;
}

std::vector<unsigned> groups_from_partition(int n, const Partition& p) {
    require(p.total() == n, "partition must cover all parties");
    std::vector<unsigned> groups;
    int next = 1;
    for (int part : p.parts) {
        unsigned mask = 0;
        for (int i = 0; i < part; ++i) mask |= 1u << (n - next++);
        groups.push_back(mask);
    }
    return groups;
}

std::vector<std::vector<unsigned>> set_partitions_max_block(int n, int k) {
    require(n >= 1 && k >= 1 && k <= n, "need 1 <= k <= n");
    std::vector<std::vector<unsigned>> out;
    std::vector<std::vector<int>> groups;
    auto rec = [&](auto&& self, int party) -> void {
        if (party > n) {
            std::vector<unsigned> masks;
            for (const auto& g : groups) {
                unsigned m = 0;
                for (int p : g) m |= 1u << (n - p);
                masks.push_back(m);
            }
            out.push_back(std::move(masks));
            return;
        }
        const std::size_t existing = groups.size();
        for (std::size_t gi = 0; gi < existing; ++gi)
            if ((int)groups[gi].size() < k) {
                groups[gi].push_back(party);
                self(self, party + 1);
                groups[gi].pop_back();
            }
        groups.emplace_back(1, party);
        self(self, party + 1);
        groups.pop_back();
    };
    rec(rec, 1);
    return out;
}

SdpProblem export_producible_sdp(const BellFunctional& f, const Partition& p, int level,
                                 const std::string& path) {
    MomentStructure ms = build_moment_structure(f.n, level);
    const int n = f.n;
    const std::size_t m = (std::size_t)1 << n;
    std::vector<unsigned> groups = groups_from_partition(n, p);

    Builder b;
    b.prob.nvars = (int)(m * m) + ms.free_count;
    b.prob.objective.assign(b.prob.nvars, 0.0);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t x = 0; x < m; ++x)
            b.prob.objective[(a << n) | x] = -f.beta[x] * parity_sign(a);
    for (std::size_t g = 0; g <= groups.size(); ++g) b.prob.block_sizes.push_back(ms.dim);
    b.diag_block = (int)groups.size() + 2;

    add_moment_blocks(ms, 0, 1, groups, b);
    add_behavior_constraints(n, 0, b, 1.0, false);

    json blocks = json::array();
    blocks.push_back(json{{"index", 1}, {"kind", "moment"}});
    for (std::size_t g = 0; g < groups.size(); ++g)
        blocks.push_back(json{{"index", (int)g + 2},
                              {"kind", "partial-transpose"},
                              {"group", bits_to_string(n, groups[g])}});
    blocks.push_back(json{{"index", b.diag_block}, {"kind", "linear-constraints"}});
    json catalog{
        {"problem", "producible-bound"},
        {"functional", f.name},
        {"n", n},
        {"level", level},
        {"partition", p.parts},
        {"objective_sense", "minimize; negate the optimum to recover the bound"},
        {"variables", variable_names(n, ms, "")},
        {"blocks", std::move(blocks)},
        {"notes",
         json::array(
             {"moment entries are real parts; the real relaxation keeps the bound valid",
              "marginal correlators use the all-zeros completion of unset settings",
              "normalization and no-signaling equalities are sound tightenings",
              "outcome bit 0 means +1, bit 1 means -1; party 1 is the leading bit"})}};
    finish(b, std::move(catalog), path);
    return b.prob;
}

SdpProblem export_membership_sdp(const Behavior& behavior, int k, int level,
                                 const std::string& path) {
    const int n = behavior.n;
    MomentStructure ms = build_moment_structure(n, level);
    require(k >= 1 && k <= n, "need 1 <= k <= n");
    const std::size_t m = (std::size_t)1 << n;
    auto classes = set_partitions_max_block(n, k);
    const int vars_per_class = (int)(m * m) + ms.free_count;

    Builder b;
    b.prob.nvars = (int)classes.size() * vars_per_class;
    b.prob.objective.assign(b.prob.nvars, 0.0);
    int nblocks = 0;
    for (const auto& cls : classes) nblocks += 1 + (int)cls.size();
    for (int i = 0; i < nblocks; ++i) b.prob.block_sizes.push_back(ms.dim);
    b.diag_block = nblocks + 1;

    int block_cursor = 1;
    json blocks = json::array();
    for (std::size_t j = 0; j < classes.size(); ++j) {
        add_moment_blocks(ms, (int)j * vars_per_class, block_cursor, classes[j], b);
        blocks.push_back(json{{"index", block_cursor}, {"kind", "moment"}, {"class", (int)j}});
        for (std::size_t g = 0; g < classes[j].size(); ++g)
            blocks.push_back(json{{"index", block_cursor + 1 + (int)g},
                                  {"kind", "partial-transpose"},
                                  {"class", (int)j},
                                  {"group", bits_to_string(n, classes[j][g])}});
        block_cursor += 1 + (int)classes[j].size();
        add_behavior_constraints(n, (int)j * vars_per_class, b, 0.0, true);
    }
    for (std::size_t idx = 0; idx < m * m; ++idx) {
        std::vector<std::pair<int, double>> terms;
        for (std::size_t j = 0; j < classes.size(); ++j)
            terms.emplace_back((int)(j * vars_per_class + idx) + 1, 1.0);
        b.equality(terms, behavior.p[idx]);
    }
    blocks.push_back(json{{"index", b.diag_block}, {"kind", "linear-constraints"}});

    json vars = json::array();
    json class_list = json::array();
    for (std::size_t j = 0; j < classes.size(); ++j) {
        json groups = json::array();
        for (unsigned g : classes[j]) groups.push_back(bits_to_string(n, g));
        class_list.push_back(std::move(groups));
        for (const auto& name : variable_names(n, ms, "c" + std::to_string(j) + ":"))
            vars.push_back(name);
    }
    json catalog{
        {"problem", "membership-feasibility"},
        {"n", n},
        {"level", level},
        {"max_block", k},
        {"classes", std::move(class_list)},
        {"objective_sense", "feasibility; infeasible means not producible at this block size"},
        {"variables", std::move(vars)},
        {"blocks", std::move(blocks)},
        {"notes",
         json::array(
             {"one moment block per grouping of the parties into blocks of size <= k",
              "class probability variables sum to the target behavior entry by entry",
              "per-class no-signaling also fixes each class's total mass across settings",
              "moment entries are real parts; the real relaxation keeps infeasibility sound"})}};
    finish(b, std::move(catalog), path);
    return b.prob;
}

SdpProblem parse_sdpa_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open " + path);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && (line[0] == '*' || line[0] == '"')) continue;
        rows.push_back(line);
    }
    require(rows.size() >= 4, "sdpa file too short");
    SdpProblem prob;
    std::istringstream(rows[0]) >> prob.nvars;
    std::size_t nblocks = 0;
    std::istringstream(rows[1]) >> nblocks;
    {
        std::istringstream sizes(rows[2]);
        int s;
        while (sizes >> s) prob.block_sizes.push_back(s);
        require(prob.block_sizes.size() == nblocks, "block size list mismatch");
    }
    {
        std::istringstream obj(rows[3]);
        double c;
        while (obj >> c) prob.objective.push_back(c);
        require((int)prob.objective.size() == prob.nvars, "objective length mismatch");
    }
    for (std::size_t r = 4; r < rows.size(); ++r) {
        if (rows[r].empty()) continue;
        std::istringstream e(rows[r]);
        SdpEntry entry;
        require(bool(e >> entry.var >> entry.block >> entry.i >> entry.j >> entry.value),
                "malformed entry line");
        prob.entries.push_back(entry);
    }
    return prob;
}

bool same_problem(const SdpProblem& a, const SdpProblem& b) {
    if (a.nvars != b.nvars || a.block_sizes != b.block_sizes) return false;
    if (a.objective != b.objective) return false;
    if (a.entries.size() != b.entries.size()) return false;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const SdpEntry& p = a.entries[i];
        const SdpEntry& q = b.entries[i];
        if (p.var != q.var || p.block != q.block || p.i != q.i || p.j != q.j ||
            p.value != q.value)
            return false;
    }
    return true;
}

}  // namespace bell
