#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "belldepth/bounds.hpp"
#include "belldepth/certify.hpp"
#include "belldepth/localset.hpp"
#include "belldepth/quantum.hpp"
#include "belldepth/sdpexport.hpp"

namespace {

using bell::json;

struct GlobalOptions {
    std::string format = "text";
    std::uint64_t seed = 20260814;
    int threads = 0;
};

void emit(const GlobalOptions& g, const json& payload, const std::string& text) {
    if (g.format == "json")
        std::cout << payload.dump(2) << "\n";
    else
        std::cout << text;
}

bell::BellFunctional named_functional(const std::string& family, int n, double gamma) {
    if (family == "iota") return bell::sliwa_functional(n);
    if (family == "mabk") return bell::mabk_functional(n);
    if (family == "gamma") return bell::gamma_functional(n, gamma);
    throw std::invalid_argument("unknown functional family: " + family);
}

bell::StateVector named_state(const std::string& name, int n) {
    if (name == "ghz") return bell::ghz(n);
    if (name == "w") return bell::w_state(n);
    if (name == "cluster_linear") return bell::cluster_linear(n);
    if (name == "cluster_ring") return bell::cluster_ring(n);
    throw std::invalid_argument("unknown state: " + name);
}

json bound_to_json(const bell::WitnessBound& b) {
    return json{{"family", b.family}, {"n", b.n},         {"k", b.k},
                {"bound", b.bound},   {"valid", b.valid}, {"note", b.note}};
}

std::string bound_to_text(const bell::WitnessBound& b) {
    std::ostringstream os;
    os << b.family << "  n=" << b.n << "  k=" << b.k << "  bound=";
    os.precision(12);
    os << b.bound << (b.valid ? "" : "  INVALID") << "\n";
    if (!b.note.empty()) os << "  " << b.note << "\n";
    return os.str();
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return json::parse(in);
}

std::string golden_path(std::string data) {
    if (data.empty()) data = BELLDEPTH_DATA_DIR;
    if (std::filesystem::is_directory(data)) return data + "/golden_values.json";
    return data;
}

// --- tables ------------------------------------------------------------

struct TableRow {
    std::string label;
    double computed = 0;
    double reference = 0;
    double tol = 0;
    bool ok = false;
    std::string note;
};

TableRow check_row(std::string label, double computed, double reference, double tol) {
    TableRow r;
    r.label = std::move(label);
    r.computed = computed;
    r.reference = reference;
    r.tol = tol;
    r.ok = std::abs(computed - reference) <= tol;
    return r;
}

int render_table(const GlobalOptions& g, const std::string& table,
                 const std::vector<TableRow>& rows) {
    bool all_ok = true;
    json jrows = json::array();
    std::ostringstream os;
    os << "table " << table << "\n";
    for (const auto& r : rows) {
        all_ok = all_ok && r.ok;
        jrows.push_back(json{{"label", r.label},
                             {"computed", r.computed},
                             {"reference", r.reference},
                             {"tol", r.tol},
                             {"ok", r.ok},
                             {"note", r.note}});
        char line[256];
        std::snprintf(line, sizeof line, "  %-34s %14.10f  ref %14.10f  delta %9.2e  %s%s%s\n",
                      r.label.c_str(), r.computed, r.reference, r.computed - r.reference,
                      r.ok ? "ok" : "MISMATCH", r.note.empty() ? "" : "  ", r.note.c_str());
        os << line;
    }
    os << (all_ok ? "all entries reproduced\n"
                  : "some entries missed their stored tolerance\n");
    emit(g, json{{"table", table}, {"rows", jrows}, {"ok", all_ok}}, os.str());
    return all_ok ? 0 : 1;
}

std::vector<TableRow> table_one(const json& golden) {
    const json& t = golden.at("I");
    std::vector<TableRow> rows;
    const auto& ns = t.at("n");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        int n = ns[i].get<int>();
        rows.push_back(check_row("n=" + std::to_string(n) + " quantum_max",
                                 bell::quantum_max(n).value,
                                 t.at("quantum_max").at("values")[i].get<double>(),
                                 t.at("quantum_max").at("tol").get<double>()));
        rows.push_back(check_row("n=" + std::to_string(n) + " visibility",
                                 bell::visibility_threshold(n, 1),
                                 t.at("visibility").at("values")[i].get<double>(),
                                 t.at("visibility").at("tol").get<double>()));
        rows.push_back(check_row("n=" + std::to_string(n) + " ns_bound",
                                 bell::producible_ns_bound(n).bound,
                                 t.at("ns_bound").at("values")[i].get<double>(),
                                 t.at("ns_bound").at("tol").get<double>()));
    }
    return rows;
}

std::vector<TableRow> table_three(const json& golden) {
    const json& t = golden.at("III");
    std::vector<TableRow> rows;
    const auto& ns = t.at("n");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        int n = ns[i].get<int>();
        auto r = bell::quantum_max(n);
        rows.push_back(check_row("n=" + std::to_string(n) + " phi", r.phi,
                                 t.at("phi").at("values")[i].get<double>(),
                                 t.at("phi").at("tol").get<double>()));
        rows.push_back(check_row("n=" + std::to_string(n) + " value", r.value,
                                 t.at("value").at("values")[i].get<double>(),
                                 t.at("value").at("tol").get<double>()));
    }
    return rows;
}

std::vector<TableRow> table_four(const json& golden) {
    const json& t = golden.at("IV");
    double tol = t.at("tol").get<double>();
    std::vector<TableRow> rows;
    for (const auto& row : t.at("rows")) {
        auto parts = row.at("partition").get<std::vector<int>>();
        std::string label = "partition {";
        for (std::size_t i = 0; i < parts.size(); ++i)
            label += (i ? "," : "") + std::to_string(parts[i]);
        label += "}";
        rows.push_back(check_row(label, bell::mabk_partition_bound(bell::make_partition(parts)),
                                 row.at("bound").get<double>(), tol));
    }
    std::vector<std::pair<int, int>> invalid;
    for (const auto& nk : t.at("invalid_witness"))
        invalid.emplace_back(nk[0].get<int>(), nk[1].get<int>());
    for (int n = 3; n <= 7; ++n)
        for (int k = 2; k <= n; ++k) {
            auto b = bell::mabk_producible_bound(n, k);
            bool expect_valid =
                std::find(invalid.begin(), invalid.end(), std::make_pair(n, k)) == invalid.end();
            TableRow r = check_row("witness n=" + std::to_string(n) + " k=" + std::to_string(k),
                                   b.bound, std::exp2(0.5 * (k - 1)), 0);
            r.ok = b.valid == expect_valid;
            r.note = b.valid ? "holds" : "exceeded: not a witness";
            rows.push_back(r);
        }
    return rows;
}

std::vector<TableRow> table_five(const json& golden, std::uint64_t seed) {
    const json& t = golden.at("V");
    double tol = t.at("tol").get<double>();
    int restarts = t.at("restarts").get<int>();
    std::vector<TableRow> rows;
    for (const std::string family : {"sliwa", "mabk"}) {
        for (const std::string state : {"ghz", "w", "cluster_linear", "cluster_ring"}) {
            const auto& vals = t.at(family).at(state);
            const auto& ns = t.at("n");
            for (std::size_t i = 0; i < ns.size(); ++i) {
                int n = ns[i].get<int>();
                auto f = family == "sliwa" ? bell::sliwa_functional(n) : bell::mabk_functional(n);
                auto res = bell::seesaw_fixed_state(f, named_state(state, n), restarts, seed);
                TableRow r = check_row(family + " " + state + " n=" + std::to_string(n),
                                       res.value, vals[i].get<double>(), tol);
                for (const auto& m : t.at("expected_mismatch"))
                    if (m.at("family") == family && m.at("state") == state &&
                        m.at("n").get<int>() == n)
                        r.note = "known gap: optimizer best stays near " +
                                 std::to_string(m.at("found").get<double>());
                rows.push_back(r);
            }
        }
    }
    return rows;
}

int run_tables(const GlobalOptions& g, const std::string& table, const std::string& data) {
    json golden = load_json_file(golden_path(data));
    std::vector<TableRow> rows;
    if (table == "I")
        rows = table_one(golden);
    else if (table == "III")
        rows = table_three(golden);
    else if (table == "IV")
        rows = table_four(golden);
    else if (table == "V")
        rows = table_five(golden, g.seed);
    else
        throw std::invalid_argument("unknown table: " + table);
    return render_table(g, table, rows);
}

// --- scan ----------------------------------------------------------------

int run_scan(const std::string& curve, int n, int points, double gamma_min, double gamma_max,
             const std::string& out) {
    std::ofstream file;
    std::ostream& os = open_output(file, out);
    os.precision(12);
    if (curve == "ansatz") {
        os << "phi,value\n";
        for (int i = 0; i < points; ++i) {
            double phi = M_PI * i / (points - 1);
            os << phi << "," << bell::ansatz_value(n, phi) << "\n";
        }
    } else if (curve == "boundary") {
        os << "zeta,mu\n";
        for (int i = 0; i < points; ++i) {
            double zeta = -1.0 + 2.0 * i / (points - 1);
            os << zeta << "," << bell::u2_boundary(zeta) << "\n";
        }
    } else if (curve == "gamma") {
        std::vector<double> zeta(points), mu(points), phis(points);
        for (int i = 0; i < points; ++i) {
            phis[i] = M_PI * i / (points - 1);
            auto zm = bell::zeta_mu(bell::expectation(bell::ansatz_strategy(n, phis[i])));
            zeta[i] = zm.zeta;
            mu[i] = zm.mu;
        }
        os << "gamma,phi,value\n";
        for (int i = 0; i < points; ++i) {
            double gamma = gamma_min + (gamma_max - gamma_min) * i / (points - 1);
            double best = -3, best_phi = 0;
            for (int j = 0; j < points; ++j) {
                double v = gamma * mu[j] - zeta[j];
                if (v > best) {
                    best = v;
                    best_phi = phis[j];
                }
            }
            os << gamma << "," << best_phi << "," << best << "\n";
        }
    } else {
        throw std::invalid_argument("unknown curve: " + curve);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Producibility bounds and depth certification for a family of Bell inequalities"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for all randomized steps")->capture_default_str();
    app.add_option("--threads", g.threads, "OpenMP thread count (0 = library default)");

    std::string family = "iota", state, space = "corr", table, curve;
    std::string input, output, data, mode = "producible", partition_spec;
    int n = 0, k = 0, restarts = 50, level = 1, points = 512, shots = 10000;
    double gamma = 2.0, phi = -1, sigmas = 3.0, gamma_min = 0.1, gamma_max = 2.0;
    double solved_objective = 0;
    std::string witness = "iota";
    std::string emit_counts;

    auto* bound_cmd = app.add_subcommand("bound", "Producibility bound of a witness family");
    bound_cmd->add_option("--family", family, "iota | ns | mabk | gamma")->required();
    bound_cmd->add_option("--n", n, "Number of parties (defaults to k)");
    bound_cmd->add_option("--k", k, "Producibility level")->required();
    bound_cmd->add_option("--gamma", gamma, "Gamma parameter")->capture_default_str();
    bound_cmd->add_option("--restarts", restarts, "See-saw restarts (gamma family)")
        ->capture_default_str();

    auto* opt_cmd = app.add_subcommand("optimize", "See-saw maximization of a functional");
    opt_cmd->add_option("--family", family, "iota | mabk | gamma")->capture_default_str();
    opt_cmd->add_option("--n", n, "Number of parties")->required();
    opt_cmd->add_option("--gamma", gamma, "Gamma parameter")->capture_default_str();
    opt_cmd->add_option("--state", state, "Fix the state: ghz | w | cluster_linear | cluster_ring");
    opt_cmd->add_option("--restarts", restarts, "Independent restarts")->capture_default_str();

    auto* cert_cmd = app.add_subcommand("certify", "Depth certificate from measured counts");
    cert_cmd->add_option("--input", input, "Counts file (JSON)");
    cert_cmd->add_flag("--simulate", "Sample counts from the optimal interferometric strategy");
    cert_cmd->add_option("--n", n, "Number of parties (with --simulate)");
    cert_cmd->add_option("--phi", phi, "Override the sampled strategy angle");
    cert_cmd->add_option("--shots", shots, "Shots per setting (with --simulate)")
        ->capture_default_str();
    cert_cmd->add_option("--sigmas", sigmas, "Standard-error margin")->capture_default_str();
    cert_cmd->add_option("--witness", witness, "iota | ns")
        ->check(CLI::IsMember({"iota", "ns"}))
        ->capture_default_str();
    cert_cmd->add_option("--emit-counts", emit_counts, "Also write the counts used (JSON)");

    auto* facet_cmd = app.add_subcommand("facet", "Facet check against the local polytope");
    facet_cmd->add_option("--n", n, "Number of parties")->required();
    facet_cmd->add_option("--space", space, "corr | local")
        ->check(CLI::IsMember({"corr", "local"}))
        ->capture_default_str();
    facet_cmd->add_option("--family", family, "iota | mabk | gamma")->capture_default_str();
    facet_cmd->add_option("--gamma", gamma, "Gamma parameter")->capture_default_str();

    auto* tables_cmd = app.add_subcommand("tables", "Reproduce the reference tables");
    tables_cmd->add_option("--table", table, "I | III | IV | V")->required();
    tables_cmd->add_option("--data", data, "Reference data file or directory");

    auto* sdp_cmd = app.add_subcommand("export-sdp", "Write a moment relaxation in SDPA format");
    sdp_cmd->add_option("--mode", mode, "producible | membership")->capture_default_str();
    sdp_cmd->add_option("--n", n, "Number of parties");
    sdp_cmd->add_option("--k", k, "Largest block size");
    sdp_cmd->add_option("--partition", partition_spec, "Comma-separated block sizes, e.g. 3,2");
    sdp_cmd->add_option("--family", family, "iota | mabk | gamma")->capture_default_str();
    sdp_cmd->add_option("--gamma", gamma, "Gamma parameter")->capture_default_str();
    sdp_cmd->add_option("--level", level, "Relaxation level")->capture_default_str();
    sdp_cmd->add_option("--input", input, "Behavior file (membership mode)");
    sdp_cmd->add_flag("--from-ansatz", "Use the optimal interferometric behavior (membership)");
    sdp_cmd->add_option("--phi", phi, "Angle for --from-ansatz");
    sdp_cmd->add_option("--out", output, "Output path")->required();
    sdp_cmd->add_option("--solved-objective", solved_objective,
                        "Compare an externally solved objective against the ansatz value");

    auto* scan_cmd = app.add_subcommand("scan", "CSV sweep of a named curve");
    scan_cmd->add_option("--curve", curve, "ansatz | boundary | gamma")->required();
    scan_cmd->add_option("--n", n, "Number of parties");
    scan_cmd->add_option("--points", points, "Sample count")->capture_default_str();
    scan_cmd->add_option("--gamma-min", gamma_min, "Lower gamma")->capture_default_str();
    scan_cmd->add_option("--gamma-max", gamma_max, "Upper gamma")->capture_default_str();
    scan_cmd->add_option("--out", output, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (g.threads > 0) omp_set_num_threads(g.threads);

        if (bound_cmd->parsed()) {
            if (n == 0) n = k;
            bell::WitnessBound b;
            if (family == "iota")
                b = bell::producible_quantum_bound(n, k);
            else if (family == "ns")
                b = bell::producible_ns_bound(k);
            else if (family == "mabk")
                b = bell::mabk_producible_bound(n, k);
            else if (family == "gamma")
                b = bell::gamma_producible_bound(n, k, gamma, restarts, g.seed);
            else
                throw std::invalid_argument("unknown family: " + family);
            emit(g, bound_to_json(b), bound_to_text(b));
            return 0;
        }

        if (opt_cmd->parsed()) {
            auto f = named_functional(family, n, gamma);
            bell::SeesawResult res =
                state.empty() ? bell::seesaw(f, n, restarts, g.seed)
                              : bell::seesaw_fixed_state(f, named_state(state, n), restarts,
                                                         g.seed);
            json j{{"functional", f.name},   {"n", n},
                   {"state", state.empty() ? json(nullptr) : json(state)},
                   {"restarts", restarts},   {"seed", res.seed},
                   {"value", res.value},     {"sweeps", res.sweeps},
                   {"history", res.history}, {"strategy", bell::strategy_to_json(res.strategy)}};
            std::ostringstream os;
            os.precision(12);
            os << f.name << (state.empty() ? "" : " on " + state) << "  value=" << res.value
               << "  sweeps=" << res.sweeps << "  restarts=" << restarts << "\n";
            emit(g, j, os.str());
            return 0;
        }

        if (cert_cmd->parsed()) {
            std::vector<bell::CountRecord> counts;
            if (!input.empty()) {
                counts = bell::counts_from_json(load_json_file(input));
            } else if (cert_cmd->count("--simulate")) {
                if (n < 2) throw std::invalid_argument("--simulate needs --n >= 2");
                double angle = phi >= 0 ? phi : bell::quantum_max(n).phi;
                counts = bell::sample_counts(bell::ansatz_strategy(n, angle), shots, g.seed);
            } else {
                throw std::invalid_argument("certify needs --input or --simulate");
            }
            if (!emit_counts.empty()) {
                std::ofstream out(emit_counts);
                out << bell::counts_to_json(counts).dump(2) << "\n";
            }
            auto est = bell::estimate(counts);
            auto report = witness == "ns" ? bell::certify_nonlocality_depth(est, sigmas)
                                          : bell::certify_depth(est, sigmas);
            emit(g, bell::report_to_json(report), bell::report_to_text(report));
            return 0;
        }

        if (facet_cmd->parsed()) {
            auto f = named_functional(family, n, gamma);
            double b = bell::local_bound(f).value;
            bell::FacetReport r = space == "local"
                                      ? bell::facet_check_local_polytope(f, b)
                                      : bell::facet_check_full_correlation(f, b);
            json j{{"functional", f.name},
                   {"space", space},
                   {"local_bound", b},
                   {"saturating_count", r.saturating_count},
                   {"affine_rank", r.affine_rank},
                   {"required_rank", r.required_rank},
                   {"is_facet", r.is_facet}};
            std::ostringstream os;
            os << f.name << " in " << space << " space: " << r.saturating_count
               << " saturating vertices, affine rank " << r.affine_rank << "/" << r.required_rank
               << (r.is_facet ? "  facet\n" : "  not a facet\n");
            emit(g, j, os.str());
            return 0;
        }

        if (tables_cmd->parsed()) return run_tables(g, table, data);

        if (sdp_cmd->parsed()) {
            bell::SdpProblem problem;
            if (mode == "producible") {
                if (n == 0) throw std::invalid_argument("export-sdp needs --n");
                std::vector<int> parts;
                if (!partition_spec.empty()) {
                    std::stringstream ss(partition_spec);
                    for (std::string item; std::getline(ss, item, ',');)
                        parts.push_back(std::stoi(item));
                } else {
                    int block = k > 0 ? k : n;
                    for (int left = n; left > 0; left -= block)
                        parts.push_back(std::min(block, left));
                }
                auto f = named_functional(family, n, gamma);
                problem = bell::export_producible_sdp(f, bell::make_partition(parts), level,
                                                      output);
            } else if (mode == "membership") {
                bell::Behavior b;
                if (!input.empty()) {
                    b = bell::behavior_from_json(load_json_file(input));
                } else if (sdp_cmd->count("--from-ansatz")) {
                    if (n < 2) throw std::invalid_argument("--from-ansatz needs --n >= 2");
                    double angle = phi >= 0 ? phi : bell::quantum_max(n).phi;
                    b = bell::strategy_behavior(bell::ansatz_strategy(n, angle));
                } else {
                    throw std::invalid_argument("membership mode needs --input or --from-ansatz");
                }
                if (k == 0) throw std::invalid_argument("membership mode needs --k");
                problem = bell::export_membership_sdp(b, k, level, output);
            } else {
                throw std::invalid_argument("unknown mode: " + mode);
            }
            json j{{"path", output},
                   {"sidecar", output + ".vars.json"},
                   {"nvars", problem.nvars},
                   {"blocks", problem.block_sizes},
                   {"entries", problem.entries.size()}};
            std::ostringstream os;
            os << "wrote " << output << ": " << problem.nvars << " variables, "
               << problem.block_sizes.size() << " blocks, " << problem.entries.size()
               << " entries\n";
            if (sdp_cmd->count("--solved-objective")) {
                double implied = -solved_objective;
                double reference = bell::quantum_max(n).value;
                j["implied_max"] = implied;
                j["ansatz_value"] = reference;
                j["gap"] = implied - reference;
                os << "solver objective " << solved_objective << " implies max " << implied
                   << "; ansatz reaches " << reference << " (gap " << implied - reference
                   << ")\n";
            }
            emit(g, j, os.str());
            return 0;
        }

        if (scan_cmd->parsed()) {
            if (curve != "boundary" && n < 2) throw std::invalid_argument("scan needs --n >= 2");
            if (points < 2) throw std::invalid_argument("--points must be >= 2");
            return run_scan(curve, n, points, gamma_min, gamma_max, output);
        }
    } catch (const std::exception& e) {
        json err{{"error", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return 2;
}
