#include "belldepth/certify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace bell {

namespace {

const char* kMinusSign = "\xE2\x88\x92";  // U+2212

std::string outcome_string(int n, unsigned a) {
    std::string s;
    for (int i = 0; i < n; ++i)
        s += (a >> (n - 1 - i) & 1u) ? kMinusSign : "+";
    return s;
}

unsigned outcome_from_string(int n, const std::string& s) {
    unsigned a = 0;
    int parties = 0;
    for (std::size_t i = 0; i < s.size();) {
        int bit;
        if (s[i] == '+') {
            bit = 0;
            i += 1;
        } else if (s[i] == '-') {
            bit = 1;
            i += 1;
        } else if (s.compare(i, 3, kMinusSign) == 0) {
            bit = 1;
            i += 3;
        } else {
            throw std::invalid_argument("outcome strings use only '+' and '-'");
        }
        a = a << 1 | (unsigned)bit;
        ++parties;
    }
    require(parties == n, "outcome string length != n");
    return a;
}

CertificationReport certify_impl(const CorrelatorEstimate& est, double sigmas,
                                 const std::string& witness,
                                 const std::vector<WitnessBound>& bounds,
                                 const std::string& scale_name) {
    require(sigmas >= 0, "sigma multiplier must be >= 0");
    const int n = est.tensor.n;
    BellFunctional f = sliwa_functional(n);
    require(est.std_error.size() == f.beta.size(), "estimate needs one error per setting");

    CertificationReport r;
    r.witness = witness;
    r.n = n;
    r.sigmas = sigmas;
    r.observed = evaluate(f, est.tensor);
    double var = 0;
    for (std::size_t x = 0; x < f.beta.size(); ++x) {
        require(std::isfinite(est.std_error[x]) && est.std_error[x] >= 0,
                "standard errors must be finite and >= 0");
        var += f.beta[x] * f.beta[x] * est.std_error[x] * est.std_error[x];
    }
    r.std_error = std::sqrt(var);
    r.adjusted = r.observed - sigmas * r.std_error;
    r.bounds = bounds;

    int max_crossed = 0;
    for (const WitnessBound& b : bounds)
        if (r.adjusted > b.bound) {
            r.crossed.push_back(b.k);
            max_crossed = std::max(max_crossed, b.k);
        }
    r.depth = std::min(1 + max_crossed, n);
    if (r.adjusted > bounds.back().bound + 1e-6)
        r.warnings.push_back("adjusted value exceeds the n-partite " + scale_name + " bound");
    return r;
}

}  // namespace

CorrelatorEstimate estimate(const std::vector<CountRecord>& records) {
    require(!records.empty(), "need at least one count record");
    const int n = records[0].n;
    const std::size_t m = (std::size_t)1 << n;
    require(records.size() == m, "need exactly 2^n settings");
    std::vector<double> e(m), se(m);
    std::vector<bool> seen(m, false);
    for (const CountRecord& rec : records) {
        require(rec.n == n, "records disagree on party count");
        require(rec.setting < m, "setting out of range");
        require(!seen[rec.setting], "duplicate setting " + bits_to_string(n, rec.setting));
        seen[rec.setting] = true;
        require(rec.counts.size() == m, "record needs 2^n outcome counts");
        long long total = 0, signed_sum = 0;
        for (std::size_t a = 0; a < m; ++a) {
            require(rec.counts[a] >= 0, "counts must be >= 0");
            total += rec.counts[a];
            signed_sum += parity(a) ? -rec.counts[a] : rec.counts[a];
        }
        require(total >= 1, "setting " + bits_to_string(n, rec.setting) + " has zero counts");
        double E = (double)signed_sum / (double)total;
        e[rec.setting] = E;
        se[rec.setting] = std::sqrt(std::max(0.0, 1.0 - E * E) / (double)total);
    }
    return CorrelatorEstimate{make_tensor(n, std::move(e)), std::move(se)};
}

CertificationReport certify_depth(const CorrelatorEstimate& est, double sigmas) {
    const int n = est.tensor.n;
    std::vector<WitnessBound> bounds;
    for (int k = 1; k <= n; ++k) bounds.push_back(producible_quantum_bound(n, k));
    return certify_impl(est, sigmas, "iota", bounds, "quantum");
}

CertificationReport certify_nonlocality_depth(const CorrelatorEstimate& est, double sigmas) {
    const int n = est.tensor.n;
    std::vector<WitnessBound> bounds;
    for (int k = 1; k <= n; ++k) {
        WitnessBound b = producible_ns_bound(k);
        b.n = n;
        bounds.push_back(b);
    }
    return certify_impl(est, sigmas, "ns", bounds, "no-signaling");
}

double visibility_report(int n, double observed) {
    require(n >= 1, "party count must be >= 1");
    double qmax = quantum_max(n).value;
    require(observed >= 1.0 - 1e-12 && observed <= qmax + 1e-6,
            "observed value outside [1, quantum maximum]");
    return std::min(observed, qmax) / qmax;
}

std::vector<CountRecord> sample_counts(const QuantumStrategy& s, long long shots_per_setting,
                                       std::uint64_t seed) {
    require(shots_per_setting >= 1, "need at least one shot per setting");
    Behavior b = strategy_behavior(s);
    const int n = b.n;
    const std::size_t m = (std::size_t)1 << n;
    std::mt19937_64 rng(seed);
    std::vector<CountRecord> records;
    for (std::size_t x = 0; x < m; ++x) {
        std::vector<double> probs(m);
        for (std::size_t a = 0; a < m; ++a) probs[a] = b.p[(a << n) | x];
        std::discrete_distribution<int> dist(probs.begin(), probs.end());
        CountRecord rec{n, (unsigned)x, std::vector<long long>(m, 0)};
        for (long long shot = 0; shot < shots_per_setting; ++shot) ++rec.counts[dist(rng)];
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<CountRecord> counts_from_json(const json& j) {
    int n = j.at("n").get<int>();
    require(n >= 1 && n <= 15, "party count out of range");
    const std::size_t m = (std::size_t)1 << n;
    std::vector<CountRecord> records;
    for (const auto& rec : j.at("records")) {
        CountRecord r{n, bits_from_string(n, rec.at("setting").get<std::string>()),
                      std::vector<long long>(m, 0)};
        for (auto it = rec.at("counts").begin(); it != rec.at("counts").end(); ++it)
            r.counts[outcome_from_string(n, it.key())] = it.value().get<long long>();
        records.push_back(std::move(r));
    }
    return records;
}

json counts_to_json(const std::vector<CountRecord>& records) {
    require(!records.empty(), "need at least one count record");
    const int n = records[0].n;
    json recs = json::array();
    for (const CountRecord& rec : records) {
        json counts = json::object();
        for (std::size_t a = 0; a < rec.counts.size(); ++a)
            if (rec.counts[a] != 0) counts[outcome_string(n, (unsigned)a)] = rec.counts[a];
        recs.push_back(json{{"setting", bits_to_string(n, rec.setting)},
                            {"counts", std::move(counts)}});
    }
    return json{{"n", n}, {"records", std::move(recs)}};
}

json report_to_json(const CertificationReport& r) {
    json bounds = json::array();
    for (const WitnessBound& b : r.bounds)
        bounds.push_back(json{{"k", b.k}, {"bound", b.bound}, {"family", b.family}});
    return json{{"witness", r.witness},
                {"n", r.n},
                {"observed", r.observed},
                {"std_error", r.std_error},
                {"sigmas", r.sigmas},
                {"adjusted", r.adjusted},
                {"bounds", std::move(bounds)},
                {"crossed", r.crossed},
                {"certified_depth", r.depth},
                {"warnings", r.warnings},
                {"statistics", "gaussian propagation, independent settings"}};
}

std::string report_to_text(const CertificationReport& r) {
    std::ostringstream out;
    out.precision(10);
    out << (r.witness == "ns" ? "nonlocality depth" : "entanglement depth") << " report, n = "
        << r.n << "\n";
    out << "  observed  " << r.observed << "\n";
    out << "  adjusted  " << r.adjusted << "  (" << r.sigmas << " sigma margin, std error "
        << r.std_error << ")\n";
    for (const WitnessBound& b : r.bounds) {
        bool hit = std::find(r.crossed.begin(), r.crossed.end(), b.k) != r.crossed.end();
        out << "  k = " << b.k << "  bound " << b.bound << (hit ? "  exceeded" : "") << "\n";
    }
    if (r.depth > 1)
        out << "certified depth >= " << r.depth << "\n";
    else
        out << "no certificate: adjusted value does not exceed any bound\n";
    for (const std::string& w : r.warnings) out << "warning: " << w << "\n";
    return out.str();
}

}  // namespace bell
