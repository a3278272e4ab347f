#include "belldepth/correl.hpp"

#include <cmath>
#include <iostream>

namespace bell {

namespace {

constexpr double kValueTol = 1e-9;

double clamp_unit(double v, const char* what, unsigned idx) {
    if (std::abs(v) <= 1.0) return v;
    require(std::abs(v) <= 1.0 + kValueTol,
            std::string(what) + " entry out of [-1,1] beyond tolerance");
    std::cerr << "warning: clamping " << what << " entry " << idx << " (|v| - 1 = "
              << std::abs(v) - 1.0 << ") to unit range\n";
    return v < 0 ? -1.0 : 1.0;
}

}  // namespace

CorrelationTensor make_tensor(int n, std::vector<double> values) {
    require(n >= 1, "party count must be >= 1");
    require(values.size() == (std::size_t)1 << n, "tensor needs 2^n entries");
    for (std::size_t x = 0; x < values.size(); ++x) {
        require(std::isfinite(values[x]), "tensor entries must be finite");
        values[x] = clamp_unit(values[x], "correlator", (unsigned)x);
    }
    return CorrelationTensor{n, std::move(values)};
}

CorrelationTensor constant_tensor(int n, double value) {
    require(n >= 1, "party count must be >= 1");
    return make_tensor(n, std::vector<double>((std::size_t)1 << n, value));
}

Behavior make_behavior(int n, std::vector<double> probabilities) {
    require(n >= 1, "party count must be >= 1");
    const std::size_t m = (std::size_t)1 << n;
    require(probabilities.size() == m * m, "behavior needs 4^n entries");
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        double& p = probabilities[i];
        require(std::isfinite(p) && p >= -kValueTol, "probabilities must be >= 0");
        if (p < 0) p = 0;
    }
    for (std::size_t x = 0; x < m; ++x) {
        double sum = 0;
        for (std::size_t a = 0; a < m; ++a) sum += probabilities[(a << n) | x];
        require(std::abs(sum - 1.0) <= kValueTol, "behavior not normalized at setting " +
                                                      bits_to_string(n, (unsigned)x));
    }
    return Behavior{n, std::move(probabilities)};
}

BellFunctional sliwa_functional(int n) { return gamma_functional(n, 2.0); }

BellFunctional gamma_functional(int n, double gamma) {
    require(n >= 1, "party count must be >= 1");
    require(gamma > 0 && gamma <= 2, "gamma must lie in (0,2]");
    const std::size_t m = (std::size_t)1 << n;
    std::vector<double> beta(m, gamma / (double)m);
    beta[m - 1] -= 1.0;
    std::string name = gamma == 2.0 ? "I" + std::to_string(n)
                                    : "I" + std::to_string(n) + "(gamma=" + std::to_string(gamma) + ")";
    return BellFunctional{n, std::move(beta), std::move(name)};
}

BellFunctional mabk_functional(int n) {
    require(n >= 2, "MABK needs n >= 2");
    const std::size_t m = (std::size_t)1 << n;
    const double scale = std::exp2(0.5 * (1 - n));
    std::vector<double> beta(m);
    for (std::size_t x = 0; x < m; ++x) {
        int w = std::popcount(x);
        beta[x] = scale * std::cos(M_PI / 4.0 * (1 - n + 2 * w));
    }
    return BellFunctional{n, std::move(beta), "M" + std::to_string(n)};
}

double evaluate(const BellFunctional& f, const CorrelationTensor& t) {
    require(f.n == t.n, "functional/tensor party count mismatch");
    double s = 0;
    for (std::size_t x = 0; x < f.beta.size(); ++x) s += f.beta[x] * t.e[x];
    return s;
}

CorrelationTensor correlators_from_behavior(const Behavior& b) {
    const std::size_t m = (std::size_t)1 << b.n;
    std::vector<double> e(m, 0.0);
    for (std::size_t x = 0; x < m; ++x) {
        double v = 0;
        for (std::size_t a = 0; a < m; ++a) v += parity_sign(a) * b.p[(a << b.n) | x];
        e[x] = v;
    }
    return make_tensor(b.n, std::move(e));
}

NoSignalingReport check_no_signaling(const Behavior& b, double tol) {
    const int n = b.n;
    const unsigned full = ((unsigned)1 << n) - 1;
    NoSignalingReport report;
    // Marginal on party subset S at outside settings xc:
    //   P_S(as|xs; xc) = sum over outside outcomes of P(a|x).
    auto marginal = [&](unsigned S, unsigned as, unsigned xs, unsigned xc) {
        unsigned C = full & ~S;
        double sum = 0;
        unsigned ac = C;
        while (true) {
            sum += b.p[((std::size_t)(as | ac) << n) | (xs | xc)];
            if (ac == 0) break;
            ac = (ac - 1) & C;
        }
        return sum;
    };
    for (unsigned S = 1; S < full; ++S) {
        unsigned C = full & ~S;
        unsigned as = S;
        while (true) {
            unsigned xs = S;
            while (true) {
                double ref = marginal(S, as, xs, 0);
                unsigned xc = C;
                while (xc != 0) {
                    double v = marginal(S, as, xs, xc);
                    if (std::abs(v - ref) > tol) {
                        report.ok = false;
                        report.violations.push_back(
                            "marginal on parties " + bits_to_string(n, S) + " at outcomes " +
                            bits_to_string(n, as) + ", settings " + bits_to_string(n, xs) +
                            " changes with outside settings " + bits_to_string(n, xc));
                    }
                    xc = (xc - 1) & C;
                }
                if (xs == 0) break;
                xs = (xs - 1) & S;
            }
            if (as == 0) break;
            as = (as - 1) & S;
        }
    }
    return report;
}

ProjectionPoint zeta_mu(const CorrelationTensor& t) {
    const std::size_t m = t.e.size();
    double mu = 0;
    for (double v : t.e) mu += v;
    return ProjectionPoint{t.e[m - 1], mu / (double)m};
}

json tensor_to_json(const CorrelationTensor& t) {
    json vals = json::object();
    for (std::size_t x = 0; x < t.e.size(); ++x)
        vals[bits_to_string(t.n, (unsigned)x)] = t.e[x];
    return json{{"n", t.n}, {"correlators", std::move(vals)}};
}

CorrelationTensor tensor_from_json(const json& j) {
    int n = j.at("n").get<int>();
    require(n >= 1 && n <= 30, "party count out of range");
    const auto& vals = j.at("correlators");
    require(vals.size() == (std::size_t)1 << n, "correlator map needs 2^n keys");
    std::vector<double> e((std::size_t)1 << n);
    for (auto it = vals.begin(); it != vals.end(); ++it)
        e[bits_from_string(n, it.key())] = it.value().get<double>();
    return make_tensor(n, std::move(e));
}

json behavior_to_json(const Behavior& b) {
    const std::size_t m = (std::size_t)1 << b.n;
    json vals = json::object();
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t a = 0; a < m; ++a)
            vals[bits_to_string(b.n, (unsigned)a) + "|" + bits_to_string(b.n, (unsigned)x)] =
                b.p[(a << b.n) | x];
    return json{{"n", b.n}, {"probabilities", std::move(vals)}};
}

Behavior behavior_from_json(const json& j) {
    int n = j.at("n").get<int>();
    require(n >= 1 && n <= 15, "party count out of range");
    const std::size_t m = (std::size_t)1 << n;
    const auto& vals = j.at("probabilities");
    require(vals.size() == m * m, "probability map needs 4^n keys");
    std::vector<double> p(m * m);
    for (auto it = vals.begin(); it != vals.end(); ++it) {
        const std::string& key = it.key();
        auto bar = key.find('|');
        require(bar != std::string::npos, "behavior key needs '<outcomes>|<settings>' form");
        unsigned a = bits_from_string(n, key.substr(0, bar));
        unsigned x = bits_from_string(n, key.substr(bar + 1));
        p[((std::size_t)a << n) | x] = it.value().get<double>();
    }
    return make_behavior(n, std::move(p));
}

}  // namespace bell
