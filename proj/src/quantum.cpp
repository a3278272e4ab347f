#include "belldepth/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bell {

namespace {

struct Mat2 {
    cplx m00, m01, m10, m11;
};

Mat2 obs_matrix(const QubitObservable& o) {
    auto [bx, by, bz] = o.bloch;
    return Mat2{cplx(bz, 0), cplx(bx, -by), cplx(bx, by), cplx(-bz, 0)};
}

Mat2 pauli_matrix(int m) {
    if (m == 0) return Mat2{0, 1, 1, 0};
    if (m == 1) return Mat2{0, cplx(0, -1), cplx(0, 1), 0};
    return Mat2{1, 0, 0, -1};
}

Mat2 add(const Mat2& a, const Mat2& b) {
    return Mat2{a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
}

Mat2 scale(const Mat2& a, cplx s) { return Mat2{s * a.m00, s * a.m01, s * a.m10, s * a.m11}; }

// Party 1 owns the most significant amplitude bit.
void apply_single_qubit(std::vector<cplx>& v, int n, int party, const Mat2& m) {
    const std::size_t step = (std::size_t)1 << (n - party);
    for (std::size_t base = 0; base < v.size(); base += step << 1)
        for (std::size_t i = base; i < base + step; ++i) {
            cplx a = v[i], b = v[i + step];
            v[i] = m.m00 * a + m.m01 * b;
            v[i + step] = m.m10 * a + m.m11 * b;
        }
}

cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(const std::vector<cplx>& v) {
    double s = 0;
    for (const cplx& a : v) s += std::norm(a);
    return s;
}

void normalize(std::vector<cplx>& v) {
    double nn = std::sqrt(norm2(v));
    require(nn > 0, "cannot normalize zero vector");
    for (cplx& a : v) a /= nn;
}

// Structured forms of the coefficient table, used to keep the see-saw
// kernels at O(n 2^n) per operator application instead of O(n 4^n).
struct BellOperatorPlan {
    enum Kind { generic, uniform_minus_corner, quarter_wave } kind = generic;
    const BellFunctional* f = nullptr;
    double g = 0;       // uniform coefficient
    double amp = 0;     // quarter_wave prefactor
    cplx omega{1, 0};   // quarter_wave phase
    double shift = 0;   // sum |beta|, PSD shift for power iteration
};

BellOperatorPlan make_plan(const BellFunctional& f) {
    BellOperatorPlan plan;
    plan.f = &f;
    for (double b : f.beta) plan.shift += std::abs(b);
    const std::size_t m = f.beta.size();

    bool uniform = true;
    for (std::size_t x = 0; x + 1 < m && uniform; ++x)
        if (std::abs(f.beta[x] - f.beta[0]) > 1e-12) uniform = false;
    if (uniform && std::abs(f.beta[m - 1] - (f.beta[0] - 1.0)) < 1e-12) {
        plan.kind = BellOperatorPlan::uniform_minus_corner;
        plan.g = f.beta[0];
        return plan;
    }

    const double amp = std::exp2(0.5 * (1 - f.n));
    bool wave = true;
    for (std::size_t x = 0; x < m && wave; ++x) {
        double want = amp * std::cos(M_PI / 4.0 * (1 - f.n + 2 * std::popcount(x)));
        if (std::abs(f.beta[x] - want) > 1e-12) wave = false;
    }
    if (wave) {
        plan.kind = BellOperatorPlan::quarter_wave;
        plan.amp = amp;
        plan.omega = std::polar(1.0, M_PI * (1 - f.n) / 4.0);
    }
    return plan;
}

std::vector<cplx> apply_product(const std::vector<cplx>& psi, int n, int skip_party,
                                const std::vector<Mat2>& per_party) {
    std::vector<cplx> v = psi;
    for (int party = 1; party <= n; ++party)
        if (party != skip_party) apply_single_qubit(v, n, party, per_party[party - 1]);
    return v;
}

std::vector<cplx> apply_bell(const BellOperatorPlan& plan, const QuantumStrategy& s,
                             const std::vector<cplx>& psi) {
    const int n = s.state.n;
    const std::size_t m = (std::size_t)1 << n;
    if (plan.kind == BellOperatorPlan::uniform_minus_corner) {
        std::vector<cplx> sum = psi, corner = psi;
        for (int party = 1; party <= n; ++party) {
            Mat2 a0 = obs_matrix(s.observables[party - 1][0]);
            Mat2 a1 = obs_matrix(s.observables[party - 1][1]);
            apply_single_qubit(sum, n, party, add(a0, a1));
            apply_single_qubit(corner, n, party, a1);
        }
        for (std::size_t i = 0; i < m; ++i) sum[i] = plan.g * sum[i] - corner[i];
        return sum;
    }
    if (plan.kind == BellOperatorPlan::quarter_wave) {
        std::vector<cplx> plus = psi, minus = psi;
        for (int party = 1; party <= n; ++party) {
            Mat2 a0 = obs_matrix(s.observables[party - 1][0]);
            Mat2 a1 = obs_matrix(s.observables[party - 1][1]);
            apply_single_qubit(plus, n, party, add(a0, scale(a1, cplx(0, 1))));
            apply_single_qubit(minus, n, party, add(a0, scale(a1, cplx(0, -1))));
        }
        std::vector<cplx> out(m);
        const cplx w = 0.5 * plan.amp * plan.omega;
        for (std::size_t i = 0; i < m; ++i) out[i] = w * plus[i] + std::conj(w) * minus[i];
        return out;
    }
    std::vector<cplx> out(m, 0);
    for (std::size_t x = 0; x < m; ++x) {
        double beta = plan.f->beta[x];
        if (beta == 0) continue;
        std::vector<cplx> v = psi;
        for (int party = 1; party <= n; ++party) {
            int xi = (int)(x >> (n - party) & 1u);
            apply_single_qubit(v, n, party, obs_matrix(s.observables[party - 1][xi]));
        }
        for (std::size_t i = 0; i < m; ++i) out[i] += beta * v[i];
    }
    return out;
}

double bell_value(const BellOperatorPlan& plan, const QuantumStrategy& s) {
    return inner(s.state.amp, apply_bell(plan, s, s.state.amp)).real();
}

// Gradient of the objective in the Bloch vector of party's observable at
// each setting: grad[s][m] = d S / d b_m(A_party(s)).
std::array<std::array<double, 3>, 2> observable_gradient(const BellOperatorPlan& plan,
                                                         const QuantumStrategy& s, int party) {
    const int n = s.state.n;
    const std::vector<cplx>& psi = s.state.amp;
    std::array<std::vector<cplx>, 3> sigma_psi;
    for (int m = 0; m < 3; ++m) {
        sigma_psi[m] = psi;
        apply_single_qubit(sigma_psi[m], n, party, pauli_matrix(m));
    }
    std::array<std::array<double, 3>, 2> grad{};

    if (plan.kind == BellOperatorPlan::uniform_minus_corner) {
        std::vector<Mat2> sums(n), ones(n);
        for (int p = 1; p <= n; ++p) {
            sums[p - 1] = add(obs_matrix(s.observables[p - 1][0]),
                              obs_matrix(s.observables[p - 1][1]));
            ones[p - 1] = obs_matrix(s.observables[p - 1][1]);
        }
        std::vector<cplx> u = apply_product(psi, n, party, sums);
        std::vector<cplx> v = apply_product(psi, n, party, ones);
        for (int m = 0; m < 3; ++m) {
            double cu = inner(u, sigma_psi[m]).real();
            double cv = inner(v, sigma_psi[m]).real();
            grad[0][m] = plan.g * cu;
            grad[1][m] = plan.g * cu - cv;
        }
        return grad;
    }
    if (plan.kind == BellOperatorPlan::quarter_wave) {
        std::vector<Mat2> plus(n);
        for (int p = 1; p <= n; ++p)
            plus[p - 1] = add(obs_matrix(s.observables[p - 1][0]),
                              scale(obs_matrix(s.observables[p - 1][1]), cplx(0, 1)));
        std::vector<cplx> w = apply_product(psi, n, party, plus);
        for (int m = 0; m < 3; ++m) {
            cplx z = inner(sigma_psi[m], w);
            grad[0][m] = plan.amp * (plan.omega * z).real();
            grad[1][m] = plan.amp * (plan.omega * cplx(0, 1) * z).real();
        }
        return grad;
    }

    const std::size_t mask = (std::size_t)1 << (n - party);
    for (std::size_t x = 0; x < plan.f->beta.size(); ++x) {
        if (x & mask) continue;
        std::vector<cplx> w = psi;
        for (int p = 1; p <= n; ++p) {
            if (p == party) continue;
            int xp = (int)(x >> (n - p) & 1u);
            apply_single_qubit(w, n, p, obs_matrix(s.observables[p - 1][xp]));
        }
        for (int m = 0; m < 3; ++m) {
            double c = inner(w, sigma_psi[m]).real();
            grad[0][m] += plan.f->beta[x] * c;
            grad[1][m] += plan.f->beta[x | mask] * c;
        }
    }
    return grad;
}

// Power iteration on (B + shift), warm-started; Rayleigh quotient of a PSD
// operator is non-decreasing along the iteration, preserving see-saw
// monotonicity even when truncated by the iteration cap.
void state_step(const BellOperatorPlan& plan, QuantumStrategy& s) {
    std::vector<cplx>& v = s.state.amp;
    for (int it = 0; it < 3000; ++it) {
        std::vector<cplx> w = apply_bell(plan, s, v);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += plan.shift * v[i];
        normalize(w);
        cplx phase = inner(v, w);
        if (std::abs(phase) > 0) {
            cplx unit = phase / std::abs(phase);
            for (cplx& a : w) a *= std::conj(unit);
        }
        double diff = 0;
        for (std::size_t i = 0; i < w.size(); ++i) diff += std::norm(w[i] - v[i]);
        v.swap(w);
        if (std::sqrt(diff) < 1e-12) break;
    }
}

struct RestartOutcome {
    QuantumStrategy strategy;
    double value = -std::numeric_limits<double>::infinity();
    int sweeps = 0;
    std::vector<double> history;
    bool degenerate = false;
};

RestartOutcome run_restart(const BellFunctional& f, const BellOperatorPlan& plan,
                           const StateVector* fixed_state, std::uint64_t seed) {
    const int n = f.n;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    QuantumStrategy s;
    s.observables.resize(n);
    for (int p = 0; p < n; ++p)
        for (int x = 0; x < 2; ++x) {
            double bx, by, bz, nn;
            do {
                bx = gauss(rng);
                by = gauss(rng);
                bz = gauss(rng);
                nn = std::sqrt(bx * bx + by * by + bz * bz);
            } while (nn < 1e-6);
            s.observables[p][x] = QubitObservable{{bx / nn, by / nn, bz / nn}};
        }
    if (fixed_state) {
        s.state = *fixed_state;
    } else {
        s.state.n = n;
        s.state.amp.resize((std::size_t)1 << n);
        for (cplx& a : s.state.amp) a = cplx(gauss(rng), gauss(rng));
        normalize(s.state.amp);
    }

    RestartOutcome out;
    double prev = -std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < 500; ++sweep) {
        if (!fixed_state) state_step(plan, s);
        int degenerate_updates = 0;
        for (int party = 1; party <= n; ++party) {
            auto grad = observable_gradient(plan, s, party);
            for (int x = 0; x < 2; ++x) {
                double g = std::sqrt(grad[x][0] * grad[x][0] + grad[x][1] * grad[x][1] +
                                     grad[x][2] * grad[x][2]);
                if (g < 1e-12) {
                    ++degenerate_updates;
                    continue;
                }
                s.observables[party - 1][x] =
                    QubitObservable{{grad[x][0] / g, grad[x][1] / g, grad[x][2] / g}};
            }
        }
        double value = bell_value(plan, s);
        out.history.push_back(value);
        out.sweeps = sweep + 1;
        out.degenerate = degenerate_updates == 2 * n;
        if (std::abs(value - prev) < 1e-9) {
            prev = value;
            break;
        }
        prev = value;
    }
    out.strategy = std::move(s);
    out.value = prev;
    return out;
}

SeesawResult seesaw_impl(const BellFunctional& f, const StateVector* fixed_state, int restarts,
                         std::uint64_t seed) {
    require(f.n >= 1 && f.n <= 10, "see-saw supports 1 <= n <= 10");
    require(restarts >= 1, "need at least one restart");
    if (fixed_state) require(fixed_state->n == f.n, "state size must match functional");
    BellOperatorPlan plan = make_plan(f);

    std::vector<RestartOutcome> outcomes(restarts);
    std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int r = 0; r < restarts; ++r) {
        try {
            outcomes[r] = run_restart(f, plan, fixed_state,
                                      seed + 0x9E3779B97F4A7C15ULL * (std::uint64_t)(r + 1));
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    int best = 0;
    bool all_degenerate = true;
    for (int r = 0; r < restarts; ++r) {
        if (!outcomes[r].degenerate) all_degenerate = false;
        if (outcomes[r].value > outcomes[best].value) best = r;
    }
    if (all_degenerate)
        throw std::runtime_error("see-saw degenerate: every restart saw vanishing effective operators");

    SeesawResult res;
    res.strategy = std::move(outcomes[best].strategy);
    res.value = outcomes[best].value;
    res.seed = seed;
    res.sweeps = outcomes[best].sweeps;
    res.history = std::move(outcomes[best].history);
    return res;
}

}  // namespace

StateVector make_state(int n, std::vector<cplx> amplitudes) {
    require(n >= 1 && n <= 12, "state size supports 1 <= n <= 12");
    require(amplitudes.size() == (std::size_t)1 << n, "state needs 2^n amplitudes");
    double nn = std::sqrt(norm2(amplitudes));
    require(std::abs(nn - 1.0) <= 1e-9, "state must be normalized");
    for (cplx& a : amplitudes) a /= nn;
    return StateVector{n, std::move(amplitudes)};
}

QubitObservable make_observable(double bx, double by, double bz) {
    double nn = std::sqrt(bx * bx + by * by + bz * bz);
    require(std::abs(nn - 1.0) <= 1e-9, "Bloch vector must be unit length");
    return QubitObservable{{bx / nn, by / nn, bz / nn}};
}

QubitObservable xy_observable(double angle) {
    return QubitObservable{{std::cos(angle), std::sin(angle), 0.0}};
}

StateVector ghz(int n) {
    require(n >= 1 && n <= 12, "named states support 1 <= n <= 12");
    std::vector<cplx> amp((std::size_t)1 << n, 0);
    amp.front() = amp.back() = 1.0 / std::sqrt(2.0);
    return StateVector{n, std::move(amp)};
}

StateVector w_state(int n) {
    require(n >= 1 && n <= 12, "named states support 1 <= n <= 12");
    std::vector<cplx> amp((std::size_t)1 << n, 0);
    for (int p = 0; p < n; ++p) amp[(std::size_t)1 << p] = 1.0 / std::sqrt((double)n);
    return StateVector{n, std::move(amp)};
}

StateVector cluster_linear(int n) {
    require(n >= 1 && n <= 12, "named states support 1 <= n <= 12");
    const std::size_t m = (std::size_t)1 << n;
    std::vector<cplx> amp(m, std::pow(0.5, 0.5 * n));
    for (int p = 1; p < n; ++p) {
        std::size_t pair = ((std::size_t)1 << (n - p)) | ((std::size_t)1 << (n - p - 1));
        for (std::size_t i = 0; i < m; ++i)
            if ((i & pair) == pair) amp[i] = -amp[i];
    }
    return StateVector{n, std::move(amp)};
}

StateVector cluster_ring(int n) {
    StateVector s = cluster_linear(n);
    if (n > 2) {
        std::size_t pair = ((std::size_t)1 << (n - 1)) | 1u;
        for (std::size_t i = 0; i < s.amp.size(); ++i)
            if ((i & pair) == pair) s.amp[i] = -s.amp[i];
    }
    return s;
}

CorrelationTensor expectation(const QuantumStrategy& s) {
    const int n = s.state.n;
    require((int)s.observables.size() == n, "strategy needs one observable pair per party");
    const std::size_t m = (std::size_t)1 << n;
    std::vector<double> e(m);
    for (std::size_t x = 0; x < m; ++x) {
        std::vector<cplx> v = s.state.amp;
        for (int party = 1; party <= n; ++party) {
            int xi = (int)(x >> (n - party) & 1u);
            apply_single_qubit(v, n, party, obs_matrix(s.observables[party - 1][xi]));
        }
        cplx val = inner(s.state.amp, v);
        require(std::abs(val.imag()) <= 1e-10, "correlator has a non-real expectation");
        e[x] = val.real();
    }
    return make_tensor(n, std::move(e));
}

Behavior strategy_behavior(const QuantumStrategy& s) {
    const int n = s.state.n;
    require((int)s.observables.size() == n, "strategy needs one observable pair per party");
    const std::size_t m = (std::size_t)1 << n;
    std::vector<double> p(m * m);
    for (std::size_t x = 0; x < m; ++x) {
        std::vector<cplx> v = s.state.amp;
        for (int party = 1; party <= n; ++party) {
            int xi = (int)(x >> (n - party) & 1u);
            auto [bx, by, bz] = s.observables[party - 1][xi].bloch;
            double theta = std::acos(std::clamp(bz, -1.0, 1.0));
            double phi = std::atan2(by, bx);
            cplx c = std::cos(theta / 2), sp = std::polar(std::sin(theta / 2), phi);
            // Rows are the +1 and -1 eigenvectors of b.sigma.
            Mat2 basis{std::conj(c), std::conj(sp), -sp, c};
            apply_single_qubit(v, n, party, basis);
        }
        for (std::size_t a = 0; a < m; ++a) p[(a << n) | x] = std::norm(v[a]);
    }
    return make_behavior(n, std::move(p));
}

AnsatzParameters ansatz_parameters(int n, double phi) {
    require(n >= 1, "party count must be >= 1");
    require(phi >= 0 && phi <= M_PI, "phi out of range");
    return AnsatzParameters{n, phi, -(n - 1) * phi / (2.0 * n)};
}

QuantumStrategy ansatz_strategy(int n, double phi) {
    AnsatzParameters p = ansatz_parameters(n, phi);
    require(n <= 12, "ansatz state supports n <= 12");
    QuantumStrategy s;
    s.state = ghz(n);
    std::array<QubitObservable, 2> pair{xy_observable(p.alpha), xy_observable(p.phi + p.alpha)};
    s.observables.assign(n, pair);
    return s;
}

double ansatz_value(int n, double phi) {
    ansatz_parameters(n, phi);
    return 2.0 * std::pow(std::cos(phi / 2), n + 1) - std::cos((n + 1) * phi / 2);
}

QuantumMaxResult quantum_max(int n) {
    require(n >= 1, "party count must be >= 1");
    const int grid = 4096;
    double best_phi = 0, best = -3;
    for (int i = 0; i <= grid; ++i) {
        double phi = M_PI / 2 * i / grid;
        double v = ansatz_value(n, phi);
        if (v > best) {
            best = v;
            best_phi = phi;
        }
    }
    double lo = std::max(0.0, best_phi - M_PI / 2 / grid);
    double hi = std::min(M_PI / 2, best_phi + M_PI / 2 / grid);
    const double ratio = (std::sqrt(5.0) - 1) / 2;
    double a = hi - ratio * (hi - lo), b = lo + ratio * (hi - lo);
    double fa = ansatz_value(n, a), fb = ansatz_value(n, b);
    while (hi - lo > 1e-11) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = ansatz_value(n, b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = ansatz_value(n, a);
        }
    }
    double phi = 0.5 * (lo + hi);
    return QuantumMaxResult{phi, ansatz_value(n, phi)};
}

SeesawResult seesaw(const BellFunctional& f, int n, int restarts, std::uint64_t seed) {
    require(f.n == n, "functional size must match n");
    return seesaw_impl(f, nullptr, restarts, seed);
}

SeesawResult seesaw_fixed_state(const BellFunctional& f, const StateVector& state, int restarts,
                                std::uint64_t seed) {
    return seesaw_impl(f, &state, restarts, seed);
}

QuantumStrategy boundary_strategy(int n, BoundaryTarget target) {
    require(n >= 3 && n <= 5, "boundary construction covers n in {3,4,5}");
    double theta0, theta1;
    if (target == BoundaryTarget::minus_one) {
        theta1 = M_PI / n;
        theta0 = (3.0 * n + 1) * M_PI / (n * (n + 1.0));
    } else {
        theta1 = M_PI / (2.0 * n);
        theta0 = (1.0 - n) * M_PI / (2.0 * n * (n + 1.0));
    }
    QuantumStrategy s;
    s.state = ghz(n);
    std::array<QubitObservable, 2> pair{xy_observable(theta0), xy_observable(theta1)};
    s.observables.assign(n, pair);
    return s;
}

double u2_boundary(double zeta) {
    require(zeta >= -1 - 1e-12 && zeta <= 1 + 1e-12, "zeta out of [-1,1]");
    zeta = std::clamp(zeta, -1.0, 1.0);
    double c = std::cos(std::acos(zeta) / 3);
    return c * c * c;
}

SosCheck sos_identity_check(const Eigen::Matrix4cd& rho, const QubitObservable& a0,
                            const QubitObservable& a1, const QubitObservable& b0,
                            const QubitObservable& b1) {
    require(std::abs(rho.trace().real() - 1.0) < 1e-9 && std::abs(rho.trace().imag()) < 1e-9,
            "density operator must have unit trace");
    require((rho - rho.adjoint()).norm() < 1e-9, "density operator must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    require(es.eigenvalues().minCoeff() > -1e-9, "density operator must be PSD");

    auto embed = [](const QubitObservable& o, bool first) {
        Mat2 m = obs_matrix(o);
        Eigen::Matrix2cd q;
        q << m.m00, m.m01, m.m10, m.m11;
        Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                for (int k = 0; k < 2; ++k) {
                    if (first)
                        out(2 * r + k, 2 * c + k) = q(r, c);
                    else
                        out(2 * k + r, 2 * k + c) = q(r, c);
                }
        return out;
    };
    Eigen::Matrix4cd A0 = embed(a0, true), A1 = embed(a1, true);
    Eigen::Matrix4cd B0 = embed(b0, false), B1 = embed(b1, false);

    double e00 = (rho * A0 * B0).trace().real();
    double e01 = (rho * A0 * B1).trace().real();
    double e10 = (rho * A1 * B0).trace().real();
    double e11 = (rho * A1 * B1).trace().real();
    double zeta = std::clamp(e11, -1.0, 1.0);
    double mu = (e00 + e01 + e10 + e11) / 4;

    double c = 2 * std::cos(std::acos(zeta) / 3);
    double lp = c + 1, lm = c - 1;
    require(lm >= 1e-12, "decomposition degenerates at zeta = -1");

    Eigen::Matrix4cd P = lm * A0 - A1 + lm * B0 - B1;
    Eigen::Matrix4cd Q = lp * A0 + A1 - lp * B0 - B1;
    double rhs = (lp * (rho * P * P).trace().real() + lm * (rho * Q * Q).trace().real()) /
                 (16 * lp * lm);
    double lhs = u2_boundary(zeta) - mu;
    return SosCheck{lhs, rhs};
}

json strategy_to_json(const QuantumStrategy& s) {
    json state = json::array();
    for (const cplx& a : s.state.amp) state.push_back(json::array({a.real(), a.imag()}));
    json obs = json::array();
    for (const auto& pair : s.observables) {
        json per_setting = json::array();
        for (const QubitObservable& o : pair)
            per_setting.push_back(json::array({o.bloch[0], o.bloch[1], o.bloch[2]}));
        obs.push_back(std::move(per_setting));
    }
    return json{{"n", s.state.n}, {"state", std::move(state)}, {"observables", std::move(obs)}};
}

QuantumStrategy strategy_from_json(const json& j) {
    int n = j.at("n").get<int>();
    const auto& state = j.at("state");
    require(state.size() == (std::size_t)1 << n, "state needs 2^n amplitudes");
    std::vector<cplx> amp;
    amp.reserve(state.size());
    for (const auto& pair : state) amp.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    QuantumStrategy s;
    s.state = make_state(n, std::move(amp));
    const auto& obs = j.at("observables");
    require(obs.size() == (std::size_t)n, "observables need one pair per party");
    for (const auto& pair : obs) {
        require(pair.size() == 2, "each party needs two observables");
        std::array<QubitObservable, 2> po;
        for (int x = 0; x < 2; ++x)
            po[x] = make_observable(pair.at(x).at(0).get<double>(), pair.at(x).at(1).get<double>(),
                                    pair.at(x).at(2).get<double>());
        s.observables.push_back(po);
    }
    return s;
}

}  // namespace bell
