#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "belldepth/correl.hpp"

namespace bell {

using cplx = std::complex<double>;

struct StateVector {
    int n = 0;
    std::vector<cplx> amp;
};

// Unit Bloch vector b; the observable is b.sigma with eigenvalues +-1.
struct QubitObservable {
    std::array<double, 3> bloch{0, 0, 1};
};

struct QuantumStrategy {
    StateVector state;
    std::vector<std::array<QubitObservable, 2>> observables;  // per party (A0, A1)
};

struct AnsatzParameters {
    int n = 0;
    double phi = 0;
    double alpha = 0;
};

struct QuantumMaxResult {
    double phi = 0;
    double value = 0;
};

struct SeesawResult {
    QuantumStrategy strategy;
    double value = 0;
    std::uint64_t seed = 0;
    int sweeps = 0;                // of the winning restart
    std::vector<double> history;   // per-sweep values of the winning restart
};

struct SosCheck {
    double lhs = 0;
    double rhs = 0;
};

enum class BoundaryTarget { minus_one, zero };

StateVector make_state(int n, std::vector<cplx> amplitudes);
QubitObservable make_observable(double bx, double by, double bz);
// Observable in the XY plane at the given angle from the x axis.
QubitObservable xy_observable(double angle);

StateVector ghz(int n);
StateVector w_state(int n);
StateVector cluster_linear(int n);
StateVector cluster_ring(int n);

CorrelationTensor expectation(const QuantumStrategy& s);
Behavior strategy_behavior(const QuantumStrategy& s);

AnsatzParameters ansatz_parameters(int n, double phi);
QuantumStrategy ansatz_strategy(int n, double phi);
double ansatz_value(int n, double phi);
QuantumMaxResult quantum_max(int n);

SeesawResult seesaw(const BellFunctional& f, int n, int restarts = 50,
                    std::uint64_t seed = 20260814);
SeesawResult seesaw_fixed_state(const BellFunctional& f, const StateVector& state,
                                int restarts = 50, std::uint64_t seed = 20260814);

QuantumStrategy boundary_strategy(int n, BoundaryTarget target);
double u2_boundary(double zeta);

SosCheck sos_identity_check(const Eigen::Matrix4cd& rho, const QubitObservable& a0,
                            const QubitObservable& a1, const QubitObservable& b0,
                            const QubitObservable& b1);

json strategy_to_json(const QuantumStrategy& s);
QuantumStrategy strategy_from_json(const json& j);

}  // namespace bell
