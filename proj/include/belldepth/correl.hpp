#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "belldepth/common.hpp"

namespace bell {

using json = nlohmann::ordered_json;

// Full correlators E(x) of an n-party, 2-setting, +-1-outcome experiment,
// indexed by the integer whose binary digits are (x_1...x_n), party 1 = MSB.
struct CorrelationTensor {
    int n = 0;
    std::vector<double> e;

    double at(unsigned x) const { return e.at(x); }
    double& at(unsigned x) { return e.at(x); }
    std::size_t size() const { return e.size(); }
};

// Joint conditional probabilities P(a|x), index a * 2^n + x.
// Outcome bit 0 means +1, bit 1 means -1.
struct Behavior {
    int n = 0;
    std::vector<double> p;

    double at(unsigned a, unsigned x) const { return p.at(((std::size_t)a << n) | x); }
    double& at(unsigned a, unsigned x) { return p.at(((std::size_t)a << n) | x); }
};

struct BellFunctional {
    int n = 0;
    std::vector<double> beta;
    std::string name;
};

struct ProjectionPoint {
    double zeta = 0;
    double mu = 0;
};

struct NoSignalingReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Validates entries, clamping |E| <= 1 + 1e-9 excursions (warns on stderr)
// and rejecting anything larger.
CorrelationTensor make_tensor(int n, std::vector<double> values);
CorrelationTensor constant_tensor(int n, double value);

Behavior make_behavior(int n, std::vector<double> probabilities);

BellFunctional sliwa_functional(int n);
BellFunctional gamma_functional(int n, double gamma);
BellFunctional mabk_functional(int n);

double evaluate(const BellFunctional& f, const CorrelationTensor& t);
CorrelationTensor correlators_from_behavior(const Behavior& b);
NoSignalingReport check_no_signaling(const Behavior& b, double tol = 1e-9);
ProjectionPoint zeta_mu(const CorrelationTensor& t);

json tensor_to_json(const CorrelationTensor& t);
CorrelationTensor tensor_from_json(const json& j);
json behavior_to_json(const Behavior& b);
Behavior behavior_from_json(const json& j);

}  // namespace bell
