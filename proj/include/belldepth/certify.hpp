#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "belldepth/bounds.hpp"
#include "belldepth/correl.hpp"
#include "belldepth/quantum.hpp"

namespace bell {

struct CountRecord {
    int n = 0;
    unsigned setting = 0;            // party 1 = MSB
    std::vector<long long> counts;   // indexed by outcome mask, bit 1 meaning -1
};

struct CorrelatorEstimate {
    CorrelationTensor tensor;
    std::vector<double> std_error;   // per setting
};

struct CertificationReport {
    std::string witness;             // "iota" | "ns"
    int n = 0;
    double observed = 0;
    double std_error = 0;            // propagated error of the linear form
    double sigmas = 0;
    double adjusted = 0;
    std::vector<WitnessBound> bounds;  // table actually used, k = 1..n
    std::vector<int> crossed;          // k whose bound is strictly exceeded
    int depth = 1;                     // certified depth >= depth; 1 = no certificate
    std::vector<std::string> warnings;
};

CorrelatorEstimate estimate(const std::vector<CountRecord>& records);

CertificationReport certify_depth(const CorrelatorEstimate& est, double sigmas = 3.0);
CertificationReport certify_nonlocality_depth(const CorrelatorEstimate& est, double sigmas = 3.0);

// Implied minimal visibility of a noisy GHZ state reaching the observed value.
double visibility_report(int n, double observed);

std::vector<CountRecord> sample_counts(const QuantumStrategy& s, long long shots_per_setting,
                                       std::uint64_t seed);

std::vector<CountRecord> counts_from_json(const json& j);
json counts_to_json(const std::vector<CountRecord>& records);
json report_to_json(const CertificationReport& r);
std::string report_to_text(const CertificationReport& r);

}  // namespace bell
