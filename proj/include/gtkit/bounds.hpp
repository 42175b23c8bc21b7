#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "gtkit/noise.hpp"

namespace gtkit::bounds {

enum class Algo {
    LowerNoiseless,
    LowerNoisy,
    Coco,
    Coma,
    Nocoma,
    Nolipo,
    NolipoAsym,
    NolipoAct,
    Lipo,
    NolipoPm,
    Nounlipo,
};

Algo algo_from_string(const std::string& s);
std::string algo_to_string(Algo a);

struct BoundQuery {
    std::size_t n = 0;
    std::size_t D = 1;
    double delta = 1.0;
    NoiseModel noise;
    Algo algo = Algo::Coma;
    bool as_stated = false;                 // coco: theorem statement instead of its proof
    std::optional<std::size_t> act_d;       // activation: explicit d (defaults to D)
};

struct BoundInternals {
    double Gamma = 0.0;
    double gamma = 0.0;
    double tau_star = 0.0;  // NaN when undefined (q = 0)
    double w = 0.0;         // NaN when the formula has no w
};

struct BoundResult {
    double T = 0.0;     // real-valued test count; callers ceil
    double beta = 0.0;  // T / (D * log2 n)
    BoundInternals internals;
};

// Gamma = ln D / ln n; gamma = (Gamma + delta) / (1 + delta).
std::pair<double, double> gamma_params(std::size_t n, std::size_t D, double delta);

// (1 - 2q) / (4q (1 + gamma^{-1/2})); throws std::domain_error at q = 0, which
// signals the caller to use exact column matching instead.
double tau_star(double q, double gamma);

// Binary entropy in bits, H(0) = H(1) = 0.
double binary_entropy(double q);

// Fano bound: T >= (1 - n^-delta)(1 - Gamma) D log2(n) / (1 - H(q)); q = 0 is
// the noiseless case.
BoundResult lower_bound(std::size_t n, std::size_t D, double delta, double q);

BoundResult upper_bound(const BoundQuery& query);

struct GapResult {
    double ratio;        // upper(nocoma).T / lower(noisy).T
    double closed_form;  // 12.83 (1 + sqrt(gamma))^2 (1 + delta) / (1 - 2q)^2
};
GapResult gap_factor(std::size_t n, std::size_t D, double delta, double q);

// Joint probabilities of the objective-perturbation events for one test,
// P(Delta'_{1,i} = +-1) and P(Delta'_{0,i} = +-1), together with the per-test
// expectations E[Delta] and E[#Delta] they imply.
struct PerturbationStats {
    double p1_plus = 0.0;
    double p1_minus = 0.0;
    double p0_plus = 0.0;
    double p0_minus = 0.0;
    double e_delta = 0.0;
    double e_count = 0.0;
};
PerturbationStats perturbation_expectations(double p, std::size_t d, const NoiseModel& noise);

}  // namespace gtkit::bounds
