#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gtkit/lp.hpp"
#include "gtkit/model.hpp"

namespace gtkit {

struct LpDecodeOutput {
    BitVec estimate;                 // documented rounding of `fractional`
    std::vector<double> eta;         // length T (zero at tests outside the formulation)
    std::vector<double> fractional;  // raw LP x values, length n
    bool integral = false;           // every x within tol_int of {0,1}
    double objective_value = 0.0;    // sum of eta over the formulation's index set
    bool failed = false;             // decode-failure signal
    std::size_t accepted_dbar = 0;   // weight accepted by the nounlipo sweep
};

// Slack-minimizing program: variables (x_1..x_n, eta_1..eta_T), objective
// sum_i eta_i; negative tests contribute  -eta_i + sum_{j in test} x_j  = 0
// with eta_i in [0, dbar], positive tests  eta_i + sum_{j in test} x_j >= 1
// with eta_i in [0, 1]; sum_j x_j = dbar and x_j in [0, 1].
lp::LinearProgram build_nolipo_lp(const TestMatrix& M, const ResultVector& y_hat,
                                  std::size_t dbar);

// Solves the slack-minimizing program at the exact defective count d.
LpDecodeOutput decode_nolipo(const TestMatrix& M, const ResultVector& y_hat, std::size_t d);

// Noiseless feasibility program (eta fixed to zero). failed is set when the
// constraint set is infeasible, which signals model mismatch.
LpDecodeOutput decode_lipo(const TestMatrix& M, const ResultVector& y, std::size_t d);

// One-sided variants: only the positive-test (respectively negative-test)
// constraints and slack variables are kept.
LpDecodeOutput decode_nolipo_plus(const TestMatrix& M, const ResultVector& y_hat, std::size_t d);
LpDecodeOutput decode_nolipo_minus(const TestMatrix& M, const ResultVector& y_hat, std::size_t d);

// Sweeps dbar = 0..D and accepts the first solution whose x rounds to a
// binary vector of weight dbar and whose eta has at most T*q*(1+tau) entries
// above tol_int. failed is set when no dbar is accepted.
LpDecodeOutput decode_nounlipo(const TestMatrix& M, const ResultVector& y_hat, std::size_t D,
                               double q, double tau);

// estimate_j = 1 iff fractional_j >= 0.5 (ties round up); integral iff every
// entry lies within tol_int of 0 or 1.
std::pair<BitVec, bool> round_solution(const std::vector<double>& fractional,
                                       double tol_int = lp::kIntTol);

// Slack of a candidate x against observed outcomes: eta_i = m_i.x when
// y_hat_i = 0 and max(0, 1 - m_i.x) when y_hat_i = 1. The pair (x, eta(x)) is
// feasible for build_nolipo_lp at dbar = weight(x), so the LP optimum never
// exceeds its objective.
std::vector<double> slack_at(const TestMatrix& M, const ResultVector& y_hat, const BitVec& x);

// A perturbation vector moves one unit of mass from inside support(x) to
// outside it; the full set has d(n-d) elements.
struct PerturbationVector {
    std::size_t minus_index;
    std::size_t plus_index;
};
std::vector<PerturbationVector> perturbation_set(const BitVec& x);

}  // namespace gtkit
