#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gtkit/model.hpp"

namespace gtkit {

enum class NoiseKind { Noiseless, Bsc, Asymmetric, Activation };

// Tagged measurement-noise channel.
//   bsc(q):            each outcome flipped with probability q, 0 <= q < 1/2
//   asymmetric(q0,q1): 0->1 with probability q0, 1->0 with probability q1
//   activation(u,q0):  each defective deactivates per test with probability u;
//                      raw-negative outcomes flip to 1 with probability q0
struct NoiseModel {
    NoiseKind kind = NoiseKind::Noiseless;
    double q = 0.0;
    double q0 = 0.0;
    double q1 = 0.0;
    double u = 0.0;

    static NoiseModel noiseless() { return {}; }
    static NoiseModel bsc(double q);
    static NoiseModel asymmetric(double q0, double q1);
    static NoiseModel activation(double u, double q0);

    // Throws std::invalid_argument on out-of-range parameters. For the
    // activation model the d-dependent condition 2 - u^d - 2 q0 > 0 is
    // checked at use, where d is known.
    void validate() const;

    bool noisy() const { return kind != NoiseKind::Noiseless; }
    std::string describe() const;  // e.g. "bsc(0.05)"
};

struct NoiseRealization {
    BitVec nu;                           // flip indicator, y XOR nu = y_hat for flip models
    std::optional<BitMatrix> activation_mask;  // per-(test,item) active bits, kept on request
};

struct NoisyOutcome {
    ResultVector y_hat;
    NoiseRealization realization;
};

// Flip channels only (noiseless, bsc, asymmetric); the activation model goes
// through apply_activation. Draws consume the RNG in test order i = 0..T-1,
// one draw per test.
NoisyOutcome apply_noise(const ResultVector& y, const NoiseModel& model, std::uint64_t seed);

// Activation channel applied to the per-item test process. Per test, the
// activation draws run over the defective items of that test in increasing
// index order, followed by one false-positive draw if the raw outcome is 0.
NoisyOutcome apply_activation(const TestMatrix& M, const ProblemInstance& inst, double u,
                              double q0, std::uint64_t seed, bool keep_mask = false);

}  // namespace gtkit
