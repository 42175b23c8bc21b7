#include "gtkit/noise.hpp"

#include <cstdio>
#include <stdexcept>

#include "gtkit/rng.hpp"

namespace gtkit {

NoiseModel NoiseModel::bsc(double q) {
    NoiseModel m;
    m.kind = NoiseKind::Bsc;
    m.q = q;
    m.validate();
    return m;
}

NoiseModel NoiseModel::asymmetric(double q0, double q1) {
    NoiseModel m;
    m.kind = NoiseKind::Asymmetric;
    m.q0 = q0;
    m.q1 = q1;
    m.validate();
    return m;
}

NoiseModel NoiseModel::activation(double u, double q0) {
    NoiseModel m;
    m.kind = NoiseKind::Activation;
    m.u = u;
    m.q0 = q0;
    m.validate();
    return m;
}

void NoiseModel::validate() const {
    switch (kind) {
        case NoiseKind::Noiseless:
            break;
        case NoiseKind::Bsc:
            if (!(q >= 0.0 && q < 0.5))
                throw std::invalid_argument("bsc noise requires 0 <= q < 1/2");
            break;
        case NoiseKind::Asymmetric:
            if (!(q0 >= 0.0 && q0 < 1.0) || !(q1 >= 0.0 && q1 < 1.0) || !(q0 + q1 < 1.0))
                throw std::invalid_argument("asymmetric noise requires q0, q1 in [0,1) and q0+q1 < 1");
            break;
        case NoiseKind::Activation:
            if (!(u >= 0.0 && u < 1.0) || !(q0 >= 0.0 && q0 < 1.0))
                throw std::invalid_argument("activation noise requires u in [0,1) and q0 in [0,1)");
            break;
    }
}

std::string NoiseModel::describe() const {
    char buf[96];
    switch (kind) {
        case NoiseKind::Noiseless:
            return "noiseless";
        case NoiseKind::Bsc:
            std::snprintf(buf, sizeof buf, "bsc(%g)", q);
            return buf;
        case NoiseKind::Asymmetric:
            std::snprintf(buf, sizeof buf, "asym(%g;%g)", q0, q1);
            return buf;
        case NoiseKind::Activation:
            std::snprintf(buf, sizeof buf, "activation(%g;%g)", u, q0);
            return buf;
    }
    return "?";
}

NoisyOutcome apply_noise(const ResultVector& y, const NoiseModel& model, std::uint64_t seed) {
    model.validate();
    if (model.kind == NoiseKind::Activation)
        throw std::logic_error("activation noise acts on the test process; use apply_activation");
    const std::size_t T = y.size();
    NoisyOutcome out;
    out.y_hat = y;
    out.realization.nu = BitVec(T);
    if (model.kind == NoiseKind::Noiseless) return out;
    const double q0 = model.kind == NoiseKind::Bsc ? model.q : model.q0;
    const double q1 = model.kind == NoiseKind::Bsc ? model.q : model.q1;
    const std::uint64_t t0 = Rng::threshold(q0);
    const std::uint64_t t1 = Rng::threshold(q1);
    Rng rng(seed);
    for (std::size_t i = 0; i < T; ++i) {
        const std::uint64_t u = rng.next_u64();
        const bool flip = u < (y.get(i) ? t1 : t0);
        if (flip) {
            out.realization.nu.set(i, true);
            out.y_hat.set(i, !y.get(i));
        }
    }
    return out;
}

NoisyOutcome apply_activation(const TestMatrix& M, const ProblemInstance& inst, double u,
                              double q0, std::uint64_t seed, bool keep_mask) {
    const NoiseModel model = NoiseModel::activation(u, q0);
    (void)model;
    if (M.cols() != inst.n) throw std::invalid_argument("matrix columns != instance size");
    inst.validate();
    const std::size_t T = M.rows();
    NoisyOutcome out;
    out.y_hat = ResultVector(T);
    out.realization.nu = BitVec(T);
    if (keep_mask) out.realization.activation_mask = BitMatrix(T, inst.n);
    const std::uint64_t tu = Rng::threshold(u);
    const std::uint64_t tq0 = Rng::threshold(q0);
    Rng rng(seed);
    const ResultVector y = noiseless_outcomes(M, inst);
    for (std::size_t i = 0; i < T; ++i) {
        bool raw = false;
        for (auto j : inst.defective_set) {
            if (!M.bits.get(i, j)) continue;
            const bool active = !(rng.next_u64() < tu);
            if (active) {
                raw = true;
                if (out.realization.activation_mask) out.realization.activation_mask->set(i, j, true);
            }
        }
        bool obs = raw;
        if (!raw && rng.next_u64() < tq0) obs = true;
        out.y_hat.set(i, obs);
        if (obs != y.get(i)) out.realization.nu.set(i, true);
    }
    return out;
}

}  // namespace gtkit
