#include "gtkit/combinatorial.hpp"

#include <stdexcept>

namespace gtkit {

namespace {

void check_dims(const TestMatrix& M, const ResultVector& y) {
    if (y.size() != M.rows()) throw std::invalid_argument("result vector length != matrix rows");
}

// Fills |T_j| and |S_j| for every column in one pass over the set bits.
void match_counts(const TestMatrix& M, const ResultVector& y_hat, DecodeOutput& out) {
    const std::size_t n = M.cols();
    out.t_count.assign(n, 0);
    out.s_count.assign(n, 0);
    for (std::size_t i = 0; i < M.rows(); ++i) {
        const bool pos = y_hat.get(i);
        M.bits.for_each_set_in_row(i, [&](std::size_t j) {
            ++out.t_count[j];
            if (pos) ++out.s_count[j];
        });
    }
}

}  // namespace

DecodeOutput decode_coco(const TestMatrix& M, const ResultVector& y) {
    check_dims(M, y);
    const std::size_t n = M.cols();
    DecodeOutput out;
    BitVec cleared(n);
    for (std::size_t i = 0; i < M.rows(); ++i) {
        if (y.get(i)) continue;
        M.bits.for_each_set_in_row(i, [&](std::size_t j) { cleared.set(j, true); });
    }
    out.estimate = BitVec(n);
    for (std::size_t j = 0; j < n; ++j) out.estimate.set(j, !cleared.get(j));
    return out;
}

DecodeOutput decode_coma(const TestMatrix& M, const ResultVector& y) {
    check_dims(M, y);
    DecodeOutput out;
    match_counts(M, y, out);
    const std::size_t n = M.cols();
    out.estimate = BitVec(n);
    for (std::size_t j = 0; j < n; ++j)
        out.estimate.set(j, out.s_count[j] == out.t_count[j]);
    return out;
}

DecodeOutput decode_nocoma(const TestMatrix& M, const ResultVector& y_hat, double q, double tau) {
    check_dims(M, y_hat);
    if (q == 0.0) throw std::logic_error("nocoma with q = 0: use decode_coma (exact containment)");
    if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("nocoma requires 0 < q < 1/2");
    if (!(tau > 0.0)) throw std::invalid_argument("nocoma requires tau > 0");
    if (q * (1.0 + tau) >= 1.0)
        throw std::invalid_argument("nocoma threshold vacuous: q(1+tau) >= 1");
    DecodeOutput out;
    match_counts(M, y_hat, out);
    const std::size_t n = M.cols();
    const double keep = 1.0 - q * (1.0 + tau);
    out.estimate = BitVec(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double thresh = static_cast<double>(out.t_count[j]) * keep;
        out.estimate.set(j, static_cast<double>(out.s_count[j]) >= thresh - 1e-12);
    }
    return out;
}

}  // namespace gtkit
