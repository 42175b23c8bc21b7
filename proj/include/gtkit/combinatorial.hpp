#pragma once

#include <cstddef>
#include <vector>

#include "gtkit/model.hpp"

namespace gtkit {

// Estimate plus the per-item match counts used by the column-matching rules.
struct DecodeOutput {
    BitVec estimate;                  // length n
    std::vector<std::size_t> t_count; // |T_j| = tests containing item j
    std::vector<std::size_t> s_count; // |S_j| = tests containing j with y_hat = 1
};

// Clears every item seen in a negative test; all other items are declared
// defective. Intended for noiseless outcomes only.
DecodeOutput decode_coco(const TestMatrix& M, const ResultVector& y);

// Declares item j defective iff every test containing j is positive. Items in
// no test at all are declared defective (vacuous containment).
DecodeOutput decode_coma(const TestMatrix& M, const ResultVector& y);

// Relaxed column matching: item j is defective iff
// |S_j| >= |T_j| * (1 - q(1+tau)). Ties go to defective; the real-valued
// threshold is compared with a 1e-12 absolute tolerance.
DecodeOutput decode_nocoma(const TestMatrix& M, const ResultVector& y_hat, double q, double tau);

}  // namespace gtkit
