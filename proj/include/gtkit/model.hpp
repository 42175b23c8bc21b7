#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>

#include "gtkit/bitvec.hpp"

namespace gtkit {

// Ground truth: a defective subset of n items.
struct ProblemInstance {
    std::size_t n = 0;
    std::set<std::size_t> defective_set;

    std::size_t d() const { return defective_set.size(); }

    // Throws std::invalid_argument if an index falls outside [0, n).
    void validate() const;

    // Indicator vector of the defective set (length n).
    BitVec indicator() const;
};

// Code-design inputs: D >= d, error exponent delta (target eps = n^-delta), RNG seed.
struct DesignParams {
    std::size_t D = 1;
    double delta = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class DesignKind { Bernoulli, Coco };

struct MatrixDesign {
    DesignKind kind = DesignKind::Bernoulli;
    double p = 0.0;      // Bernoulli entry probability
    std::size_t g = 0;   // Coco draws per test
};

// Pooling matrix plus the generation parameters that produced it.
struct TestMatrix {
    BitMatrix bits;
    MatrixDesign design;

    std::size_t rows() const { return bits.rows(); }
    std::size_t cols() const { return bits.cols(); }
};

// Length-T outcome vector (also reused for length-n estimates).
using ResultVector = BitVec;

// Each entry drawn i.i.d. Bernoulli(p); entries are consumed from the seeded
// stream in row-major order, so identical (T, n, p, seed) give bit-identical
// matrices.
TestMatrix gen_bernoulli_matrix(std::size_t T, std::size_t n, double p, std::uint64_t seed);

// Row i pools the items drawn in g uniform-with-replacement draws (so at most
// g ones per row). Draws are consumed row by row.
TestMatrix gen_coco_matrix(std::size_t T, std::size_t n, std::size_t g, std::uint64_t seed);

// round(1 / ln(n / (n - D))), clamped below at 1. Requires 1 <= D < n.
std::size_t coco_group_size(std::size_t n, std::size_t D);

// y_i = OR over defective j of m_{i,j}.
ResultVector noiseless_outcomes(const TestMatrix& M, const ProblemInstance& inst);

// Text format: header "T n design-tag params", then T lines of n chars in {0,1}.
void write_matrix(std::ostream& os, const TestMatrix& M);
TestMatrix read_matrix(std::istream& is);

void write_bits(std::ostream& os, const BitVec& v);
BitVec parse_bits(const std::string& line);

}  // namespace gtkit
