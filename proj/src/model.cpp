#include "gtkit/model.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gtkit/rng.hpp"

namespace gtkit {

void ProblemInstance::validate() const {
    for (auto j : defective_set)
        if (j >= n) throw std::invalid_argument("defective index out of range");
}

BitVec ProblemInstance::indicator() const {
    BitVec x(n);
    for (auto j : defective_set) x.set(j, true);
    return x;
}

void DesignParams::validate() const {
    if (D < 1) throw std::invalid_argument("D must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
}

TestMatrix gen_bernoulli_matrix(std::size_t T, std::size_t n, double p, std::uint64_t seed) {
    if (T < 1 || n < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("bernoulli p must lie in (0,1)");
    TestMatrix M;
    M.bits = BitMatrix(T, n);
    M.design = {DesignKind::Bernoulli, p, 0};
    Rng rng(seed);
    const std::uint64_t thr = Rng::threshold(p);
    for (std::size_t i = 0; i < T; ++i) {
        auto row = M.bits.row_words(i);
        for (std::size_t j = 0; j < n; ++j)
            if (rng.next_u64() < thr) row[j >> 6] |= std::uint64_t{1} << (j & 63);
    }
    return M;
}

TestMatrix gen_coco_matrix(std::size_t T, std::size_t n, std::size_t g, std::uint64_t seed) {
    if (T < 1 || n < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
    if (g < 1) throw std::invalid_argument("group sampling parameter g must be >= 1");
    TestMatrix M;
    M.bits = BitMatrix(T, n);
    M.design = {DesignKind::Coco, 0.0, g};
    Rng rng(seed);
    for (std::size_t i = 0; i < T; ++i)
        for (std::size_t k = 0; k < g; ++k)
            M.bits.set(i, rng.uniform_below(n), true);
    return M;
}

std::size_t coco_group_size(std::size_t n, std::size_t D) {
    if (D < 1 || D >= n) throw std::invalid_argument("coco_group_size requires 1 <= D < n");
    const double g = 1.0 / std::log(static_cast<double>(n) / static_cast<double>(n - D));
    const auto rounded = static_cast<long long>(std::llround(g));
    return rounded < 1 ? 1 : static_cast<std::size_t>(rounded);
}

ResultVector noiseless_outcomes(const TestMatrix& M, const ProblemInstance& inst) {
    if (M.cols() != inst.n) throw std::invalid_argument("matrix columns != instance size");
    inst.validate();
    const BitVec x = inst.indicator();
    const auto xw = x.words();
    ResultVector y(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i) {
        const auto row = M.bits.row_words(i);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < row.size(); ++w) acc |= row[w] & xw[w];
        if (acc) y.set(i, true);
    }
    return y;
}

void write_matrix(std::ostream& os, const TestMatrix& M) {
    char buf[64];
    if (M.design.kind == DesignKind::Bernoulli)
        std::snprintf(buf, sizeof buf, "bernoulli %.17g", M.design.p);
    else
        std::snprintf(buf, sizeof buf, "coco %zu", M.design.g);
    os << M.rows() << ' ' << M.cols() << ' ' << buf << '\n';
    for (std::size_t i = 0; i < M.rows(); ++i) {
        std::string line(M.cols(), '0');
        M.bits.for_each_set_in_row(i, [&](std::size_t j) { line[j] = '1'; });
        os << line << '\n';
    }
}

TestMatrix read_matrix(std::istream& is) {
    std::size_t T = 0, n = 0;
    std::string tag;
    if (!(is >> T >> n >> tag)) throw std::invalid_argument("bad matrix header");
    TestMatrix M;
    M.bits = BitMatrix(T, n);
    if (tag == "bernoulli") {
        M.design.kind = DesignKind::Bernoulli;
        if (!(is >> M.design.p)) throw std::invalid_argument("bad bernoulli parameter");
    } else if (tag == "coco") {
        M.design.kind = DesignKind::Coco;
        if (!(is >> M.design.g)) throw std::invalid_argument("bad coco parameter");
    } else {
        throw std::invalid_argument("unknown design tag: " + tag);
    }
    std::string line;
    std::getline(is, line);  // consume header remainder
    for (std::size_t i = 0; i < T; ++i) {
        if (!std::getline(is, line) || line.size() < n)
            throw std::invalid_argument("matrix body truncated");
        for (std::size_t j = 0; j < n; ++j) {
            if (line[j] == '1')
                M.bits.set(i, j, true);
            else if (line[j] != '0')
                throw std::invalid_argument("matrix body contains non-binary character");
        }
    }
    return M;
}

void write_bits(std::ostream& os, const BitVec& v) {
    std::string line(v.size(), '0');
    v.for_each_set([&](std::size_t i) { line[i] = '1'; });
    os << line << '\n';
}

BitVec parse_bits(const std::string& line) {
    BitVec v(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '1')
            v.set(i, true);
        else if (line[i] != '0')
            throw std::invalid_argument("bit string contains non-binary character");
    }
    return v;
}

}  // namespace gtkit
