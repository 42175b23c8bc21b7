#include "gtkit/lp_decoders.hpp"

#include <cmath>
#include <stdexcept>

namespace gtkit {

namespace {

void check_dims(const TestMatrix& M, const ResultVector& y) {
    if (y.size() != M.rows()) throw std::invalid_argument("result vector length != matrix rows");
}

std::vector<std::pair<std::uint32_t, double>> row_terms(const TestMatrix& M, std::size_t i) {
    std::vector<std::pair<std::uint32_t, double>> terms;
    M.bits.for_each_set_in_row(i, [&](std::size_t j) {
        terms.emplace_back(static_cast<std::uint32_t>(j), 1.0);
    });
    return terms;
}

lp::Constraint sum_row(std::size_t n, double rhs) {
    lp::Constraint c;
    c.rel = lp::Relation::Eq;
    c.rhs = rhs;
    c.terms.reserve(n);
    for (std::uint32_t j = 0; j < n; ++j) c.terms.emplace_back(j, 1.0);
    return c;
}

LpDecodeOutput from_solution(const TestMatrix& M, const lp::LpSolution& sol, std::size_t n_eta,
                             std::size_t eta_base, const std::vector<std::size_t>* eta_rows) {
    const std::size_t n = M.cols();
    const std::size_t T = M.rows();
    LpDecodeOutput out;
    out.fractional.assign(sol.values.begin(), sol.values.begin() + static_cast<long>(n));
    out.eta.assign(T, 0.0);
    out.objective_value = 0.0;
    for (std::size_t t = 0; t < n_eta; ++t) {
        const double v = sol.values[eta_base + t];
        const std::size_t row = eta_rows ? (*eta_rows)[t] : t;
        out.eta[row] = v;
        out.objective_value += v;
    }
    auto [estimate, integral] = round_solution(out.fractional);
    out.estimate = std::move(estimate);
    out.integral = integral;
    return out;
}

}  // namespace

lp::LinearProgram build_nolipo_lp(const TestMatrix& M, const ResultVector& y_hat,
                                  std::size_t dbar) {
    check_dims(M, y_hat);
    const std::size_t n = M.cols();
    const std::size_t T = M.rows();
    if (dbar > n) throw std::invalid_argument("dbar exceeds number of items");
    lp::LinearProgram prog(n + T);
    for (std::uint32_t j = 0; j < n; ++j) prog.set_bounds(j, 0.0, 1.0);
    for (std::size_t i = 0; i < T; ++i) {
        const auto eta = static_cast<std::uint32_t>(n + i);
        prog.set_objective(eta, 1.0);
        auto terms = row_terms(M, i);
        if (y_hat.get(i)) {
            prog.set_bounds(eta, 0.0, 1.0);
            terms.emplace_back(eta, 1.0);
            prog.add_constraint_sparse(std::move(terms), lp::Relation::Ge, 1.0);
        } else {
            prog.set_bounds(eta, 0.0, static_cast<double>(dbar));
            terms.emplace_back(eta, -1.0);
            prog.add_constraint_sparse(std::move(terms), lp::Relation::Eq, 0.0);
        }
    }
    auto sum = sum_row(n, static_cast<double>(dbar));
    prog.add_constraint_sparse(std::move(sum.terms), sum.rel, sum.rhs);
    return prog;
}

LpDecodeOutput decode_nolipo(const TestMatrix& M, const ResultVector& y_hat, std::size_t d) {
    const auto prog = build_nolipo_lp(M, y_hat, d);
    const auto sol = lp::solve(prog);
    if (sol.status != lp::SolveStatus::Optimal)
        throw std::runtime_error("slack-minimizing program reported infeasible (solver defect)");
    return from_solution(M, sol, M.rows(), M.cols(), nullptr);
}

LpDecodeOutput decode_lipo(const TestMatrix& M, const ResultVector& y, std::size_t d) {
    check_dims(M, y);
    const std::size_t n = M.cols();
    if (d > n) throw std::invalid_argument("d exceeds number of items");
    lp::LinearProgram prog(n);
    for (std::uint32_t j = 0; j < n; ++j) prog.set_bounds(j, 0.0, 1.0);
    for (std::size_t i = 0; i < M.rows(); ++i) {
        auto terms = row_terms(M, i);
        if (y.get(i))
            prog.add_constraint_sparse(std::move(terms), lp::Relation::Ge, 1.0);
        else
            prog.add_constraint_sparse(std::move(terms), lp::Relation::Eq, 0.0);
    }
    auto sum = sum_row(n, static_cast<double>(d));
    prog.add_constraint_sparse(std::move(sum.terms), sum.rel, sum.rhs);

    const auto feas = lp::check_feasibility(prog);
    LpDecodeOutput out;
    out.eta.assign(M.rows(), 0.0);
    if (!feas.feasible) {
        out.failed = true;
        out.estimate = BitVec(n);
        out.fractional.assign(n, 0.0);
        return out;
    }
    out.fractional = feas.point;
    auto [estimate, integral] = round_solution(out.fractional);
    out.estimate = std::move(estimate);
    out.integral = integral;
    return out;
}

namespace {

LpDecodeOutput decode_one_sided(const TestMatrix& M, const ResultVector& y_hat, std::size_t d,
                                bool positive_side) {
    check_dims(M, y_hat);
    const std::size_t n = M.cols();
    if (d > n) throw std::invalid_argument("d exceeds number of items");
    std::vector<std::size_t> kept_rows;
    for (std::size_t i = 0; i < M.rows(); ++i)
        if (y_hat.get(i) == positive_side) kept_rows.push_back(i);

    lp::LinearProgram prog(n + kept_rows.size());
    for (std::uint32_t j = 0; j < n; ++j) prog.set_bounds(j, 0.0, 1.0);
    for (std::size_t t = 0; t < kept_rows.size(); ++t) {
        const auto eta = static_cast<std::uint32_t>(n + t);
        prog.set_objective(eta, 1.0);
        auto terms = row_terms(M, kept_rows[t]);
        if (positive_side) {
            prog.set_bounds(eta, 0.0, 1.0);
            terms.emplace_back(eta, 1.0);
            prog.add_constraint_sparse(std::move(terms), lp::Relation::Ge, 1.0);
        } else {
            prog.set_bounds(eta, 0.0, static_cast<double>(d));
            terms.emplace_back(eta, -1.0);
            prog.add_constraint_sparse(std::move(terms), lp::Relation::Eq, 0.0);
        }
    }
    auto sum = sum_row(n, static_cast<double>(d));
    prog.add_constraint_sparse(std::move(sum.terms), sum.rel, sum.rhs);

    const auto sol = lp::solve(prog);
    if (sol.status != lp::SolveStatus::Optimal)
        throw std::runtime_error("one-sided slack program reported infeasible (solver defect)");
    return from_solution(M, sol, kept_rows.size(), n, &kept_rows);
}

}  // namespace

LpDecodeOutput decode_nolipo_plus(const TestMatrix& M, const ResultVector& y_hat, std::size_t d) {
    return decode_one_sided(M, y_hat, d, true);
}

LpDecodeOutput decode_nolipo_minus(const TestMatrix& M, const ResultVector& y_hat, std::size_t d) {
    return decode_one_sided(M, y_hat, d, false);
}

LpDecodeOutput decode_nounlipo(const TestMatrix& M, const ResultVector& y_hat, std::size_t D,
                               double q, double tau) {
    check_dims(M, y_hat);
    if (D < 1) throw std::invalid_argument("nounlipo requires D >= 1");
    if (!(q >= 0.0 && q < 0.5)) throw std::invalid_argument("nounlipo requires 0 <= q < 1/2");
    const double eta_budget = static_cast<double>(M.rows()) * q * (1.0 + tau);
    for (std::size_t dbar = 0; dbar <= D; ++dbar) {
        auto out = decode_nolipo(M, y_hat, dbar);
        if (!out.integral) continue;
        if (out.estimate.popcount() != dbar) continue;
        std::size_t eta_weight = 0;
        for (double v : out.eta)
            if (v > lp::kIntTol) ++eta_weight;
        if (static_cast<double>(eta_weight) <= eta_budget) {
            out.accepted_dbar = dbar;
            return out;
        }
    }
    LpDecodeOutput out;
    out.failed = true;
    out.estimate = BitVec(M.cols());
    out.fractional.assign(M.cols(), 0.0);
    out.eta.assign(M.rows(), 0.0);
    return out;
}

std::pair<BitVec, bool> round_solution(const std::vector<double>& fractional, double tol_int) {
    BitVec estimate(fractional.size());
    bool integral = true;
    for (std::size_t j = 0; j < fractional.size(); ++j) {
        const double v = fractional[j];
        estimate.set(j, v >= 0.5);
        if (std::fabs(v) > tol_int && std::fabs(v - 1.0) > tol_int) integral = false;
    }
    return {std::move(estimate), integral};
}

std::vector<double> slack_at(const TestMatrix& M, const ResultVector& y_hat, const BitVec& x) {
    check_dims(M, y_hat);
    if (x.size() != M.cols()) throw std::invalid_argument("candidate length != matrix columns");
    std::vector<double> eta(M.rows(), 0.0);
    const auto xw = x.words();
    for (std::size_t i = 0; i < M.rows(); ++i) {
        const auto row = M.bits.row_words(i);
        std::size_t dot = 0;
        for (std::size_t w = 0; w < row.size(); ++w)
            dot += static_cast<std::size_t>(std::popcount(row[w] & xw[w]));
        if (y_hat.get(i))
            eta[i] = dot >= 1 ? 0.0 : 1.0;
        else
            eta[i] = static_cast<double>(dot);
    }
    return eta;
}

std::vector<PerturbationVector> perturbation_set(const BitVec& x) {
    std::vector<std::size_t> in, out;
    for (std::size_t j = 0; j < x.size(); ++j) (x.get(j) ? in : out).push_back(j);
    std::vector<PerturbationVector> phi;
    phi.reserve(in.size() * out.size());
    for (auto mi : in)
        for (auto pi : out) phi.push_back({mi, pi});
    return phi;
}

}  // namespace gtkit
