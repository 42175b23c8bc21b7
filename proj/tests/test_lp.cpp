#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gtkit/lp.hpp"
#include "gtkit/rng.hpp"

using namespace gtkit;
using lp::LinearProgram;
using lp::Relation;

namespace {

// Brute-force vertex enumeration: intersect every choice of num_vars active
// hyperplanes drawn from constraint rows and variable bounds, keep the
// feasible points, and return the best objective. Exponential, but exact for
// the <= 6 variable programs it is used on.
struct DenseLp {
    std::size_t nv;
    std::vector<double> c, lo, hi;
    std::vector<std::vector<double>> rows;
    std::vector<Relation> rels;
    std::vector<double> rhs;

    LinearProgram to_lp() const {
        LinearProgram p(nv);
        for (std::size_t j = 0; j < nv; ++j) {
            p.set_objective(j, c[j]);
            p.set_bounds(j, lo[j], hi[j]);
        }
        for (std::size_t r = 0; r < rows.size(); ++r) p.add_constraint(rows[r], rels[r], rhs[r]);
        return p;
    }

    bool feasible(const std::vector<double>& x, double tol = 1e-7) const {
        for (std::size_t j = 0; j < nv; ++j)
            if (x[j] < lo[j] - tol || x[j] > hi[j] + tol) return false;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            double a = 0;
            for (std::size_t j = 0; j < nv; ++j) a += rows[r][j] * x[j];
            if (rels[r] == Relation::Eq && std::fabs(a - rhs[r]) > tol) return false;
            if (rels[r] == Relation::Ge && a < rhs[r] - tol) return false;
            if (rels[r] == Relation::Le && a > rhs[r] + tol) return false;
        }
        return true;
    }

    double objective(const std::vector<double>& x) const {
        double v = 0;
        for (std::size_t j = 0; j < nv; ++j) v += c[j] * x[j];
        return v;
    }
};

bool solve_linear_system(std::vector<std::vector<double>> A, std::vector<double> b,
                         std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        if (std::fabs(A[piv][col]) < 1e-10) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            if (f == 0) continue;
            for (std::size_t cc = col; cc < n; ++cc) A[r][cc] -= f * A[col][cc];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
    return true;
}

// Returns the optimal objective over enumerated vertices, or nullopt when no
// feasible vertex exists (for bounded boxes this means infeasible).
std::optional<double> brute_force_optimum(const DenseLp& p) {
    // Candidate hyperplanes: each constraint row (as equality) and each bound.
    std::vector<std::vector<double>> planes;
    std::vector<double> prhs;
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        planes.push_back(p.rows[r]);
        prhs.push_back(p.rhs[r]);
    }
    for (std::size_t j = 0; j < p.nv; ++j) {
        std::vector<double> e(p.nv, 0.0);
        e[j] = 1.0;
        planes.push_back(e);
        prhs.push_back(p.lo[j]);
        planes.push_back(e);
        prhs.push_back(p.hi[j]);
    }
    const std::size_t np = planes.size();
    std::optional<double> best;
    // Enumerate combinations of nv planes.
    std::vector<std::size_t> idx(p.nv);
    for (std::size_t j = 0; j < p.nv; ++j) idx[j] = j;
    for (;;) {
        std::vector<std::vector<double>> A;
        std::vector<double> b;
        for (auto i : idx) {
            A.push_back(planes[i]);
            b.push_back(prhs[i]);
        }
        std::vector<double> x;
        if (solve_linear_system(A, b, x) && p.feasible(x)) {
            const double v = p.objective(x);
            if (!best || v < *best) best = v;
        }
        int i = static_cast<int>(p.nv) - 1;
        while (i >= 0 && idx[i] == i + np - p.nv) --i;
        if (i < 0) break;
        ++idx[i];
        for (std::size_t j2 = i + 1; j2 < p.nv; ++j2) idx[j2] = idx[j2 - 1] + 1;
    }
    return best;
}

DenseLp random_lp(Rng& rng, std::size_t nv, std::size_t nrows) {
    DenseLp p;
    p.nv = nv;
    p.c.resize(nv);
    p.lo.assign(nv, 0.0);
    p.hi.assign(nv, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        p.c[j] = std::floor(rng.next_double() * 11.0) - 5.0;
        p.lo[j] = std::floor(rng.next_double() * 3.0) - 1.0;
        p.hi[j] = p.lo[j] + std::floor(rng.next_double() * 4.0);
    }
    for (std::size_t r = 0; r < nrows; ++r) {
        std::vector<double> row(nv, 0.0);
        for (std::size_t j = 0; j < nv; ++j) row[j] = std::floor(rng.next_double() * 5.0) - 2.0;
        const double rhs = std::floor(rng.next_double() * 7.0) - 3.0;
        const double pick = rng.next_double();
        const Relation rel =
            pick < 0.3 ? Relation::Eq : (pick < 0.65 ? Relation::Ge : Relation::Le);
        p.rows.push_back(row);
        p.rels.push_back(rel);
        p.rhs.push_back(rhs);
    }
    return p;
}

}  // namespace

TEST_CASE("single active constraint") {
    LinearProgram p(1);
    p.set_objective(0, 1.0);
    p.set_bounds(0, 0.0, 2.0);
    p.add_constraint({1.0}, Relation::Ge, 1.0);
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::SolveStatus::Optimal);
    CHECK(sol.values[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two-variable vertex") {
    // min eta s.t. eta + x >= 1, x = 0, boxes [0,1]: optimum eta = 1.
    LinearProgram p(2);
    p.set_objective(0, 1.0);
    p.set_bounds(0, 0.0, 1.0);
    p.set_bounds(1, 0.0, 1.0);
    p.add_constraint({1.0, 1.0}, Relation::Ge, 1.0);
    p.add_constraint({0.0, 1.0}, Relation::Eq, 0.0);
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::SolveStatus::Optimal);
    CHECK(sol.values[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.values[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("contradictory bounds are infeasible") {
    LinearProgram p(1);
    p.set_bounds(0, 0.0, 1.0);
    p.add_constraint({1.0}, Relation::Eq, 2.0);
    CHECK(lp::solve(p).status == lp::SolveStatus::Infeasible);
    CHECK_FALSE(lp::check_feasibility(p).feasible);
}

TEST_CASE("row length validation") {
    LinearProgram p(2);
    CHECK_THROWS_AS(p.add_constraint({1.0}, Relation::Eq, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(p.set_bounds(0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("feasibility point satisfies all constraints") {
    LinearProgram p(3);
    for (int j = 0; j < 3; ++j) p.set_bounds(j, 0.0, 1.0);
    p.add_constraint({1.0, 1.0, 0.0}, Relation::Ge, 1.0);
    p.add_constraint({0.0, 1.0, 1.0}, Relation::Le, 1.0);
    p.add_constraint({1.0, 1.0, 1.0}, Relation::Eq, 1.5);
    const auto fr = lp::check_feasibility(p);
    REQUIRE(fr.feasible);
    const double s = fr.point[0] + fr.point[1] + fr.point[2];
    CHECK(s == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(fr.point[0] + fr.point[1] >= 1.0 - 1e-8);
    CHECK(fr.point[1] + fr.point[2] <= 1.0 + 1e-8);
}

TEST_CASE("solver matches vertex enumeration on random small programs") {
    Rng rng(4711);
    int solved = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t nv = 2 + rng.uniform_below(4);       // 2..5
        const std::size_t nr = 1 + rng.uniform_below(4);       // 1..4
        const DenseLp dense = random_lp(rng, nv, nr);
        const auto expect = brute_force_optimum(dense);
        const auto sol = lp::solve(dense.to_lp());
        if (!expect) {
            CHECK(sol.status == lp::SolveStatus::Infeasible);
            continue;
        }
        REQUIRE(sol.status == lp::SolveStatus::Optimal);
        CHECK(dense.feasible(sol.values));
        CHECK(sol.objective_value == doctest::Approx(*expect).epsilon(1e-7).scale(1.0));
        ++solved;
    }
    CHECK(solved > 50);  // the generator must exercise feasible cases
}

TEST_CASE("feasibility agrees with zero-objective solve on random programs") {
    Rng rng(997);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t nv = 2 + rng.uniform_below(3);  // 2..4
        DenseLp dense = random_lp(rng, nv, 1 + rng.uniform_below(3));
        std::fill(dense.c.begin(), dense.c.end(), 0.0);
        const auto expect = brute_force_optimum(dense);
        const auto feas = lp::check_feasibility(dense.to_lp());
        const auto sol = lp::solve(dense.to_lp());
        CHECK(feas.feasible == expect.has_value());
        CHECK((sol.status == lp::SolveStatus::Optimal) == expect.has_value());
        if (feas.feasible) CHECK(dense.feasible(feas.point));
    }
}

TEST_CASE("weak duality: Lagrangian bounds never exceed the optimum") {
    // For min c.x st A x >= b (after normalization), any multipliers y >= 0
    // give the bound min_box [c.x + y.(b - A x)] <= optimum.
    Rng rng(1377);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t nv = 2 + rng.uniform_below(3);
        DenseLp dense = random_lp(rng, nv, 1 + rng.uniform_below(3));
        // Normalize to >= form: Eq rows become two inequalities.
        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        for (std::size_t r = 0; r < dense.rows.size(); ++r) {
            std::vector<double> row = dense.rows[r];
            if (dense.rels[r] == Relation::Ge || dense.rels[r] == Relation::Eq) {
                rows.push_back(row);
                rhs.push_back(dense.rhs[r]);
            }
            if (dense.rels[r] == Relation::Le || dense.rels[r] == Relation::Eq) {
                for (auto& v : row) v = -v;
                rows.push_back(row);
                rhs.push_back(-dense.rhs[r]);
            }
        }
        const auto sol = lp::solve(dense.to_lp());
        if (sol.status != lp::SolveStatus::Optimal) continue;
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> y(rows.size());
            for (auto& v : y) v = rng.next_double() * 2.0;
            double bound = 0.0;
            for (std::size_t r = 0; r < rows.size(); ++r) bound += y[r] * rhs[r];
            for (std::size_t j = 0; j < nv; ++j) {
                double coef = dense.c[j];
                for (std::size_t r = 0; r < rows.size(); ++r) coef -= y[r] * rows[r][j];
                bound += coef > 0 ? coef * dense.lo[j] : coef * dense.hi[j];
            }
            CHECK(bound <= sol.objective_value + 1e-7);
        }
    }
}

TEST_CASE("solve is deterministic") {
    Rng rng(2024);
    const DenseLp dense = random_lp(rng, 5, 4);
    const auto a = lp::solve(dense.to_lp());
    const auto b = lp::solve(dense.to_lp());
    CHECK(a.status == b.status);
    if (a.status == lp::SolveStatus::Optimal) {
        for (std::size_t j = 0; j < 5; ++j) CHECK(a.values[j] == b.values[j]);
    }
}

TEST_CASE("dump is readable") {
    LinearProgram p(2);
    p.set_objective(0, 1.0);
    p.set_bounds(0, 0.0, 1.0);
    p.set_bounds(1, 0.0, 2.0);
    p.add_constraint({1.0, -1.0}, Relation::Le, 0.5);
    const auto text = lp::dump(p);
    CHECK(text.find("min") != std::string::npos);
    CHECK(text.find("<=") != std::string::npos);
}
