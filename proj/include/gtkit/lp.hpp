#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gtkit::lp {

enum class Relation { Eq, Ge, Le };

struct Constraint {
    std::vector<std::pair<std::uint32_t, double>> terms;  // sparse (var, coef), var indices unique
    Relation rel = Relation::Eq;
    double rhs = 0.0;
};

// Minimization program over box-bounded variables. Decoder programs are built
// sparsely; the dense add_constraint path validates row length.
class LinearProgram {
  public:
    explicit LinearProgram(std::size_t num_vars)
        : objective_(num_vars, 0.0), lower_(num_vars, 0.0), upper_(num_vars, 0.0) {}

    std::size_t num_vars() const { return objective_.size(); }

    void set_objective(std::size_t var, double coef) { objective_.at(var) = coef; }
    void set_bounds(std::size_t var, double lo, double hi);

    // Dense row; throws std::invalid_argument unless row.size() == num_vars().
    void add_constraint(const std::vector<double>& row, Relation rel, double rhs);
    void add_constraint_sparse(std::vector<std::pair<std::uint32_t, double>> terms, Relation rel,
                               double rhs);

    const std::vector<double>& objective() const { return objective_; }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }

  private:
    std::vector<double> objective_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<Constraint> constraints_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> values;
    double objective_value = 0.0;
};

inline constexpr double kFeasTol = 1e-9;
inline constexpr double kObjTol = 1e-9;
inline constexpr double kIntTol = 1e-6;

// Bounded-variable revised simplex (Dantzig pricing with Bland's rule as the
// anti-cycling guard), preceded by a presolve that substitutes singleton
// slack-like variables out of equality rows and drops rows made redundant by
// bounds or by a dominating equality row. Deterministic for identical input.
// Unboundedness cannot occur for box-bounded programs; it is reported as a
// defect if encountered.
LpSolution solve(const LinearProgram& lp);

struct FeasibilityResult {
    bool feasible = false;
    std::vector<double> point;
};

// Phase-one only: returns any feasible point, or infeasible.
FeasibilityResult check_feasibility(const LinearProgram& lp);

// Human-readable dump of the program, for debugging.
std::string dump(const LinearProgram& lp);

}  // namespace gtkit::lp
