#include "gtkit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace gtkit::lp {

void LinearProgram::set_bounds(std::size_t var, double lo, double hi) {
    if (var >= num_vars()) throw std::invalid_argument("variable index out of range");
    if (!(lo <= hi)) throw std::invalid_argument("variable bounds crossed");
    lower_[var] = lo;
    upper_[var] = hi;
}

void LinearProgram::add_constraint(const std::vector<double>& row, Relation rel, double rhs) {
    if (row.size() != num_vars())
        throw std::invalid_argument("constraint row length != number of variables");
    std::vector<std::pair<std::uint32_t, double>> terms;
    for (std::uint32_t j = 0; j < row.size(); ++j)
        if (row[j] != 0.0) terms.emplace_back(j, row[j]);
    constraints_.push_back({std::move(terms), rel, rhs});
}

void LinearProgram::add_constraint_sparse(std::vector<std::pair<std::uint32_t, double>> terms,
                                          Relation rel, double rhs) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::uint32_t, double>> merged;
    for (const auto& [j, c] : terms) {
        if (j >= num_vars()) throw std::invalid_argument("constraint term index out of range");
        if (!merged.empty() && merged.back().first == j)
            merged.back().second += c;
        else
            merged.emplace_back(j, c);
    }
    std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
    constraints_.push_back({std::move(merged), rel, rhs});
}

std::string dump(const LinearProgram& lp) {
    std::ostringstream os;
    os << "min";
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
        if (lp.objective()[j] != 0.0) os << " + " << lp.objective()[j] << "*x" << j;
    os << "\nsubject to\n";
    for (const auto& c : lp.constraints()) {
        bool first = true;
        for (const auto& [j, v] : c.terms) {
            os << (first ? "  " : " + ") << v << "*x" << j;
            first = false;
        }
        const char* rel = c.rel == Relation::Eq ? "=" : (c.rel == Relation::Ge ? ">=" : "<=");
        os << ' ' << rel << ' ' << c.rhs << '\n';
    }
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
        os << "  " << lp.lower()[j] << " <= x" << j << " <= " << lp.upper()[j] << '\n';
    return os.str();
}

}  // namespace gtkit::lp
