#pragma once

// Dense-tableau simplex over exact rationals.
//
//   minimize  c . x   subject to  rows,  x >= 0
//
// Two phases with Bland's smallest-index rule for both the entering and the
// leaving variable, which guarantees termination without perturbation.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace facial::lp {

using Rational = mpq_class;

enum class Relation { less_equal, equal, greater_equal };

struct Row {
  std::vector<std::pair<std::size_t, Rational>> coeffs;  // (variable, coefficient)
  Relation relation = Relation::less_equal;
  Rational rhs = 0;
  // A variable that may start basic in this row. It is pivoted in before
  // phase one; rows left without a feasible basic variable get an artificial.
  std::optional<std::size_t> basis_hint;
};

struct Problem {
  std::size_t num_vars = 0;
  std::vector<Rational> objective;  // size num_vars
  std::vector<Row> rows;
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::infeasible;
  Rational value = 0;
  std::vector<Rational> x;
  std::size_t pivots = 0;
};

Solution solve(const Problem& problem);

}  // namespace facial::lp
