#include "facial/lp.hpp"

#include "facial/error.hpp"

namespace facial::lp {

namespace {

class Tableau {
 public:
  explicit Tableau(const Problem& p) : structural_(p.num_vars) {
    if (p.objective.size() != p.num_vars) {
      throw ValidationError("objective length does not match the number of variables");
    }
    const std::size_t m = p.rows.size();
    std::size_t slacks = 0;
    for (const Row& row : p.rows) {
      if (row.relation != Relation::equal) ++slacks;
    }
    slack_begin_ = structural_;
    artificial_begin_ = slack_begin_ + slacks;
    cols_ = artificial_begin_ + m;
    rows_.assign(m, std::vector<Rational>(cols_ + 1));
    basis_.assign(m, kNone);
    artificial_used_.assign(m, false);

    std::size_t slack = slack_begin_;
    for (std::size_t r = 0; r < m; ++r) {
      const Row& row = p.rows[r];
      auto& t = rows_[r];
      for (const auto& [var, coeff] : row.coeffs) {
        if (var >= structural_) throw ValidationError("row refers to an unknown variable");
        t[var] += coeff;
      }
      t[cols_] = row.rhs;
      if (row.relation == Relation::less_equal) {
        t[slack] = 1;
        basis_[r] = slack++;
      } else if (row.relation == Relation::greater_equal) {
        t[slack++] = -1;
      }
    }

    for (std::size_t r = 0; r < m; ++r) {
      const auto& hint = p.rows[r].basis_hint;
      if (!hint) continue;
      if (*hint >= structural_ || sgn(rows_[r][*hint]) == 0) {
        throw ValidationError("basis hint is not usable in its row");
      }
      pivot(r, *hint);
    }
    for (std::size_t r = 0; r < m; ++r) {
      auto& t = rows_[r];
      if (sgn(t[cols_]) < 0) {
        for (auto& v : t) v = -v;
        basis_[r] = kNone;
      }
      if (basis_[r] == kNone) {
        t[artificial_begin_ + r] = 1;
        basis_[r] = artificial_begin_ + r;
        artificial_used_[r] = true;
      }
    }
    cost_.assign(cols_ + 1, Rational(0));
  }

  Solution run(const Problem& p) {
    Solution out;
    // Phase one: minimise the sum of artificials.
    std::vector<Rational> phase_one(cols_, Rational(0));
    bool any_artificial = false;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (artificial_used_[r]) {
        phase_one[artificial_begin_ + r] = 1;
        any_artificial = true;
      }
    }
    if (any_artificial) {
      price(phase_one);
      if (!iterate(true)) throw InvariantViolation("phase one of the simplex is unbounded");
      if (sgn(cost_[cols_]) != 0) {
        out.status = Status::infeasible;
        out.pivots = pivots_;
        return out;
      }
      drive_out_artificials();
    }

    std::vector<Rational> c(cols_, Rational(0));
    for (std::size_t j = 0; j < structural_; ++j) c[j] = p.objective[j];
    price(c);
    if (!iterate(false)) {
      out.status = Status::unbounded;
      out.pivots = pivots_;
      return out;
    }

    out.status = Status::optimal;
    out.x.assign(structural_, Rational(0));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (basis_[r] < structural_) out.x[basis_[r]] = rows_[r][cols_];
    }
    out.value = -cost_[cols_];
    out.pivots = pivots_;
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool is_artificial(std::size_t j) const { return j >= artificial_begin_; }

  // Reduced costs for objective c under the current basis; cost_[cols_]
  // holds minus the objective value.
  void price(const std::vector<Rational>& c) {
    for (std::size_t j = 0; j < cols_; ++j) cost_[j] = c[j];
    cost_[cols_] = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (basis_[r] == kNone) continue;
      const Rational& cb = c[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (sgn(rows_[r][j]) != 0) cost_[j] -= cb * rows_[r][j];
      }
    }
  }

  // Bland's rule; returns false when the objective is unbounded below.
  bool iterate(bool phase_one) {
    for (;;) {
      std::size_t entering = kNone;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (is_artificial(j) && (!phase_one || !artificial_used_[j - artificial_begin_])) continue;
        if (sgn(cost_[j]) < 0) {
          entering = j;
          break;
        }
      }
      if (entering == kNone) return true;

      std::size_t leaving = kNone;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (basis_[r] == kNone || sgn(rows_[r][entering]) <= 0) continue;
        Rational ratio = rows_[r][cols_] / rows_[r][entering];
        if (leaving == kNone || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leaving])) {
          leaving = r;
          best_ratio = std::move(ratio);
        }
      }
      if (leaving == kNone) return false;
      pivot(leaving, entering);
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (basis_[r] == kNone || !is_artificial(basis_[r])) continue;
      std::size_t col = kNone;
      for (std::size_t j = 0; j < artificial_begin_; ++j) {
        if (sgn(rows_[r][j]) != 0) {
          col = j;
          break;
        }
      }
      if (col == kNone) {
        // Redundant constraint.
        basis_[r] = kNone;
        for (auto& v : rows_[r]) v = 0;
      } else {
        pivot(r, col);
      }
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    auto& prow = rows_[r];
    const Rational inv = 1 / prow[c];
    nonzero_.clear();
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nonzero_.push_back(j);
      }
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[c]) == 0) return;
      const Rational factor = row[c];
      for (std::size_t j : nonzero_) row[j] -= factor * prow[j];
    };
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    if (!cost_.empty()) eliminate(cost_);
    basis_[r] = c;
  }

  std::size_t structural_;
  std::size_t slack_begin_ = 0;
  std::size_t artificial_begin_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basis_;
  std::vector<bool> artificial_used_;
  std::vector<Rational> cost_;
  std::vector<std::size_t> nonzero_;
  std::size_t pivots_ = 0;
};

}  // namespace

Solution solve(const Problem& problem) {
  Tableau t(problem);
  return t.run(problem);
}

}  // namespace facial::lp
