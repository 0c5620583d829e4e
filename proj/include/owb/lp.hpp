#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "owb/linalg.hpp"

namespace owb {

inline constexpr double kFeasibilityTol = 1e-9;

enum class LpStatus { optimal, infeasible, unbounded };

/// minimize objective.x  s.t.  equalities x = rhs,  x_j >= 0 where nonneg[j].
struct LpProblem {
  Vec objective;
  Matrix equalities;
  Vec rhs;
  std::vector<bool> nonneg;
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  Vec x;

  bool optimal() const { return status == LpStatus::optimal; }
};

/// Dense two-phase simplex with Bland's rule.
LpResult lp_minimize(const LpProblem& problem);

/// Incremental construction of LpProblem with named variable ranges.
class LpBuilder {
 public:
  using Terms = std::vector<std::pair<std::size_t, double>>;

  std::size_t add_free(std::size_t count = 1);
  std::size_t add_nonneg(std::size_t count = 1);
  void add_equality(Terms terms, double rhs);
  /// terms . x <= rhs, via a fresh nonnegative slack.
  void add_less_equal(Terms terms, double rhs);
  void set_cost(std::size_t var, double cost);
  std::size_t size() const { return nonneg_.size(); }
  LpProblem build() const;

 private:
  std::vector<bool> nonneg_;
  Vec cost_;
  std::vector<Terms> rows_;
  Vec rhs_;
};

}  // namespace owb
