#include "owb/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace owb {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-10;
constexpr std::size_t kMaxPivots = 200000;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows + 1, cols + 1) {}

  double& at(std::size_t i, std::size_t j) { return t_(i, j); }
  double rhs(std::size_t i) const { return t_(i, n_); }
  double& rhs(std::size_t i) { return t_(i, n_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / t_(r, c);
    for (std::size_t j = 0; j <= n_; ++j) t_(r, j) *= inv;
    t_(r, c) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) t_(i, j) -= f * t_(r, j);
      t_(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Runs simplex iterations over columns [0, allowed). Returns false when
  // the objective is unbounded below.
  bool optimise(std::size_t allowed) {
    for (std::size_t iter = 0; iter < kMaxPivots; ++iter) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j)
        if (t_(m_, j) < -kCostEps) {
          enter = j;
          break;
        }
      if (enter == allowed) return true;
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = t_(i, n_) / a;
        if (leave == m_ || ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit reached");
  }

  void remove_row(std::size_t r) {
    Matrix next(m_, n_ + 1);
    std::size_t k = 0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      for (std::size_t j = 0; j <= n_; ++j) next(k, j) = t_(i, j);
      ++k;
    }
    t_ = std::move(next);
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  Matrix t_;
  std::vector<std::size_t> basis_ = std::vector<std::size_t>(m_);
};

}  // namespace

LpResult lp_minimize(const LpProblem& p) {
  const std::size_t n = p.objective.size();
  const std::size_t m = p.rhs.size();
  if (p.nonneg.size() != n || p.equalities.cols() != n || p.equalities.rows() != m)
    throw DimensionError("linear program is not well-shaped");

  // Free variables split into positive and negative parts.
  std::vector<std::size_t> pos(n), neg(n, SIZE_MAX);
  std::size_t ns = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pos[j] = ns++;
    if (!p.nonneg[j]) neg[j] = ns++;
  }
  Vec cost(ns, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    cost[pos[j]] = p.objective[j];
    if (neg[j] != SIZE_MAX) cost[neg[j]] = -p.objective[j];
  }

  Tableau tab(m, ns + m);
  double bscale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = p.rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      tab.at(i, pos[j]) = sign * p.equalities(i, j);
      if (neg[j] != SIZE_MAX) tab.at(i, neg[j]) = -sign * p.equalities(i, j);
    }
    tab.at(i, ns + i) = 1.0;
    tab.rhs(i) = sign * p.rhs[i];
    tab.basis()[i] = ns + i;
    bscale = std::max(bscale, std::abs(p.rhs[i]));
  }

  // Phase one: minimise the sum of artificials.
  for (std::size_t j = 0; j < ns; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += tab.at(i, j);
    tab.at(m, j) = -s;
  }
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) z += tab.rhs(i);
  tab.rhs(m) = -z;
  tab.optimise(ns);
  if (-tab.rhs(tab.rows()) > kFeasibilityTol * bscale) return {LpStatus::infeasible, 0.0, {}};

  // Drive remaining artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.rows();) {
    if (tab.basis()[i] < ns) {
      ++i;
      continue;
    }
    std::size_t best = ns;
    double mag = 1e-9;
    for (std::size_t j = 0; j < ns; ++j)
      if (std::abs(tab.at(i, j)) > mag) {
        mag = std::abs(tab.at(i, j));
        best = j;
      }
    if (best == ns) {
      tab.remove_row(i);
    } else {
      tab.pivot(i, best);
      ++i;
    }
  }

  // Phase two.
  const std::size_t mm = tab.rows();
  for (std::size_t j = 0; j < ns + m; ++j) {
    double s = j < ns ? cost[j] : 0.0;
    for (std::size_t i = 0; i < mm; ++i) {
      const std::size_t b = tab.basis()[i];
      if (b < ns) s -= cost[b] * tab.at(i, j);
    }
    tab.at(mm, j) = s;
  }
  double obj = 0.0;
  for (std::size_t i = 0; i < mm; ++i) {
    const std::size_t b = tab.basis()[i];
    if (b < ns) obj += cost[b] * tab.rhs(i);
  }
  tab.rhs(mm) = -obj;
  if (!tab.optimise(ns)) return {LpStatus::unbounded, 0.0, {}};

  Vec xs(ns, 0.0);
  for (std::size_t i = 0; i < mm; ++i)
    if (tab.basis()[i] < ns) xs[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
  LpResult r;
  r.status = LpStatus::optimal;
  r.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) r.x[j] = xs[pos[j]] - (neg[j] != SIZE_MAX ? xs[neg[j]] : 0.0);
  r.value = dot(p.objective, r.x);
  return r;
}

std::size_t LpBuilder::add_free(std::size_t count) {
  const std::size_t first = nonneg_.size();
  nonneg_.insert(nonneg_.end(), count, false);
  cost_.insert(cost_.end(), count, 0.0);
  return first;
}

std::size_t LpBuilder::add_nonneg(std::size_t count) {
  const std::size_t first = nonneg_.size();
  nonneg_.insert(nonneg_.end(), count, true);
  cost_.insert(cost_.end(), count, 0.0);
  return first;
}

void LpBuilder::add_equality(Terms terms, double rhs) {
  rows_.push_back(std::move(terms));
  rhs_.push_back(rhs);
}

void LpBuilder::add_less_equal(Terms terms, double rhs) {
  const std::size_t slack = add_nonneg();
  terms.emplace_back(slack, 1.0);
  add_equality(std::move(terms), rhs);
}

void LpBuilder::set_cost(std::size_t var, double cost) { cost_.at(var) = cost; }

LpProblem LpBuilder::build() const {
  LpProblem p;
  p.objective = cost_;
  p.nonneg = nonneg_;
  p.rhs = rhs_;
  p.equalities = Matrix(rows_.size(), nonneg_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [var, coef] : rows_[i]) p.equalities(i, var) += coef;
  return p;
}

}  // namespace owb
