#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "owb/linalg.hpp"
#include "owb/lp.hpp"

namespace owb {

/// Polyhedral norm as an expression tree: leaves are (weighted) one- or
/// sup-norms of a linear image, inner nodes are sums or maxima.
struct NormNode {
  enum class Kind { one, sup, sum, max };
  Kind kind = Kind::one;
  Matrix map;
  Vec weights;
  std::vector<NormNode> children;
};

std::optional<NormNode> polyhedral_model(const NormedSpace& space);
NormNode compose(NormNode node, const Matrix& m);
double evaluate(const NormNode& node, std::span<const double> x);

/// Linear functionals whose pointwise maximum is the norm, or nullopt past `cap`.
std::optional<std::vector<Vec>> dual_functionals(const NormNode& node, std::size_t cap);

/// Affine expression in LP variables: coordinate i = coords[i] + offset[i].
struct AffineExpr {
  std::vector<LpBuilder::Terms> coords;
  Vec offset;

  static AffineExpr variables(std::size_t first, std::size_t dim);
  std::size_t dim() const { return coords.size(); }
};

AffineExpr apply(const Matrix& m, const AffineExpr& x);
Vec evaluate(const AffineExpr& e, std::span<const double> vars);
AffineExpr operator+(const AffineExpr& a, const AffineExpr& b);
AffineExpr operator-(const AffineExpr& a, const AffineExpr& b);

/// Adds auxiliary variables and rows so that the returned linear terms
/// dominate |x| and can be driven down to |x| exactly.
LpBuilder::Terms norm_epigraph(LpBuilder& lp, const NormNode& node, const AffineExpr& x);

/// Adds  |x| <= bound.
void add_norm_bound(LpBuilder& lp, const NormNode& node, const AffineExpr& x, double bound);

/// sup of phi.x over the feasible set for each phi; nullopt if any LP is
/// infeasible, +inf if unbounded.
std::optional<double> maximize_functionals(const LpProblem& base, const AffineExpr& x,
                                           const std::vector<Vec>& functionals);

struct TwoNormSum {
  double value = 0.0;  // best objective found
  double lower = 0.0;  // certified lower bound
  Vec solution;
  bool converged = false;
};

/// Minimises sum_j |exprs_j|_2 over the feasible set of `base` by Kelley
/// cutting planes.
TwoNormSum minimize_two_norm_sum(const LpBuilder& base, const std::vector<AffineExpr>& exprs,
                                 std::size_t max_rounds = 400);

}  // namespace owb
