#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "owb/cones.hpp"
#include "owb/linalg.hpp"

namespace owb {

/// Raised when an input fails an axiom check; carries human-readable witnesses.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> witnesses);
  const std::vector<std::string>& witnesses() const { return witnesses_; }

 private:
  std::vector<std::string> witnesses_;
};

using GroupTable = std::vector<std::vector<std::size_t>>;

class FiniteGroup {
 public:
  static FiniteGroup cyclic(std::size_t n);
  /// Symmetric group on n <= 4 letters, elements in lexicographic order of
  /// their one-line notation (identity first).
  static FiniteGroup symmetric(std::size_t n);
  static FiniteGroup from_table(const GroupTable& table);

  std::size_t order() const { return table_.size(); }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t identity() const { return identity_; }
  std::size_t inverse(std::size_t g) const { return inverse_[g]; }
  const GroupTable& table() const { return table_; }
  const std::string& name() const { return name_; }

 private:
  GroupTable table_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> inverse_;
  std::string name_ = "table";
};

/// Exhaustive axiom check; throws ValidationError naming the first failure.
FiniteGroup validate_group(const GroupTable& table);

struct AlgebraSpec {
  OrderedSpace carrier;
  /// constants[(i * dim + j) * dim + k] is the e_k coefficient of e_i e_j.
  Vec constants;
  std::optional<Vec> unit;
  std::optional<Vec> left_identity;
  std::optional<Vec> right_identity;
};

class OrderedAlgebra {
 public:
  std::size_t dim() const { return carrier_.dim(); }
  const OrderedSpace& carrier() const { return carrier_; }
  const NormedSpace& space() const { return carrier_.space; }
  const Cone& cone() const { return carrier_.cone; }
  const Vec& constants() const { return constants_; }

  Vec multiply(std::span<const double> a, std::span<const double> b) const;
  /// Matrix of b -> a b.
  Matrix left_multiplication(std::span<const double> a) const;
  /// Matrix of a -> a b.
  Matrix right_multiplication(std::span<const double> b) const;

  const std::optional<Vec>& unit() const { return unit_; }
  /// Unit if present, otherwise the left identity.
  const std::optional<Vec>& left_identity() const { return left_; }
  const std::optional<Vec>& right_identity() const { return right_; }
  /// Largest |ab| / (|a||b|); exact for polyhedral norms.
  const Tagged& multiplication_bound() const { return mult_bound_; }
  bool submultiplicative() const { return mult_bound_.value <= 1.0 + kTol; }

 private:
  friend OrderedAlgebra validate_algebra(AlgebraSpec spec);
  explicit OrderedAlgebra(OrderedSpace c) : carrier_(std::move(c)) {}
  OrderedSpace carrier_;
  Vec constants_;
  std::optional<Vec> unit_, left_, right_;
  Tagged mult_bound_;
};

/// Checks associativity, cone multiplicativity and supplied identities;
/// detects identities that were not supplied.
OrderedAlgebra validate_algebra(AlgebraSpec spec);

/// Solutions of u a = a (left) or a u = a (right) for all a, if any.
std::optional<Vec> find_left_identity(const Vec& constants, std::size_t dim);
std::optional<Vec> find_right_identity(const Vec& constants, std::size_t dim);

namespace algebras {
OrderedAlgebra scalars(NormKind norm = NormKind::one());
/// R^n with the pointwise product and the standard cone.
OrderedAlgebra pointwise(std::size_t n, NormKind norm = NormKind::sup());
/// Upper-triangular 2x2 matrices on the basis E11, E12, E22 with the
/// entrywise cone.
OrderedAlgebra upper_triangular(NormKind norm = NormKind::one());
/// Convolution algebra of the cyclic group of order n.
OrderedAlgebra cyclic_convolution(std::size_t n, NormKind norm = NormKind::one());
/// Pointwise R^3 ordered by the cone generated by (1,1,1), (1,1,0), (1,0,0).
OrderedAlgebra chain(NormKind norm = NormKind::sup());
/// e_i e_j = phi_i e_j: left identities but no right identity when n > 1.
OrderedAlgebra left_projection(const Vec& phi, NormKind norm = NormKind::one());
}  // namespace algebras

/// Per-element matrices, checked to be a positive action by automorphisms.
std::vector<Matrix> validate_action(const FiniteGroup& g, const OrderedAlgebra& a, std::vector<Matrix> matrices);

std::vector<Matrix> trivial_action(const FiniteGroup& g, const OrderedAlgebra& a);
/// Coordinate permutations: element g sends e_i to e_{perm[g][i]}.
std::vector<Matrix> permutation_action(const std::vector<std::vector<std::size_t>>& perms);
/// g sends e_h to e_{gh}; needs an algebra of dimension |G|.
std::vector<Matrix> regular_permutation_action(const FiniteGroup& g);

struct DynamicalSystem {
  OrderedAlgebra algebra;
  FiniteGroup group;
  std::vector<Matrix> alpha;
  double c_alpha = 1.0;
  bool isometric = true;

  std::size_t dim() const { return algebra.dim(); }
  std::size_t order() const { return group.order(); }
};

DynamicalSystem make_system(OrderedAlgebra a, FiniteGroup g, std::vector<Matrix> matrices);

/// max over g of |alpha_g| on the algebra norm.
double uniform_bound(const DynamicalSystem& ds);

/// Element of C_c(G, A): one algebra vector per group element, stored flat.
struct CcFunction {
  std::size_t order = 0;
  std::size_t dim = 0;
  Vec coords;

  CcFunction() = default;
  CcFunction(std::size_t order, std::size_t dim) : order(order), dim(dim), coords(order * dim, 0.0) {}
  CcFunction(std::size_t order, std::size_t dim, Vec c);
  static CcFunction delta(const DynamicalSystem& ds, std::size_t s, std::span<const double> a);
  static CcFunction zero(const DynamicalSystem& ds) { return {ds.order(), ds.dim()}; }

  std::span<const double> at(std::size_t s) const { return {coords.data() + s * dim, dim}; }
  std::span<double> at(std::size_t s) { return {coords.data() + s * dim, dim}; }
};

}  // namespace owb
