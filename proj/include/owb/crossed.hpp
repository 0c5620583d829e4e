#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "owb/cones.hpp"
#include "owb/dynsys.hpp"
#include "owb/reps.hpp"

namespace owb {

/// (f * g)(s) = sum_r f(r) alpha_r(g(r^{-1} s)).
CcFunction convolve(const DynamicalSystem& ds, const CcFunction& f, const CcFunction& g);

/// Random nonnegative combination of the delta_s (x) c_j.
CcFunction random_positive_function(const DynamicalSystem& ds, std::mt19937_64& rng);
CcFunction random_function(const DynamicalSystem& ds, std::mt19937_64& rng);

struct ConvolutionPositivity {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::vector<std::string> witnesses;
};

ConvolutionPositivity convolve_positivity_check(const DynamicalSystem& ds, std::size_t samples, std::uint64_t seed);

/// Raised when the kernel rank cannot be decided at the working tolerance.
class RankAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CrossedConeReport {
  ConeReport cone;
  bool generating_predicted = false;  // A+ generating
  bool proper_predicted = false;      // positive reps on spaces with proper operator cones
  bool lattice_predicted = false;     // lattice-valued reps: 1-absolutely normal
  std::vector<std::string> notes;
};

class CrossedProduct {
 public:
  const DynamicalSystem& system() const { return ds_; }
  const RepClass& reps() const { return reps_; }

  std::size_t dim() const { return basis_.size(); }
  std::size_t lift_dim() const { return ds_.order() * ds_.dim(); }
  /// Basis of ker sigma^R inside C_c(G, A).
  const std::vector<Vec>& kernel() const { return kernel_; }
  /// Flat C_c index of each quotient basis vector (a standard coset).
  const std::vector<std::size_t>& basis() const { return basis_; }
  /// Quotient map q (dim x lift_dim).
  const Matrix& projection() const { return projection_; }
  /// Left multiplication by each quotient basis vector.
  const std::vector<Matrix>& product_table() const { return table_; }
  const OrderedSpace& ordered_space() const { return space_; }
  const Cone& cone() const { return space_.cone; }
  const NormedSpace& space() const { return space_.space; }
  /// Per-rep induced operators on the quotient basis.
  const std::vector<std::vector<Matrix>>& induced() const { return induced_; }
  const std::optional<Vec>& identity() const { return identity_; }
  bool identity_is_left() const { return identity_left_; }
  bool identity_is_right() const { return identity_right_; }

  Vec q(const CcFunction& f) const;
  CcFunction lift(std::span<const double> d) const;
  Vec multiply(std::span<const double> a, std::span<const double> b) const;

 private:
  friend CrossedProduct build_crossed(DynamicalSystem ds, RepClass reps);
  CrossedProduct(DynamicalSystem ds, RepClass reps, OrderedSpace space)
      : ds_(std::move(ds)), reps_(std::move(reps)), space_(std::move(space)) {}
  DynamicalSystem ds_;
  RepClass reps_;
  OrderedSpace space_;
  std::vector<Vec> kernel_;
  std::vector<std::size_t> basis_;
  Matrix projection_;
  std::vector<Matrix> table_;
  std::vector<std::vector<Matrix>> induced_;
  std::optional<Vec> identity_;
  bool identity_left_ = false;
  bool identity_right_ = false;
};

/// Needs a polyhedral cone on A.
CrossedProduct build_crossed(DynamicalSystem ds, RepClass reps);

double quotient_norm(const CrossedProduct& cp, std::span<const double> d);

/// The rep's integrated form carried to quotient coordinates.
Matrix induced_operator(const CrossedProduct& cp, std::size_t rep, std::span<const double> d);

/// Operators on the quotient: (i_A(a) f)(s) = a f(s), (i_G(r) f)(s) = alpha_r(f(r^{-1} s)).
Matrix i_a(const CrossedProduct& cp, std::span<const double> a);
Matrix i_g(const CrossedProduct& cp, std::size_t r);

/// Kernel invariance of the C_c level operators behind i_A(a) and i_G(r).
Certificate check_kernel_invariance(const CrossedProduct& cp);
/// Kernel is a two-sided ideal: k * f and f * k stay in the kernel.
Certificate check_ideal(const CrossedProduct& cp, std::size_t samples, std::uint64_t seed);
/// The quotient product does not depend on the chosen lifts.
Certificate check_well_defined(const CrossedProduct& cp);

struct OrderIdealReport {
  bool is_order_ideal = true;
  std::optional<Vec> witness;  // kernel element whose absolute value leaves the kernel
};

/// For coordinate lattices: is the kernel closed under f -> |f| ?
OrderIdealReport kernel_order_ideal(const CrossedProduct& cp);

CrossedConeReport crossed_cone_report(const CrossedProduct& cp, const EstimateOptions& opt = {});

}  // namespace owb
