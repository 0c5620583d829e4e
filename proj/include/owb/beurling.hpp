#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "owb/correspond.hpp"
#include "owb/crossed.hpp"

namespace owb {

/// Submultiplicative positive function on the group.
struct Weight {
  Vec values;
  /// Value at the identity; for a finite group this is the infimum over
  /// neighbourhoods of the identity of the supremum of the weight.
  double at_identity = 1.0;

  double operator()(std::size_t s) const { return values[s]; }
};

/// Exhaustive check of w(st) <= w(s) w(t); throws ValidationError naming the
/// first violating pair.
Weight validate_weight(const FiniteGroup& g, Vec values);

/// Weighted 1-space of A-valued functions with the twisted convolution.
class BeurlingAlgebra {
 public:
  const DynamicalSystem& system() const { return ds_; }
  const Weight& weight() const { return weight_; }
  /// Norm sum_s |f(s)|_A w(s) and the cone of pointwise positive functions.
  const OrderedSpace& carrier() const { return carrier_; }
  const NormedSpace& space() const { return carrier_.space; }
  double c_alpha() const { return ds_.c_alpha; }
  /// Lattice operations apply: A carries the standard cone.
  bool lattice() const { return ds_.algebra.cone().is_standard(); }

  double norm(const CcFunction& f) const { return vec_norm(f.coords, carrier_.space); }
  CcFunction multiply(const CcFunction& f, const CcFunction& g) const { return convolve(ds_, f, g); }
  /// delta_e (x) u for the unit u of A, when A is unital.
  std::optional<CcFunction> identity() const;

 private:
  friend BeurlingAlgebra build_beurling(DynamicalSystem ds, Weight w);
  BeurlingAlgebra(DynamicalSystem ds, Weight w, OrderedSpace carrier)
      : ds_(std::move(ds)), weight_(std::move(w)), carrier_(std::move(carrier)) {}
  DynamicalSystem ds_;
  Weight weight_;
  OrderedSpace carrier_;
};

BeurlingAlgebra build_beurling(DynamicalSystem ds, Weight w);

/// Worst ratio |f*g| / (C_alpha |f||g|) over random pairs.
Tagged submultiplicativity(const BeurlingAlgebra& ba, std::size_t samples, std::uint64_t seed);

/// The pair induced from the left regular representation of A, acting on
/// the Beurling space itself.  Throws when the left regular representation
/// is degenerate or some |Lambda_r| exceeds w(r).
CovariantRep lambda_tilde_Lambda(const BeurlingAlgebra& ba);

struct IsomorphismReport {
  std::size_t kernel_dim = 0;
  std::size_t quotient_dim = 0;
  Tagged lower;  // c1: c1 |f| <= sigma(f)
  Tagged upper;  // c2: sigma(f) <= c2 |f|
  bool crossed_cone_in_beurling = false;
  bool beurling_cone_in_crossed = false;
  bool isometric = false;
  bool isometric_predicted = false;
  std::vector<std::string> notes;

  bool cones_equal() const { return crossed_cone_in_beurling && beurling_cone_in_crossed; }
};

/// Compares the Beurling norm and cone with the crossed product built from
/// {lambda_tilde_Lambda}.  Needs a right identity in A.
IsomorphismReport beurling_vs_crossed(const BeurlingAlgebra& ba);

struct BoundsCase {
  std::string label;
  Tagged t_norm;        // |T| on the Beurling space
  double c_u = 0.0;     // max_r |U_r| / w(r)
  Tagged pi_norm;       // |pi|
  std::optional<Tagged> pi_t_norm;  // |pi^T|
  Vec u_t_norms;                    // |U^T_s|
  double identity_norm = 0.0;       // M = |u|
  std::vector<std::string> violations;
};

struct BoundsReport {
  std::vector<BoundsCase> cases;
  std::vector<std::string> notes;

  std::size_t violations() const;
};

/// The three representation bounds for each pair and its integrated form
/// T(f) = sum_r pi(f(r)) U_r on the Beurling space.
BoundsReport rep_bounds_check(const BeurlingAlgebra& ba, const std::vector<CovariantRep>& corpus);

/// Coordinatewise lattice operations; throw std::invalid_argument unless A
/// carries the standard cone.
CcFunction lattice_sup(const BeurlingAlgebra& ba, const CcFunction& f, const CcFunction& g);
CcFunction lattice_inf(const BeurlingAlgebra& ba, const CcFunction& f, const CcFunction& g);
CcFunction lattice_abs(const BeurlingAlgebra& ba, const CcFunction& f);

struct LatticeReport {
  std::size_t samples = 0;
  std::size_t norm_violations = 0;     // |f| <= |g| but |f| norm larger
  std::size_t identity_violations = 0; // f v (-f) != |f|
  std::size_t product_violations = 0;  // |f*g| <= |f|*|g| fails
  bool lattice_algebra = false;        // alpha acts by bipositive isometries
  std::vector<std::string> witnesses;

  std::size_t violations() const { return norm_violations + identity_violations + product_violations; }
};

LatticeReport lattice_report(const BeurlingAlgebra& ba, std::size_t samples, std::uint64_t seed);

struct ClassicalReport {
  Tagged t_norm;          // |T^U| on the weighted l^1 space
  double formula = 0.0;   // sup_r |U_r| / w(r)
  bool formula_matches = false;
  bool positive = false;
  bool nondegenerate = false;
  bool multiplicative = false;
  double roundtrip = 0.0;  // max deviation of T(delta_s) from U_s
};

/// Scalar algebra specialization: T^U(f) = sum_r f(r) U_r on l^1(G, w).
ClassicalReport classical_corollary(const FiniteGroup& g, const Weight& w, const OrderedSpace& x,
                                    const std::vector<Matrix>& u);

}  // namespace owb
