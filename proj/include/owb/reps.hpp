#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "owb/cones.hpp"
#include "owb/dynsys.hpp"

namespace owb {

/// Pair (pi, U) on an ordered space: pi is given on the algebra basis, U on
/// the group elements.
struct CovariantRep {
  OrderedSpace space;
  std::vector<Matrix> pi;
  std::vector<Matrix> u;
  std::string label;

  std::size_t dim() const { return space.dim(); }
  Matrix pi_of(std::span<const double> a) const;
};

CovariantRep make_rep(OrderedSpace space, std::vector<Matrix> pi, std::vector<Matrix> u, std::string label = {});

/// Outcome of an exhaustive check; `witness` names the first failure.
struct Certificate {
  bool ok = true;
  Method method = Method::exact;
  std::string witness;

  explicit operator bool() const { return ok; }
};

Certificate check_shapes(const CovariantRep& r, const DynamicalSystem& ds);
Certificate check_pi_homomorphism(const CovariantRep& r, const DynamicalSystem& ds);
Certificate check_u_homomorphism(const CovariantRep& r, const DynamicalSystem& ds);
/// pi(alpha_s(a)) = U_s pi(a) U_s^{-1} on every (s, basis a).
Certificate check_covariant(const CovariantRep& r, const DynamicalSystem& ds);
/// pi of every cone generator and every U_s are positive.
Certificate check_positive(const CovariantRep& r, const DynamicalSystem& ds);
/// The ranges of pi(e_k) span the whole space.
Certificate check_nondegenerate(const CovariantRep& r);

/// All of the above.
Certificate certify(const CovariantRep& r, const DynamicalSystem& ds);

/// sum_s pi(f(s)) U_s.
Matrix integrated_form(const CovariantRep& r, const CcFunction& f);

/// Matrix sending the flat coordinates of f to the row-major entries of
/// integrated_form(r, f).
Matrix integrated_form_matrix(const CovariantRep& r, const DynamicalSystem& ds);

/// sup over the unit ball of A of |pi(a)|; exact for polyhedral norms.
Tagged pi_norm(const CovariantRep& r, const DynamicalSystem& ds);
/// |U_s| per group element.
Vec nu(const CovariantRep& r);

class RepClass {
 public:
  RepClass(const DynamicalSystem& ds, std::vector<CovariantRep> reps);

  const std::vector<CovariantRep>& reps() const { return reps_; }
  std::size_t size() const { return reps_.size(); }
  const CovariantRep& operator[](std::size_t i) const { return reps_[i]; }
  /// max over reps of |pi|.
  double c() const { return c_; }
  /// max over reps of |U_s|.
  const Vec& nu() const { return nu_; }

 private:
  std::vector<CovariantRep> reps_;
  double c_ = 0.0;
  Vec nu_;
};

double sigma_r(const RepClass& r, const CcFunction& f);

/// Block-diagonal rep on the l^p sum with the product cone.
CovariantRep direct_sum(const RepClass& s, SumExponent p);

namespace reps {
/// A acting on itself by left multiplication, G by the action.
CovariantRep left_regular(const DynamicalSystem& ds);
/// [pi~(a)h](s) = pi(alpha_s^{-1}(a)) h(s) and (Lambda_r h)(s) = h(r^{-1}s)
/// on the weighted l^1 sum of copies of `base` (weights default to 1).
CovariantRep induced(const DynamicalSystem& ds, const OrderedSpace& base, const std::vector<Matrix>& base_pi,
                     const Vec& weights = {});
/// induced() over the left regular representation of A.
CovariantRep induced_regular(const DynamicalSystem& ds, const Vec& weights = {});
/// (D pi D^{-1}, D U D^{-1}) for a positive diagonal D on a standard cone.
CovariantRep conjugate_diagonal(const CovariantRep& r, const Vec& diagonal);
}  // namespace reps

}  // namespace owb
