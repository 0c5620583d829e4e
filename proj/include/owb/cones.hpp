#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "owb/linalg.hpp"

namespace owb {

inline constexpr double kTol = 1e-9;

/// Strength of a numeric claim.
enum class Method { exact, lower_bound, upper_bound, sampled };
std::string to_string(Method m);

struct Tagged {
  double value = 0.0;
  Method method = Method::exact;
  std::string note;
};

/// Facet description: x in C iff a.x >= 0 for all inequalities and e.x = 0
/// for all equalities.
struct HRep {
  std::vector<Vec> inequalities;
  std::vector<Vec> equalities;
};

/// Generators of {y : A y >= 0} as extreme rays plus a lineality basis.
struct RayDescription {
  std::vector<Vec> rays;
  std::vector<Vec> lineality;
};

RayDescription double_description(const Matrix& constraints);

class Cone {
 public:
  static Cone polyhedral(std::vector<Vec> generators, std::size_t dim);
  static Cone standard(std::size_t dim);
  /// {x : <v,x> >= |x - <v,x> v|_2} for a unit axis v.
  static Cone lorentz(Vec axis);

  std::size_t dim() const { return dim_; }
  bool is_lorentz() const { return lorentz_; }
  bool is_standard() const { return standard_; }
  const std::vector<Vec>& generators() const;
  const Vec& axis() const;
  /// Generator matrix (dim x count).
  Matrix generator_matrix() const;
  /// Facet description, computed once and shared by copies.
  const HRep& facets() const;

 private:
  struct FacetCache;
  Cone() = default;
  std::size_t dim_ = 0;
  bool lorentz_ = false;
  bool standard_ = false;
  std::vector<Vec> generators_;
  Vec axis_;
  std::shared_ptr<FacetCache> cache_;
};

struct OrderedSpace {
  NormedSpace space;
  Cone cone;

  OrderedSpace(NormedSpace s, Cone c);
  std::size_t dim() const { return space.dim; }
};

bool cone_contains(const Cone& c, std::span<const double> x, double tol = kTol);
bool facets_contain(const HRep& h, std::span<const double> x, double tol = kTol);
bool is_proper(const Cone& c);
bool is_generating(const Cone& c);
/// Standard cone with a norm that is monotone in coordinate absolute values.
bool is_banach_lattice(const OrderedSpace& os);
/// Dimension of C ∩ -C.
std::size_t lineality_dim(const Cone& c);

/// Cone generated by the images of the generators under q (zero images dropped).
Cone image_cone(const Cone& c, const Matrix& q);
/// Product cone on the concatenated coordinates (polyhedral factors only).
Cone product_cone(std::span<const Cone> factors);

/// Random element of the cone (nonnegative generator combination, or a
/// Lorentz member).
Vec random_member(const Cone& c, std::mt19937_64& rng);

struct Decomposition {
  Vec positive;
  Vec negative;
  double value = 0.0;
  Method method = Method::exact;
};

/// x = x+ - x- with x+- in the cone and |x+| + |x-| minimal.
Decomposition ando_decompose(std::span<const double> x, const OrderedSpace& os);

enum class NormalityMode { normal, absolute, abs_conormal, sum_conormal };
std::string to_string(NormalityMode m);

struct EstimateOptions {
  std::size_t samples = 400;
  std::uint64_t seed = 7;
  /// Largest number of linear programs an exact route may spend.
  std::size_t lp_budget = 4096;
};

Tagged normality_constant(const OrderedSpace& os, NormalityMode mode, const EstimateOptions& opt = {});

struct PositivityResult {
  bool positive = true;
  Method method = Method::exact;
  std::optional<std::size_t> failing_generator;
};

PositivityResult operator_positive(const Matrix& t, const OrderedSpace& from, const OrderedSpace& to);

struct ConeReport {
  bool proper = false;
  bool generating = false;
  std::optional<Tagged> normality;
  std::optional<Tagged> abs_normality;
  std::optional<Tagged> abs_conormality;
  std::optional<Tagged> sum_conormality;
  std::vector<std::string> notes;
};

ConeReport cone_report(const OrderedSpace& os, const EstimateOptions& opt = {});

/// Random positive operator X -> Y built from rank-one positive pieces.
Matrix random_positive_operator(const OrderedSpace& x, const OrderedSpace& y, std::mt19937_64& rng);

struct TransferReport {
  Tagged alpha_abs;    // absolute conormality of X
  Tagged beta_abs;     // absolute normality of Y
  Tagged alpha_sum;    // sum conormality of X
  Tagged beta_normal;  // normality of Y
  std::size_t samples = 0;
  std::size_t abs_violations = 0;
  std::size_t normal_violations = 0;
  double worst_abs_slack = 0.0;  // max of |T| - ab|S| seen
  bool operator_cone_proper = false;
  bool properness_predicted = false;  // X generating and Y proper
  std::vector<std::string> witnesses;
};

struct TransferOverrides {
  std::optional<Tagged> alpha_abs, beta_abs, alpha_sum, beta_normal;
};

TransferReport verify_normality_transfer(const OrderedSpace& x, const OrderedSpace& y, std::size_t samples,
                                         std::uint64_t seed, const TransferOverrides& overrides = {});

}  // namespace owb
