#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "owb/crossed.hpp"

namespace owb {

/// Representation of the crossed product given on its quotient basis.
struct AlgebraRep {
  OrderedSpace space;
  std::vector<Matrix> images;

  std::size_t dim() const { return space.dim(); }
  Matrix of(std::span<const double> d) const;
};

/// Raised when an input misses one of the hypotheses of a correspondence map.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(std::string certificate, const std::string& detail);
  const std::string& certificate() const { return certificate_; }

 private:
  std::string certificate_;
};

enum class NormRoute { automatic, vertices, programs };

/// sup over the unit ball of `domain` of |sum_i d_i images_i| on `target`.
Tagged linear_map_norm(const std::vector<Matrix>& images, const NormedSpace& domain, const NormedSpace& target,
                       NormRoute route = NormRoute::automatic);

struct Continuity {
  bool continuous = false;
  Tagged constant;
  std::optional<Vec> witness;  // kernel element with nonzero image
};

/// ker sigma^R inside ker(pi x U), and the norm of the induced map.
Continuity r_continuity(const CrossedProduct& cp, const CovariantRep& r);

Certificate check_multiplicative(const CrossedProduct& cp, const AlgebraRep& t);
Certificate check_positive(const CrossedProduct& cp, const AlgebraRep& t);
Certificate check_nondegenerate(const AlgebraRep& t);

/// T(q(f)) = integrated form of r at f.
AlgebraRep forward(const CrossedProduct& cp, const CovariantRep& r);

/// pi(a) = T(q(delta_e (x) a u)) and U_s = T(q(delta_s (x) alpha_s(u))) for a
/// positive left identity u.
CovariantRep backward(const CrossedProduct& cp, const AlgebraRep& t);

double deviation(const CovariantRep& a, const CovariantRep& b);
double deviation(const AlgebraRep& a, const AlgebraRep& b);

/// max entrywise deviation of backward(forward(r)) from r.
double roundtrip(const CrossedProduct& cp, const CovariantRep& r);
/// max entrywise deviation of forward(backward(t)) from t.
double roundtrip(const CrossedProduct& cp, const AlgebraRep& t);

/// Random positive non-degenerate representation built from a positive rep.
AlgebraRep random_algebra_rep(const CrossedProduct& cp, std::mt19937_64& rng);

struct TripleReport {
  Certificate centralizers;      // i_A(a), i_G(s) are left centralizers
  Certificate regular_image;     // (i_A x i_G)(C_c) = lambda(E)
  Certificate dense_image;       // spans agree
  Certificate cone_image;        // image of C_c(G, A+) = lambda(E) cap positive operators
  Certificate bipositive_lambda; // lambda is a bipositive embedding
  std::vector<std::string> notes;

  bool all() const { return centralizers.ok && regular_image.ok && dense_image.ok && cone_image.ok; }
};

TripleReport verify_canonical_triple(const CrossedProduct& cp);

/// (T o i_A) x (T o i_G) = T o (i_A x i_G) on random functions.
Certificate check_composition_law(const CrossedProduct& cp, const AlgebraRep& t, std::size_t samples,
                                  std::uint64_t seed);

}  // namespace owb
