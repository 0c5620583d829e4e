#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "owb/dynsys.hpp"
#include "owb/reps.hpp"

namespace owb {

struct CorpusOptions {
  std::size_t max_order = 6;
  std::size_t max_dim = 3;
  /// Allow left-projection algebras, which have left but no right identities.
  bool nonunital = true;
};

struct CorpusInstance {
  std::string label;
  DynamicalSystem system;
  /// Positive non-degenerate covariant pairs; the class R of the instance.
  std::vector<CovariantRep> reps;
  /// The algebra has a two-sided unit.
  bool unital = false;
};

/// Klein four-group, elements as bit pairs.
FiniteGroup klein_four();

/// Coordinate permutations of a disjoint union of coset spaces G/<h> with
/// `points` points in total; element g sends e_i to e_{perm[g][i]}.
std::vector<std::vector<std::size_t>> random_permutation_rep(const FiniteGroup& g, std::size_t points,
                                                             std::mt19937_64& rng);

CorpusInstance random_instance(std::mt19937_64& rng, const CorpusOptions& opt = {});

/// `count` instances drawn from one generator seeded with `seed`.
std::vector<CorpusInstance> make_corpus(std::uint64_t seed, std::size_t count, const CorpusOptions& opt = {});

}  // namespace owb
