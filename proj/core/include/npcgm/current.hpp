#pragma once

#include <npcgm/config_graph.hpp>
#include <npcgm/linalg.hpp>

#include <variant>
#include <vector>

namespace npcgm {

// A symmetric solution of the transverse-measure equations: one rational per
// end, with opposite ends carrying opposite values, vanishing vertex sums,
// and vanishing weighted sums around cycles.
struct CurrentSolution {
  RatVec end_values;   // per end
  bool nondegenerate;  // no value is zero

  const Rat& at(End d) const { return end_values[d]; }
};

// Certifies infeasibility: the coordinate of this end vanishes on the whole
// symmetric solution space (spanned by the edge-variable basis below).
struct InfeasibilityWitness {
  End dead_end;
  std::vector<RatVec> space;  // basis in edge variables, one per edge
};

// Basis of the symmetric solution space in edge variables: each edge carries
// the value at its negative end (edges point toward positive vertices).
// Throws Error("NotBipartite") when no bicoloring exists.
std::vector<RatVec> solution_space(const ConfigGraph& g);

// Deterministic all-nonzero solution when one exists, otherwise the witness.
// The point is built greedily: starting from the first basis vector, add each
// later one scaled by the smallest positive integer that keeps every touched
// coordinate nonzero.
std::variant<CurrentSolution, InfeasibilityWitness> nondegenerate_point(const ConfigGraph& g);

// Agreement report between the two sides of the survival criterion: the
// per-edge coordinate functionals on the current solution space, and the
// per-edge curve classes in the mapping torus homology.
struct SurvivalCrosscheck {
  bool feasible;                       // nondegenerate current solution exists
  std::vector<bool> functional_alive;  // per edge: coordinate not identically zero
  std::vector<bool> class_survives;    // per edge: curve class survives
  bool agree;
};

SurvivalCrosscheck crosscheck_survival(const ConfigGraph& g);

}  // namespace npcgm
