#pragma once

#include <npcgm/config_graph.hpp>
#include <npcgm/linalg.hpp>
#include <npcgm/smith.hpp>

#include <vector>

namespace npcgm {

// Integral symplectic model of the first homology of the glued surface.
//
// Basis layout: for each vertex in order, its genus(v) handle pairs
// (a_i, b_i); then for each non-tree edge in order, the pair (z_e, c_e).
// The intersection form is the standard symplectic form of this layout, so
// the glued curves {z_e} span an isotropic family and every tree-edge curve
// class is the signed sum of non-tree classes crossing its tree cut.
struct SurfaceModel {
  std::size_t genus = 0;
  IntMat form;                            // 2g x 2g intersection form
  std::vector<IntVec> curve_class;        // per edge, in the basis above
  std::vector<int> eps;                   // per end: boundary orientation sign
  std::vector<std::size_t> handle_base;   // per vertex: first handle coordinate
  std::vector<std::size_t> z_index;       // per edge: z coordinate, or npos for tree edges
  CycleBasis cycles;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Int pair(const IntVec& x, const IntVec& y) const;  // I(x, y)
};

SurfaceModel build_model(const ConfigGraph& g);

// Dehn twist action on homology: alpha + power * I(cls, alpha) * cls.
IntMat twist_matrix(const IntMat& form, const IntVec& cls, const Int& power);

// Action of the multitwist: product of the per-edge twist powers. The factors
// commute because the curve family is isotropic.
IntMat sigma_star(const SurfaceModel& m, const ConfigGraph& g);

// Whether a class stays nonzero in the rational homology of the mapping
// torus, i.e. avoids the image of sigma_star - id.
bool survives(const SurfaceModel& m, const ConfigGraph& g, const RatVec& cls);

// Saturated integer basis of the functionals fixed by the multitwist action
// (row vectors with xi . sigma = xi).
std::vector<IntVec> invariant_functionals(const SurfaceModel& m, const ConfigGraph& g);

// Values of a functional on the curve classes, one per edge.
std::vector<Int> z_values(const SurfaceModel& m, const IntVec& xi);

// Vertical coordinates of the pieces: the functional's values on the fiber
// classes, normalized to 0 at the first vertex and propagated across edges by
// f(v(d)) - f(v(bar d)) = b_e * eps(bar d) * xi(z_e). Requires xi invariant
// and nonzero on every curve; throws Error("InconsistentCycle") otherwise.
std::vector<Int> fiber_values(const SurfaceModel& m, const ConfigGraph& g, const IntVec& xi);

}  // namespace npcgm
