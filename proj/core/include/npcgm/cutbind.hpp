#pragma once

#include <npcgm/cube.hpp>
#include <npcgm/surface_model.hpp>

#include <array>
#include <cstddef>
#include <vector>

namespace npcgm {

// Pants decomposition subordinate to the gluing curves. Every piece is
// chopped into pairs of pants by curves added inside it, and every curve of
// the resulting system carries a homology class that survives the twist
// action. Gluing curves come first, in edge order; added curves follow in
// the order the chaining produces them.

struct PantsSlot {
  std::size_t curve = no_cell;
  int sign = 0;  // orientation the slot induces on the curve's reference class
};

struct Pants {
  std::size_t vertex = no_cell;  // piece the pants lives in
  std::array<PantsSlot, 3> slot;
};

struct CutCurve {
  IntVec cls;                    // reference class in the model basis
  std::size_t edge = no_cell;    // gluing edge, or no_cell for added curves
  std::size_t vertex = no_cell;  // carrying piece, for added curves only
  struct Side {
    std::size_t pants = no_cell;
    int slot = -1;
  };
  std::array<Side, 2> side;  // side[0] is the primary side
};

struct PantsDecomposition {
  std::vector<CutCurve> curves;
  std::vector<Pants> pants;
};

// Throws Error("SurvivalPreconditionFailed") when a gluing curve class dies
// under the twist action and Error("TemplateSearchExhausted") if no chaining
// step applies inside a piece; the latter cannot happen once the former has
// been checked and is kept as a guard.
PantsDecomposition pants_subordinate(const SurfaceModel& m, const ConfigGraph& g);

// Classes of the curves the chaining adds inside one piece. Skips the
// precondition on the gluing curves so single pieces of an infeasible system
// can still be inspected.
std::vector<IntVec> piece_curves(const SurfaceModel& m, const ConfigGraph& g,
                                 std::size_t v);

// An integral twist-invariant functional that is nonzero on every curve of
// the decomposition, together with the level data it induces: values per
// curve, the per-piece fiber values, the distinct levels t_1..t_{n+2} with
// their offsets, and for each piece the 1-based level it occupies.
struct XiData {
  IntVec xi;
  std::vector<Int> value;          // per curve, against the reference class
  std::vector<Int> fiber;          // per vertex
  std::vector<Int> t;              // offsets, one per level
  std::vector<std::size_t> index;  // per vertex, in 1..n+2
  std::size_t n = 0;               // t.size() == n + 2
};

// Throws Error("NoNondegenerateXi") when every invariant functional vanishes
// on some curve of the system.
XiData xi_select(const SurfaceModel& m, const ConfigGraph& g,
                 const PantsDecomposition& d);

// Arc counts for a pants with boundary values (m, m1, m2): the lone-signed
// boundary m meets |m1| arcs toward the first same-signed boundary and |m2|
// toward the second. Throws Error("BadTriple") unless the values are nonzero,
// m1 and m2 share a sign opposite to m, and the triple sums to zero.
struct ArcPattern {
  Int m, m1, m2;
  std::size_t p = 0, q = 0;  // |m1|, |m2|
  std::size_t bands() const { return p + q - 2; }
  std::size_t regions() const { return p + q - 1; }
};
ArcPattern pants_arc_pattern(const Int& m, const Int& m1, const Int& m2);

// Arc pattern of one assembled pants, tied to its slots: slot `lone` carries
// the lone-signed value, fam[0] and fam[1] the other two in stored order,
// with p arcs joining lone to fam[0] and q joining lone to fam[1].
struct PantsPattern {
  int lone = -1;
  std::array<int, 2> fam{-1, -1};
  std::size_t p = 0, q = 0;
};

// The assembled system: patterns for every pants and a matching shift per
// curve gluing the arc endpoints across it. Shifts are chosen so the bind
// curves represent the class dual to the functional; shift[c] is the stored
// representative mod the crossing count and shift_exact[c] the integer the
// class computation selected.
struct CutBindSystem {
  PantsDecomposition decomp;
  XiData xi;
  std::vector<PantsPattern> pattern;
  std::vector<std::size_t> shift;
  std::vector<Int> shift_exact;
  IntVec w_class;
};

// Throws Error("ShiftSearchFailed") if the shift equations cannot be solved
// or the rebuilt system fails its own verification; neither is expected to
// occur for a decomposition that passed its preconditions.
CutBindSystem assemble_cut_bind(const SurfaceModel& m, const ConfigGraph& g,
                                PantsDecomposition d, XiData x);

// Square complex of the cut and bind curves on the glued surface: one vertex
// per complementary region, cut edges dual to the cut curves, bind edges
// dual to the bind arcs, one square per crossing.
enum class SurfaceEdgeKind { Cut, Bind };

struct SurfaceComplex {
  CubeComplex complex;
  std::vector<SurfaceEdgeKind> edge_kind;  // per edge
  std::vector<std::size_t> edge_curve;     // cut: curve id; bind: strand id
  std::vector<std::size_t> vertex_pants;   // per vertex
  std::vector<std::size_t> vertex_region;  // per vertex, local region id
  std::vector<std::size_t> square_curve;   // per square, the crossed curve
  std::vector<EdgeTag> tags() const;
};

SurfaceComplex surface_square_complex(const CutBindSystem& s);

// Divisor data for the level-j cover, j in 1..n+2; anything else throws
// Error("IndexOutOfRange").
Int curve_divisibility(const ConfigGraph& g, const CutBindSystem& s,
                       std::size_t j, std::size_t curve);
Int pants_divisibility(const CutBindSystem& s, std::size_t j, std::size_t pants);
Int class_divisibility(const CutBindSystem& s, std::size_t j);
Int cover_level(const ConfigGraph& g, const CutBindSystem& s, std::size_t j);

}  // namespace npcgm
