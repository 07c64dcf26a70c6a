#pragma once

#include <npcgm/cube.hpp>
#include <npcgm/cutbind.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace npcgm {

// Nonpositively curved cubulation of the mapping torus, one piece per
// configuration vertex. Each piece is presented as a finite voltage complex:
// the surface cells of the piece extended by n+1 formal fiber directions,
// with a translation voltage on every directed edge. The glued total complex
// materializes when every piece's translation group is finite, which happens
// exactly when the system has no free levels (n == 0).

struct VoltageComplex {
  std::size_t vertex = no_cell;  // configuration vertex of the piece
  std::size_t index = 0;         // vertical level i(v), 1-based

  // Base cells: one vertex per region of the piece, the piece's bind and
  // internal cut edges, n+1 fiber loops per region, and the commutation
  // squares of the product structure.
  CubeComplex base;
  std::vector<std::size_t> base_region;  // base vertex -> surface-complex vertex

  struct EdgeOrigin {
    enum Kind { Bind, Cut, Fiber } kind;
    std::size_t cell;       // surface-complex edge, or region vertex for Fiber
    std::size_t direction;  // fiber coordinate, Fiber only
  };
  std::vector<EdgeOrigin> edge_origin;  // parallel to base.edges
  std::vector<IntVec> voltage;          // parallel; length n+1 each

  // Translation group Z^{n+1}/L. L is generated by the rows of `lattice`:
  // the single vector by which the piece's fiber class translates the
  // coordinates transverse to its own level.
  IntMat lattice{0, 0};
  Smith lattice_smith;
  bool finite = false;
  Int order = 0;  // |Z^{n+1}/L| when finite

  // Per level j: gcd of the level functional over the piece's pants, the
  // holonomy divisor governing how far level-j data spreads in the piece.
  std::vector<Int> level_divisor;  // indexed 1..n+2 by level, [0] unused
};

VoltageComplex build_piece(const CutBindSystem& s, const SurfaceComplex& sc,
                           std::size_t vertex);

// Reference choices for the glued complex: the root region of the global
// spanning tree and, per curve, which primary segment anchors the collar.
// Different choices produce combinatorially isomorphic complexes.
struct GaugeChoice {
  std::size_t root = 0;
  std::vector<std::size_t> anchor;  // per curve; empty means all zero
};

struct GluedComplex {
  // Defining data, carried so census and cover passes need nothing else.
  // Covers keep the base system; degree_over_base says how far up they sit.
  CutBindSystem system;
  SurfaceComplex surface;

  std::vector<VoltageComplex> pieces;
  bool materialized = false;  // every piece group finite
  Int fiber_order = 0;        // common |A_v| when materialized

  // Total complex and cell provenance, materialized only.
  CubeComplex complex;
  struct VertexInfo {
    std::size_t region = no_cell;  // surface-complex vertex
    Int height = 0;                // gauge-relative level
  };
  enum class EdgeKind { Cut, Bind, Fiber };
  struct EdgeInfo {
    EdgeKind kind;
    std::size_t index;  // curve for Cut, hyperplane level j for Bind/Fiber
    std::size_t cell;   // surface edge for Cut/Bind, region for Fiber
    Int level;          // gauge-relative level of the tail
  };
  std::vector<VertexInfo> vertex_info;
  std::vector<EdgeInfo> edge_info;
  std::vector<EdgeTag> tags;  // cut/bind stamps for the cube engine

  // Reference data the construction used.
  std::size_t gauge_root = 0;
  std::vector<IntVec> gauge_height;      // per region, length n+1
  std::vector<std::size_t> anchor_edge;  // per curve: anchoring surface cut edge

  std::size_t degree_over_base = 1;
  std::string stage = "base";
};

// Glues the pieces along the collar of every curve, matching the reference
// lift of the cut-bind surface. Throws Error("BoundaryMismatch") when the
// two sides of a curve disagree (a cut-bind assembly bug), and materializes
// the total complex when all piece groups are finite.
GluedComplex glue_canonical(const CutBindSystem& s, const SurfaceComplex& sc,
                            std::vector<VoltageComplex> pieces,
                            const GaugeChoice* gauge = nullptr);

// Hyperplane bookkeeping. Cut hyperplanes biject with the curves; bind
// hyperplanes carry a single level index j, vertical over pants at level j
// and horizontal elsewhere. Counts are checked against the divisor formulas
// and any disagreement throws Error("CensusMismatch").
struct HyperplaneCensus {
  struct CutRow {
    std::size_t curve = no_cell;
    std::size_t hyperplane = no_cell;  // engine id, materialized only
  };
  struct PantsRow {
    std::size_t pants = no_cell;
    std::size_t index = 0;  // level j
    bool vertical = false;
    Int expected = 0;  // arcs of the pants, or the pants divisor div(xi^j_P)
    Int found = 0;
    // Horizontal rows: per adjacent curve side, components of one local
    // piece's boundary trace on that side, div(xi^j_z)/div(xi^j_P).
    std::vector<std::pair<std::size_t, Int>> boundary;
  };
  std::vector<CutRow> cut;
  std::vector<PantsRow> rows;
  std::size_t bind_components = 0;  // global bind hyperplanes, materialized
  bool duality_checked = false;     // bind(j) family crossed against xi^j
};

HyperplaneCensus hyperplane_census(const GluedComplex& x);

// The decomposition graph and the per-hyperplane maps into it. Vertices of
// the graph are pants, edges are curves. For each bind hyperplane H the
// graph of its local pieces maps into it; the map classifies as an
// embedding, an immersion that is not an embedding, or not an immersion.
struct DecompositionGraphMap {
  struct Graph {
    std::size_t vertices = 0;
    std::vector<std::size_t> vertex_label;  // pants under each vertex
    struct Edge {
      std::size_t ends[2];  // ends[0] over the primary side of the curve
      std::size_t label;    // curve under the edge
    };
    std::vector<Edge> edges;
  };
  // On the base: vertex k = pants k and edge m = curve m. On a cover the
  // vertices are pants lifts and the edges collar components, labelled by
  // the cells they cover.
  Graph upsilon;

  enum class Class { Embedding, ImmersionOnly, NotImmersion };
  struct HyperplaneMap {
    std::size_t index = 0;             // level j
    std::size_t hyperplane = no_cell;  // engine id, materialized only
    struct Node {
      std::size_t pants = no_cell;
      bool vertical = false;
      std::size_t label = 0;  // arc for vertical pieces, level class otherwise
    };
    std::vector<Node> nodes;
    struct Link {
      std::size_t curve = no_cell;         // curve under the collar
      std::size_t upsilon_edge = no_cell;  // edge of `upsilon` it maps to
      std::size_t ends[2];                 // node ids, aligned with the edge
      Int count = 1;  // parallel collar components with these ends
    };
    std::vector<Link> links;
    Class cls = Class::Embedding;
  };
  std::vector<HyperplaneMap> maps;
};

DecompositionGraphMap decomposition_graphs(const GluedComplex& x);

// The three osculation pathologies of the base complex, plus the structural
// guarantees that always hold: every hyperplane two-sided, none crossing
// itself, and bind hyperplanes of distinct levels never osculating. On a
// non-materialized complex the witnesses are reported per translation orbit
// (vertex = region id, darts = surface-edge incidences).
struct PathologyReport {
  struct Osculation {
    std::size_t vertex = no_cell;
    Dart d1 = no_cell, d2 = no_cell;
    std::size_t h1 = no_cell, h2 = no_cell;
  };
  std::vector<Osculation> cut_self, bind_self, inter;
  bool two_sided = false;
  bool no_self_crossing = false;
  bool no_mixed_bind_contact = false;
  bool per_orbit = false;  // witnesses quantified over translation orbits
};

PathologyReport pathologies(const GluedComplex& x);

// Cyclic level-j cover: sheets Z_{l^j} with each edge permuting by its
// level-j weight, restricted to the component of the base vertex; the
// degree is l^j/div(xi^j). Post-checks back the covering lemmas: no cut
// self-osculation over pants at level j, and every level-j hyperplane map
// an immersion. Failures are construction bugs and throw.
GluedComplex cyclic_cover(const GluedComplex& x, std::size_t index);

struct TowerOptions {
  std::size_t budget = 1000000;  // cell cap before Error("TowerBlowup")
  int dim_cap = 3;               // clique cap for the target complex
};

struct TowerStage {
  std::string name;
  std::size_t degree = 1;  // over the base
  std::size_t vertices = 0, edges = 0, squares = 0, cubes = 0;
  std::size_t cut_self = 0, bind_self = 0, inter = 0;
};

struct Certificate {
  std::vector<TowerStage> stages;
  std::size_t degree = 1;  // final cover over the base
  HyperplaneCensus base_census;
  PathologyReport final_pathologies;
  SpecialnessReport final_special;
  bool special = false;
  std::string raag;          // right-angled presentation of the final complex
  std::string crossing_dot;  // crossing graph of the final complex
  CharMap char_map;
};

// Completes every level-j hyperplane map of every cyclic cover to a finite
// cover of the collapse graph (deterministic Stallings completion), passes
// to the normal core, pulls back, and fiber-products the levels over the
// base. The component of the base vertex must come out special; anything
// else throws Error("NotSpecialAfterTower"). Covers past the cell budget
// throw Error("TowerBlowup") with the sizes in the message.
Certificate lerf_tower_and_certify(const GluedComplex& base,
                                   const std::vector<GluedComplex>& cyclic,
                                   const TowerOptions& opt = {});

std::string certificate_to_json(const Certificate& c);

// Tag-respecting combinatorial isomorphism search between two materialized
// complexes, used to confirm gauge independence. Returns the vertex map
// when one exists.
std::optional<std::vector<std::size_t>> isomorphic(const GluedComplex& a,
                                                   const GluedComplex& b);

}  // namespace npcgm
