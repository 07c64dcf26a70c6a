#pragma once

#include <npcgm/error.hpp>

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace npcgm {

inline constexpr std::size_t no_cell = static_cast<std::size_t>(-1);

// How a facet of a 3-cell lands on a square: facet axis p goes to square axis
// axis[p], running backwards when flip[p] is set.
struct SquareMap {
  std::array<int, 2> axis{0, 1};
  std::array<bool, 2> flip{false, false};
};

// Facets of an n-cell are indexed 2*axis + side: the face where the given
// coordinate is pinned to -1 (side 0) or +1 (side 1). A facet keeps the
// cell's remaining coordinates in increasing axis order.
inline constexpr std::size_t facet(int axis, int side) {
  return 2 * static_cast<std::size_t>(axis) + static_cast<std::size_t>(side);
}

// Finite cube complex of dimension at most three. Cells attach downward one
// dimension at a time: every facet is identified with a whole cell one
// dimension lower, twisted by a symmetry of the facet. Degenerate gluings
// (several facets of a cell on one target) are legal; that is how one-vertex
// complexes arise.
struct CubeComplex {
  struct EdgeCell {
    std::size_t ends[2];  // tail (side 0) and head (side 1)
  };
  struct SquareCell {
    std::array<std::size_t, 4> side;  // edge along each facet
    std::array<bool, 4> rev;          // facet coordinate runs against the edge
  };
  struct CubeCell {
    std::array<std::size_t, 6> face;  // square along each facet
    std::array<SquareMap, 6> map;
  };

  std::size_t vertices = 0;
  std::vector<EdgeCell> edges;
  std::vector<SquareCell> squares;
  std::vector<CubeCell> cubes;

  std::size_t add_vertex() { return vertices++; }
  std::size_t add_edge(std::size_t tail, std::size_t head) {
    edges.push_back({{tail, head}});
    return edges.size() - 1;
  }
  std::size_t add_square(std::array<std::size_t, 4> side, std::array<bool, 4> rev = {}) {
    squares.push_back({side, rev});
    return squares.size() - 1;
  }
  std::size_t add_cube(std::array<std::size_t, 6> face, std::array<SquareMap, 6> map = {}) {
    cubes.push_back({face, map});
    return cubes.size() - 1;
  }

  std::size_t cell_count(int dim) const;
  int dimension() const;
  long long euler() const;
};

// A dart is an end of an edge, encoded 2*edge + end so the two darts of an
// edge differ in the low bit.
using Dart = std::size_t;

inline Dart make_dart(std::size_t edge, int end) {
  return 2 * edge + static_cast<std::size_t>(end);
}
inline std::size_t dart_edge(Dart d) { return d >> 1; }
inline int dart_end(Dart d) { return static_cast<int>(d & 1); }
inline Dart dart_mate(Dart d) { return d ^ 1; }

// Derived incidence data. Corners are bitmasks with bit i the side along axis
// i. Each query resolves through the lowest pinned axis; validate() is the
// place where all routes are compared.
std::size_t square_corner_vertex(const CubeComplex& x, std::size_t q, int corner);
std::size_t cube_corner_vertex(const CubeComplex& x, std::size_t c, int corner);
// The edge cell under the 3-cell edge running along `axis` with the other two
// coordinates pinned (bit 0 of `pinned` is the lower remaining axis). The
// flag is set when the cell coordinate runs against the edge.
std::pair<std::size_t, bool> cube_edge(const CubeComplex& x, std::size_t c, int axis, int pinned);

// Link of a vertex: a link vertex per dart arriving at the vertex, a link
// edge per square corner there, a link triangle per 3-cell corner.
struct LinkComplex {
  std::size_t vertex = 0;
  std::vector<Dart> darts;  // sorted; link vertex i is darts[i]

  struct LinkEdge {
    std::array<std::size_t, 2> v;  // indices into darts, v[0] <= v[1]
    std::size_t square;
    int corner;
  };
  struct LinkTriangle {
    std::array<std::size_t, 3> v;  // indices into darts, ascending
    std::size_t cube;
    int corner;
  };
  std::vector<LinkEdge> edges;
  std::vector<LinkTriangle> triangles;

  std::size_t dart_index(Dart d) const;  // no_cell when absent
  bool joined(std::size_t a, std::size_t b) const;
};

LinkComplex link(const CubeComplex& x, std::size_t v);
std::vector<LinkComplex> all_links(const CubeComplex& x);

// Re-derives every corner along all descent routes and reports
// disagreements, plus links that fail to be simplicial. The latter is a
// finding, not a failure: detecting non-simple complexes is part of the job.
// Issue kinds: "BadAttachment", "NonSimplicialLink".
struct ValidationReport {
  bool attachments_ok = true;
  bool simple = true;
  std::vector<Violation> issues;
};
ValidationReport validate(const CubeComplex& x);

// simple: every link is a simplicial complex (for squares: no link cycle of
// one or two edges). flag: additionally every pairwise-joined set of link
// vertices spans a simplex of the link.
struct CubeFlags {
  bool simple = false;
  bool flag = false;
};
CubeFlags flags(const CubeComplex& x);

struct Midcube {
  int dim;  // dimension of the carrying cell, 1 to 3
  std::size_t cell;
  int axis;  // transverse coordinate

  friend bool operator==(const Midcube& a, const Midcube& b) {
    return a.dim == b.dim && a.cell == b.cell && a.axis == b.axis;
  }
};

struct HyperplaneTag {
  enum Kind { Untyped, Cut, Bind };
  Kind kind = Untyped;
  int index = -1;  // bind family index, meaningful for Bind only
};

// Connected component of the midcube complex. Orientations transverse to the
// midcubes either glue consistently (two-sided, and positive_end records the
// end of each dual edge on the positive side) or do not (one-sided).
struct Hyperplane {
  std::vector<Midcube> midcubes;        // sorted by (dim, cell, axis)
  std::vector<std::size_t> dual_edges;  // sorted; the edges this hyperplane crosses
  bool two_sided = false;
  std::vector<int> positive_end;  // parallel to dual_edges; meaningful when two-sided
  HyperplaneTag tag;

  // Side the dart's vertex lies on, 0 or 1. Requires two-sided and a dual dart.
  int side_of(Dart d) const;
};

struct Hyperplanes {
  std::vector<Hyperplane> all;
  std::vector<std::size_t> of_edge;  // each edge is dual to exactly one hyperplane
};
Hyperplanes hyperplanes(const CubeComplex& x);

// One defect of specialness, with enough location data to re-check it against
// the raw complex: the hyperplanes involved, and the square or the vertex
// with the pair of darts where the defect sits.
struct Witness {
  enum Kind {
    OneSided,          // h1
    SelfIntersection,  // h1 crosses itself in `square`
    SelfOsculation,    // darts d1, d2 of h1 at `vertex`, same side, no common corner
    InterOsculation,   // h1, h2 cross in `square` and meet at `vertex` with no common corner
  };
  Kind kind;
  std::size_t h1 = no_cell, h2 = no_cell;
  std::size_t square = no_cell;
  std::size_t vertex = no_cell;
  Dart d1 = no_cell, d2 = no_cell;
};

struct SpecialnessReport {
  bool special = false;
  std::vector<Witness> witnesses;
};
SpecialnessReport specialness(const CubeComplex& x);
SpecialnessReport specialness(const CubeComplex& x, const Hyperplanes& hs);

// Simple graph on hyperplane indices, joined when two hyperplanes cross a
// common square. Doubles as the plain graph input of salvetti().
struct CrossingGraph {
  std::size_t nodes = 0;
  std::vector<std::array<std::size_t, 2>> edges;  // a < b, lexicographic
  std::vector<std::size_t> witness_square;        // parallel; no_cell for plain graphs

  bool adjacent(std::size_t a, std::size_t b) const;
};
CrossingGraph crossing_graph(const CubeComplex& x, const Hyperplanes& hs);

// One-vertex complex of the graph's right-angled presentation: a loop per
// node, a commutator square per edge, and a cell per clique filled up to
// dim_cap (dimension capped at three regardless).
CubeComplex salvetti(const CrossingGraph& g, int dim_cap = 3);

// Presentation text for the crossing graph's group.
std::string raag_presentation(const CrossingGraph& g);

// The canonical map onto the right-angled complex of the crossing graph:
// every edge wraps its hyperplane's loop, positively across the hyperplane.
// local_isometry holds when every link maps in by an embedding with full
// image (checked vertex by vertex; failures list every defect found).
struct CharMap {
  CrossingGraph gamma;
  CubeComplex target;  // salvetti(gamma, dim_cap)
  std::vector<std::size_t> edge_image;    // edge -> its hyperplane's loop
  std::vector<bool> edge_reversed;        // runs against the loop
  std::vector<std::size_t> square_image;  // square -> commutator square
  std::vector<std::size_t> cube_image;    // no_cell when the clique cell is over the cap
  bool local_isometry = false;
  std::vector<Violation> failures;
};
// Requires a SPECIAL verdict; throws Error("NotSpecial") otherwise.
CharMap raag_and_char_map(const CubeComplex& x, int dim_cap = 3);

// Degree-d cover given by one sheet permutation per edge: sheet k at the tail
// connects to sheet perm[k] at the head; traversal against the edge uses the
// inverse.
struct PermutationCover {
  std::size_t degree = 1;
  std::vector<std::vector<std::size_t>> edge_perm;  // [edge][sheet]
};
PermutationCover trivial_cover(const CubeComplex& x, std::size_t degree);
// Product action on sheet pairs (k1, k2) -> k1 * b.degree + k2.
PermutationCover tensor(const PermutationCover& a, const PermutationCover& b);

// Total space; cell id = base id * degree + sheet, sheet taken at the cell's
// all-zeros corner. Throws Error("RelatorViolation") when the permutations
// fail to close around a square or a 3-cell, Error("BadCover") on malformed
// permutation data.
struct Cover {
  CubeComplex total;
  std::size_t degree = 1;
};
Cover cover(const CubeComplex& x, const PermutationCover& pc);

inline std::size_t base_cell(std::size_t id, std::size_t degree) { return id / degree; }
inline std::size_t sheet_of(std::size_t id, std::size_t degree) { return id % degree; }

// Connected pieces with cells renumbered; the maps send new ids to old.
struct Piece {
  CubeComplex complex;
  std::vector<std::size_t> vertex_map, edge_map, square_map, cube_map;
};
std::vector<Piece> components(const CubeComplex& x);

// Common cover of two permutation covers of one base: the tensor cover split
// into connected pieces. piece_degree counts the sheets over base vertex 0.
struct FiberProduct {
  Cover product;
  std::vector<Piece> pieces;
  std::vector<std::size_t> piece_degree;
};
FiberProduct fiber_product(const CubeComplex& x, const PermutationCover& a,
                           const PermutationCover& b);

// JSON round trip for complexes, with hyperplane tags riding along keyed by a
// dual edge. Parsing throws Error("BadInput").
struct EdgeTag {
  std::size_t edge;
  HyperplaneTag tag;
};
std::string cube_to_json(const CubeComplex& x, const std::vector<EdgeTag>& tags = {});
struct CubeJson {
  CubeComplex complex;
  std::vector<EdgeTag> tags;
};
CubeJson cube_from_json(const std::string& text);
// Stamps each tag on the hyperplane dual to its edge. Conflicting stamps on
// one hyperplane throw Error("TagConflict").
void apply_tags(Hyperplanes& hs, const std::vector<EdgeTag>& tags);

// Graphviz text for a crossing graph; names defaults to H0, H1, ...
std::string to_dot(const CrossingGraph& g, const std::vector<std::string>& names = {});

}  // namespace npcgm
