#pragma once

#include <npcgm/error.hpp>
#include <npcgm/rational.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace npcgm {

// An end-of-edge: edge index and side. Encoded as 2*edge + side so that the
// side-swapping involution is a single bit flip.
using End = std::size_t;

inline std::size_t edge_of(End d) { return d >> 1; }
inline int side_of(End d) { return static_cast<int>(d & 1); }
inline End bar(End d) { return d ^ 1; }
inline End make_end(std::size_t edge, int side) { return 2 * edge + static_cast<std::size_t>(side); }

struct Vertex {
  std::string id;
  Int chi;
};

struct Edge {
  std::string id;
  std::size_t v[2];  // endpoint vertex indices, side 0 and side 1
  Int b;             // twist multiplicity, never zero
};

// Decorated multicurve configuration graph. Vertices and edges are stored in
// lexicographic id order, so index order is the deterministic order used
// everywhere downstream.
struct ConfigGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<std::vector<End>> ends_at;  // per vertex, sorted by end encoding

  std::size_t vertex_of(End d) const { return edges[edge_of(d)].v[side_of(d)]; }
  const Int& b_of(End d) const { return edges[edge_of(d)].b; }
  std::size_t valence(std::size_t v) const { return ends_at[v].size(); }
  // χ = 2 - 2g - val, so g = (2 - χ - val) / 2.
  Int genus(std::size_t v) const {
    return (2 - vertices[v].chi - Int(valence(v))) / 2;
  }
  std::optional<std::size_t> vertex_index(const std::string& id) const;
  std::optional<std::size_t> edge_index(const std::string& id) const;
};

// Validates and assembles a graph from raw parsed data. Edge ends reference
// vertices by id. Throws ValidationError listing every violated invariant.
ConfigGraph make_graph(std::vector<Vertex> vertices,
                       std::vector<std::tuple<std::string, std::string, std::string, Int>> edges);

// k_v = sum of 1/b over the ends at v, one exact rational per vertex.
std::vector<Rat> charges(const ConfigGraph& g);

// Proper 2-coloring with the lexicographically first vertex colored +1, or
// nothing when the graph has an odd cycle.
std::optional<std::vector<int>> bicoloring(const ConfigGraph& g);

struct DirectedEdge {
  std::size_t edge;
  bool reversed;  // false: side 0 -> side 1
};

struct CycleBasis {
  std::vector<bool> in_tree;  // per edge; the tree is lexicographically greedy
  // One fundamental cycle per non-tree edge, in edge order. Each starts with
  // its non-tree edge traversed forward, followed by the tree path back.
  std::vector<std::vector<DirectedEdge>> cycles;
};

CycleBasis cycle_basis(const ConfigGraph& g);

struct DoubleCover {
  ConfigGraph cover;
  std::map<std::string, std::string> vertex_to_base;
  std::map<std::string, std::string> edge_to_base;
  bool already_bipartite = false;
};

// The double cover dual to the mod-2 cycle-count homomorphism. Lifted edges
// carry multiplicity 2b. For bipartite input the full cover is disconnected
// and one component is returned, flagged accordingly.
DoubleCover bipartite_double_cover(const ConfigGraph& g);

enum class AnosovClass { Anosov, NotAnosov };

// Classification of a 2x2 unimodular matrix; throws Error("NotUnimodular")
// when |det| != 1. Anosov means det = 1 and |trace| > 2.
AnosovClass anosov_classify(const Int m[2][2]);

std::string to_dot(const ConfigGraph& g);

}  // namespace npcgm
