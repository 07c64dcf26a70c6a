#pragma once

#include <npcgm/config_graph.hpp>

#include <string>
#include <tuple>
#include <vector>

// Shared small graphs used across the test binaries.
namespace fixtures {

using npcgm::ConfigGraph;
using npcgm::Int;

inline ConfigGraph build(std::vector<std::pair<std::string, long>> vs,
                         std::vector<std::tuple<std::string, std::string, std::string, long>> es) {
  std::vector<npcgm::Vertex> vertices;
  for (auto& [id, chi] : vs) vertices.push_back({id, Int(chi)});
  std::vector<std::tuple<std::string, std::string, std::string, Int>> edges;
  for (auto& [id, a, b, w] : es) edges.emplace_back(id, a, b, Int(w));
  return npcgm::make_graph(std::move(vertices), std::move(edges));
}

// Two pairs of pants glued along three curves, twists (2, -3, -6).
// Both charges vanish; the current equations have a nondegenerate solution.
inline ConfigGraph pants_pair() {
  return build({{"u", -1}, {"w", -1}},
               {{"e1", "u", "w", 2}, {"e2", "u", "w", -3}, {"e3", "u", "w", -6}});
}

// Same underlying graph, all twists equal; infeasible current equations.
inline ConfigGraph pants_pair_b(long b1, long b2, long b3) {
  return build({{"u", -1}, {"w", -1}},
               {{"e1", "u", "w", b1}, {"e2", "u", "w", b2}, {"e3", "u", "w", b3}});
}

// Four twice-punctured tori in a cycle, twists (1, 2, -1, -2).
inline ConfigGraph four_cycle() {
  return build({{"v1", -2}, {"v2", -2}, {"v3", -2}, {"v4", -2}},
               {{"e1", "v1", "v2", 1},
                {"e2", "v2", "v3", 2},
                {"e3", "v3", "v4", -1},
                {"e4", "v4", "v1", -2}});
}

// Two four-holed spheres glued along four curves.
inline ConfigGraph quad_pair(long b1, long b2, long b3, long b4) {
  return build({{"u", -2}, {"w", -2}},
               {{"e1", "u", "w", b1},
                {"e2", "u", "w", b2},
                {"e3", "u", "w", b3},
                {"e4", "u", "w", b4}});
}

inline ConfigGraph triangle() {
  return build({{"p", -2}, {"q", -2}, {"r", -2}},
               {{"e1", "p", "q", 1}, {"e2", "q", "r", 1}, {"e3", "p", "r", 1}});
}

// One separating curve between two genus-one pieces.
inline ConfigGraph separating_edge() {
  return build({{"u", -1}, {"w", -1}}, {{"e1", "u", "w", 1}});
}

}  // namespace fixtures
