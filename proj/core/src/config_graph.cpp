#include <npcgm/config_graph.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <numeric>
#include <sstream>
#include <tuple>

namespace npcgm {

std::optional<std::size_t> ConfigGraph::vertex_index(const std::string& id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> ConfigGraph::edge_index(const std::string& id) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].id == id) return i;
  return std::nullopt;
}

ConfigGraph make_graph(std::vector<Vertex> vertices,
                       std::vector<std::tuple<std::string, std::string, std::string, Int>> edges) {
  std::vector<Violation> bad;

  std::sort(vertices.begin(), vertices.end(),
            [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  std::sort(edges.begin(), edges.end(),
            [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });

  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    if (vertices[i].id == vertices[i + 1].id)
      bad.push_back({"DuplicateId", "vertex '" + vertices[i].id + "' appears twice"});
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (std::get<0>(edges[i]) == std::get<0>(edges[i + 1]))
      bad.push_back({"DuplicateId", "edge '" + std::get<0>(edges[i]) + "' appears twice"});

  ConfigGraph g;
  g.vertices = std::move(vertices);

  for (const auto& [id, end0, end1, b] : edges) {
    Edge e;
    e.id = id;
    e.b = b;
    bool resolved = true;
    for (int s = 0; s < 2; ++s) {
      const std::string& vid = s == 0 ? end0 : end1;
      auto idx = g.vertex_index(vid);
      if (!idx) {
        bad.push_back({"UnknownVertex", "edge '" + id + "' references vertex '" + vid + "'"});
        resolved = false;
      } else {
        e.v[s] = *idx;
      }
    }
    if (!resolved) continue;
    if (e.v[0] == e.v[1])
      bad.push_back({"SelfLoop", "edge '" + id + "' is a loop at '" + end0 + "'"});
    if (e.b == 0) bad.push_back({"ZeroMultiplicity", "edge '" + id + "' has b = 0"});
    g.edges.push_back(std::move(e));
  }

  if (g.edges.empty())
    bad.push_back({"EmptyCurveSystem", "a multitwist needs at least one curve"});

  g.ends_at.assign(g.vertices.size(), {});
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (int s = 0; s < 2; ++s) g.ends_at[g.edges[e].v[s]].push_back(make_end(e, s));
  for (auto& list : g.ends_at) std::sort(list.begin(), list.end());

  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].chi > -1)
      bad.push_back({"NonNegativeChi",
                     "vertex '" + g.vertices[v].id + "' has chi = " + g.vertices[v].chi.str()});
    Int two_genus = 2 - g.vertices[v].chi - Int(g.valence(v));
    if (two_genus % 2 != 0 || two_genus < 0)
      bad.push_back({"GenusParity", "vertex '" + g.vertices[v].id + "' needs genus " +
                                        Rat(Rat(two_genus) / 2).str() + ""});
  }

  if (!g.vertices.empty()) {
    std::vector<bool> seen(g.vertices.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (End d : g.ends_at[v]) {
        std::size_t w = g.vertex_of(bar(d));
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
      if (!seen[v]) {
        bad.push_back({"Disconnected", "vertex '" + g.vertices[v].id + "' is unreachable"});
        break;
      }
  } else {
    bad.push_back({"Disconnected", "no vertices"});
  }

  if (!bad.empty()) throw ValidationError(std::move(bad));
  return g;
}

std::vector<Rat> charges(const ConfigGraph& g) {
  std::vector<Rat> k(g.vertices.size());
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    for (End d : g.ends_at[v]) k[v] += Rat(1) / Rat(g.b_of(d));
  return k;
}

std::optional<std::vector<int>> bicoloring(const ConfigGraph& g) {
  std::vector<int> color(g.vertices.size(), 0);
  for (std::size_t start = 0; start < g.vertices.size(); ++start) {
    if (color[start] != 0) continue;
    color[start] = 1;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (End d : g.ends_at[v]) {
        std::size_t w = g.vertex_of(bar(d));
        if (color[w] == 0) {
          color[w] = -color[v];
          queue.push_back(w);
        } else if (color[w] == color[v]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

namespace {

std::size_t uf_find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

CycleBasis cycle_basis(const ConfigGraph& g) {
  CycleBasis basis;
  basis.in_tree.assign(g.edges.size(), false);

  std::vector<std::size_t> parent(g.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    std::size_t a = uf_find(parent, g.edges[e].v[0]);
    std::size_t b = uf_find(parent, g.edges[e].v[1]);
    if (a != b) {
      parent[a] = b;
      basis.in_tree[e] = true;
    }
  }

  // Root the tree at vertex 0 and record each vertex's depth and parent edge.
  std::vector<std::size_t> up_edge(g.vertices.size(), SIZE_MAX);
  std::vector<std::size_t> depth(g.vertices.size(), 0);
  std::vector<bool> seen(g.vertices.size(), false);
  if (!g.vertices.empty()) {
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (End d : g.ends_at[v]) {
        if (!basis.in_tree[edge_of(d)]) continue;
        std::size_t w = g.vertex_of(bar(d));
        if (seen[w]) continue;
        seen[w] = true;
        up_edge[w] = edge_of(d);
        depth[w] = depth[v] + 1;
        queue.push_back(w);
      }
    }
  }

  auto step_up = [&](std::size_t v, std::vector<DirectedEdge>& out, bool toward_root) {
    std::size_t e = up_edge[v];
    bool from_side1 = g.edges[e].v[1] == v;
    // Walking v -> parent(v) traverses the edge out of v's side.
    out.push_back({e, toward_root ? from_side1 : !from_side1});
    return g.edges[e].v[from_side1 ? 0 : 1];
  };

  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (basis.in_tree[e]) continue;
    std::vector<DirectedEdge> cycle{{e, false}};
    // Tree path from v[1] back to v[0]: climb both endpoints to their
    // common ancestor, then reverse the v[0]-side climb.
    std::size_t a = g.edges[e].v[1];
    std::size_t b = g.edges[e].v[0];
    std::vector<DirectedEdge> down;
    while (depth[a] > depth[b]) a = step_up(a, cycle, true);
    while (depth[b] > depth[a]) b = step_up(b, down, false);
    while (a != b) {
      a = step_up(a, cycle, true);
      b = step_up(b, down, false);
    }
    cycle.insert(cycle.end(), down.rbegin(), down.rend());
    basis.cycles.push_back(std::move(cycle));
  }
  return basis;
}

DoubleCover bipartite_double_cover(const ConfigGraph& g) {
  DoubleCover out;
  out.already_bipartite = bicoloring(g).has_value();

  // Full cover: two sheets, edges cross sheets. For bipartite input it has
  // two components; keep the one containing sheet 0 of the first vertex.
  std::vector<Vertex> vs;
  std::vector<std::tuple<std::string, std::string, std::string, Int>> es;
  auto lift_v = [&](std::size_t v, int sheet) {
    return g.vertices[v].id + "." + std::to_string(sheet);
  };

  std::vector<std::array<bool, 2>> keep(g.vertices.size(), {false, false});
  std::deque<std::pair<std::size_t, int>> queue{{0, 0}};
  keep[0][0] = true;
  while (!queue.empty()) {
    auto [v, sheet] = queue.front();
    queue.pop_front();
    for (End d : g.ends_at[v]) {
      std::size_t w = g.vertex_of(bar(d));
      int other = 1 - sheet;
      if (!keep[w][other]) {
        keep[w][other] = true;
        queue.push_back({w, other});
      }
    }
  }

  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    for (int sheet = 0; sheet < 2; ++sheet) {
      if (!keep[v][sheet]) continue;
      vs.push_back({lift_v(v, sheet), g.vertices[v].chi});
      out.vertex_to_base[lift_v(v, sheet)] = g.vertices[v].id;
    }
  for (const auto& e : g.edges)
    for (int sheet = 0; sheet < 2; ++sheet) {
      if (!keep[e.v[0]][sheet]) continue;
      std::string id = e.id + "." + std::to_string(sheet);
      es.emplace_back(id, lift_v(e.v[0], sheet), lift_v(e.v[1], 1 - sheet), 2 * e.b);
      out.edge_to_base[id] = e.id;
    }

  out.cover = make_graph(std::move(vs), std::move(es));
  return out;
}

AnosovClass anosov_classify(const Int m[2][2]) {
  Int det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (det != 1 && det != -1)
    throw Error("NotUnimodular", "determinant is " + det.str());
  Int trace = m[0][0] + m[1][1];
  return (det == 1 && iabs(trace) > 2) ? AnosovClass::Anosov : AnosovClass::NotAnosov;
}

std::string to_dot(const ConfigGraph& g) {
  std::ostringstream dot;
  dot << "graph config {\n";
  for (const auto& v : g.vertices)
    dot << "  \"" << v.id << "\" [label=\"" << v.id << ":" << v.chi.str() << "\"];\n";
  for (const auto& e : g.edges)
    dot << "  \"" << g.vertices[e.v[0]].id << "\" -- \"" << g.vertices[e.v[1]].id
        << "\" [label=\"" << e.id << ":" << e.b.str() << "\"];\n";
  dot << "}\n";
  return dot.str();
}

}  // namespace npcgm
