#include <npcgm/cube.hpp>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace npcgm {

namespace {

std::string cell_ref(int dim, std::size_t id) {
  static const char* name[] = {"vertex", "edge", "square", "cube"};
  return std::string(name[dim]) + " " + std::to_string(id);
}

// Cheap structural guard for derived queries: every reference in range and
// every facet symmetry a genuine axis permutation. The full route-agreement
// audit lives in validate().
void require_well_formed(const CubeComplex& x) {
  std::vector<Violation> bad;
  for (std::size_t e = 0; e < x.edges.size(); ++e)
    for (int s = 0; s < 2; ++s)
      if (x.edges[e].ends[s] >= x.vertices)
        bad.push_back({"BadComplex", cell_ref(1, e) + " end out of range"});
  for (std::size_t q = 0; q < x.squares.size(); ++q)
    for (std::size_t f = 0; f < 4; ++f)
      if (x.squares[q].side[f] >= x.edges.size())
        bad.push_back({"BadComplex", cell_ref(2, q) + " side out of range"});
  for (std::size_t c = 0; c < x.cubes.size(); ++c)
    for (std::size_t f = 0; f < 6; ++f) {
      if (x.cubes[c].face[f] >= x.squares.size())
        bad.push_back({"BadComplex", cell_ref(3, c) + " face out of range"});
      const SquareMap& m = x.cubes[c].map[f];
      if ((m.axis[0] ^ m.axis[1]) != 1 || m.axis[0] < 0 || m.axis[0] > 1)
        bad.push_back({"BadComplex", cell_ref(3, c) + " facet symmetry is not an axis permutation"});
    }
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

// Dart sitting at a square corner, read through the facet pinning `via_axis`.
Dart square_corner_dart(const CubeComplex& x, std::size_t q, int corner, int via_axis) {
  const auto& sq = x.squares[q];
  int pin = (corner >> via_axis) & 1;
  int pos = (corner >> (1 - via_axis)) & 1;
  std::size_t f = facet(via_axis, pin);
  return make_dart(sq.side[f], pos ^ (sq.rev[f] ? 1 : 0));
}

std::size_t dart_vertex(const CubeComplex& x, Dart d) {
  return x.edges[dart_edge(d)].ends[dart_end(d)];
}

std::array<int, 2> others_of(int axis) {
  switch (axis) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

// Edge of a 3-cell along `axis`, descending through the facet that pins `via`.
// The flag is set when the cell coordinate runs against the edge.
std::pair<std::size_t, bool> cube_edge_via(const CubeComplex& x, std::size_t c, int axis,
                                           int pinned, int via) {
  const auto& cell = x.cubes[c];
  auto rem = others_of(axis);  // the two pinned axes, increasing
  int s[3] = {0, 0, 0};
  s[rem[0]] = pinned & 1;
  s[rem[1]] = (pinned >> 1) & 1;
  int y = rem[0] == via ? rem[1] : rem[0];  // the axis still pinned inside the facet

  std::size_t f = facet(via, s[via]);
  const SquareMap& m = cell.map[f];
  auto fc = others_of(via);  // facet coordinates, increasing
  int px = fc[0] == axis ? 0 : 1;
  int py = fc[0] == y ? 0 : 1;

  // Pinning the image of y leaves the square facet running along the image
  // of `axis`; the two flips compose.
  std::size_t g = facet(m.axis[py], s[y] ^ (m.flip[py] ? 1 : 0));
  const auto& sq = x.squares[cell.face[f]];
  return {sq.side[g], m.flip[px] != sq.rev[g]};
}

std::size_t cube_corner_via(const CubeComplex& x, std::size_t c, int corner, int via) {
  const auto& cell = x.cubes[c];
  std::size_t f = facet(via, (corner >> via) & 1);
  const SquareMap& m = cell.map[f];
  auto fc = others_of(via);
  int tcorner = 0;
  for (int p = 0; p < 2; ++p) {
    int bit = (corner >> fc[p]) & 1;
    tcorner |= (bit ^ (m.flip[p] ? 1 : 0)) << m.axis[p];
  }
  return square_corner_vertex(x, cell.face[f], tcorner);
}

// Union-find over midcubes carrying the relative transverse orientation; a
// cycle of gluings with odd total flip marks its component one-sided.
struct ParityDsu {
  std::vector<std::size_t> parent;
  std::vector<unsigned char> par;   // parity to parent
  std::vector<unsigned char> bad;   // meaningful at roots

  explicit ParityDsu(std::size_t n) : parent(n), par(n, 0), bad(n, 0) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }

  std::pair<std::size_t, int> find(std::size_t a) {
    if (parent[a] == a) return {a, 0};
    auto [root, p] = find(parent[a]);
    int mine = (par[a] ^ p) & 1;
    parent[a] = root;
    par[a] = static_cast<unsigned char>(mine);
    return {root, mine};
  }

  // Smaller root wins, so each component's root is its smallest member and
  // parities are relative to that member's own orientation.
  void unite(std::size_t a, std::size_t b, int parity) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) {
      if (((pa ^ pb) & 1) != (parity & 1)) bad[ra] = 1;
      return;
    }
    if (rb < ra) {
      std::swap(ra, rb);
      std::swap(pa, pb);
    }
    parent[rb] = ra;
    par[rb] = static_cast<unsigned char>((pa ^ pb ^ parity) & 1);
    bad[ra] = static_cast<unsigned char>(bad[ra] | bad[rb]);
  }
};

}  // namespace

std::size_t CubeComplex::cell_count(int dim) const {
  switch (dim) {
    case 0: return vertices;
    case 1: return edges.size();
    case 2: return squares.size();
    case 3: return cubes.size();
    default: return 0;
  }
}

int CubeComplex::dimension() const {
  if (!cubes.empty()) return 3;
  if (!squares.empty()) return 2;
  if (!edges.empty()) return 1;
  return 0;
}

long long CubeComplex::euler() const {
  return static_cast<long long>(vertices) - static_cast<long long>(edges.size()) +
         static_cast<long long>(squares.size()) - static_cast<long long>(cubes.size());
}

std::size_t square_corner_vertex(const CubeComplex& x, std::size_t q, int corner) {
  return dart_vertex(x, square_corner_dart(x, q, corner, 0));
}

std::size_t cube_corner_vertex(const CubeComplex& x, std::size_t c, int corner) {
  return cube_corner_via(x, c, corner, 0);
}

std::pair<std::size_t, bool> cube_edge(const CubeComplex& x, std::size_t c, int axis, int pinned) {
  return cube_edge_via(x, c, axis, pinned, others_of(axis)[0]);
}

std::size_t LinkComplex::dart_index(Dart d) const {
  auto it = std::lower_bound(darts.begin(), darts.end(), d);
  if (it == darts.end() || *it != d) return no_cell;
  return static_cast<std::size_t>(it - darts.begin());
}

bool LinkComplex::joined(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  for (const auto& e : edges)
    if (e.v[0] == a && e.v[1] == b) return true;
  return false;
}

std::vector<LinkComplex> all_links(const CubeComplex& x) {
  require_well_formed(x);
  std::vector<LinkComplex> out(x.vertices);
  for (std::size_t v = 0; v < x.vertices; ++v) out[v].vertex = v;
  for (std::size_t e = 0; e < x.edges.size(); ++e)
    for (int s = 0; s < 2; ++s) out[x.edges[e].ends[s]].darts.push_back(make_dart(e, s));

  auto index_in = [](const LinkComplex& lk, Dart d, const std::string& where) {
    std::size_t i = lk.dart_index(d);
    if (i == no_cell)
      throw Error("BadAttachment", where + " lands on a dart away from its corner vertex");
    return i;
  };

  for (std::size_t q = 0; q < x.squares.size(); ++q)
    for (int corner = 0; corner < 4; ++corner) {
      Dart d0 = square_corner_dart(x, q, corner, 0);
      LinkComplex& lk = out[dart_vertex(x, d0)];
      std::size_t i0 = index_in(lk, d0, cell_ref(2, q));
      std::size_t i1 = index_in(lk, square_corner_dart(x, q, corner, 1), cell_ref(2, q));
      if (i0 > i1) std::swap(i0, i1);
      lk.edges.push_back({{i0, i1}, q, corner});
    }

  for (std::size_t c = 0; c < x.cubes.size(); ++c)
    for (int corner = 0; corner < 8; ++corner) {
      LinkComplex& lk = out[cube_corner_vertex(x, c, corner)];
      std::array<std::size_t, 3> tri;
      for (int axis = 0; axis < 3; ++axis) {
        auto rem = others_of(axis);
        int pinned = ((corner >> rem[0]) & 1) | (((corner >> rem[1]) & 1) << 1);
        auto [e, flip] = cube_edge(x, c, axis, pinned);
        int end = ((corner >> axis) & 1) ^ (flip ? 1 : 0);
        tri[axis] = index_in(lk, make_dart(e, end), cell_ref(3, c));
      }
      std::sort(tri.begin(), tri.end());
      lk.triangles.push_back({tri, c, corner});
    }
  return out;
}

LinkComplex link(const CubeComplex& x, std::size_t v) {
  return all_links(x).at(v);
}

ValidationReport validate(const CubeComplex& x) {
  ValidationReport rep;
  auto attachment = [&](std::string detail) {
    rep.attachments_ok = false;
    rep.issues.push_back({"BadAttachment", std::move(detail)});
  };

  try {
    require_well_formed(x);
  } catch (const ValidationError& err) {
    for (const auto& v : err.violations()) attachment(v.detail);
    return rep;
  }

  // Corner agreement: every descent route to the same face must land on the
  // same cell the same way.
  for (std::size_t q = 0; q < x.squares.size(); ++q)
    for (int corner = 0; corner < 4; ++corner) {
      std::size_t v0 = dart_vertex(x, square_corner_dart(x, q, corner, 0));
      std::size_t v1 = dart_vertex(x, square_corner_dart(x, q, corner, 1));
      if (v0 != v1)
        attachment(cell_ref(2, q) + " corner " + std::to_string(corner) +
                   ": routes disagree (" + cell_ref(0, v0) + " vs " + cell_ref(0, v1) + ")");
    }
  for (std::size_t c = 0; c < x.cubes.size(); ++c) {
    for (int axis = 0; axis < 3; ++axis) {
      auto rem = others_of(axis);
      for (int pinned = 0; pinned < 4; ++pinned) {
        auto a = cube_edge_via(x, c, axis, pinned, rem[0]);
        auto b = cube_edge_via(x, c, axis, pinned, rem[1]);
        if (a != b)
          attachment(cell_ref(3, c) + " edge along axis " + std::to_string(axis) + " at " +
                     std::to_string(pinned) + ": routes disagree");
      }
    }
    for (int corner = 0; corner < 8; ++corner) {
      std::size_t v0 = cube_corner_via(x, c, corner, 0);
      for (int via = 1; via < 3; ++via)
        if (cube_corner_via(x, c, corner, via) != v0)
          attachment(cell_ref(3, c) + " corner " + std::to_string(corner) + ": routes disagree");
    }
  }
  if (!rep.attachments_ok) return rep;

  // Link audit: a simplicial complex has no loop edges, no doubled edges, and
  // no repeated or doubled triangles.
  for (const LinkComplex& lk : all_links(x)) {
    const std::string where = "link of " + cell_ref(0, lk.vertex) + ": ";
    std::map<std::array<std::size_t, 2>, int> edge_count;
    for (const auto& e : lk.edges) {
      if (e.v[0] == e.v[1]) {
        rep.simple = false;
        rep.issues.push_back({"NonSimplicialLink",
                              where + cell_ref(2, e.square) + " corner " +
                                  std::to_string(e.corner) + " joins a dart to itself"});
      } else {
        ++edge_count[e.v];
      }
    }
    for (const auto& [key, count] : edge_count)
      if (count > 1) {
        rep.simple = false;
        rep.issues.push_back({"NonSimplicialLink",
                              where + std::to_string(count) + " corners join darts " +
                                  std::to_string(lk.darts[key[0]]) + " and " +
                                  std::to_string(lk.darts[key[1]])});
      }
    std::map<std::array<std::size_t, 3>, int> tri_count;
    for (const auto& t : lk.triangles) {
      if (t.v[0] == t.v[1] || t.v[1] == t.v[2]) {
        rep.simple = false;
        rep.issues.push_back({"NonSimplicialLink",
                              where + cell_ref(3, t.cube) + " corner " + std::to_string(t.corner) +
                                  " repeats a dart"});
      } else {
        ++tri_count[t.v];
      }
    }
    for (const auto& [key, count] : tri_count)
      if (count > 1) {
        (void)key;
        rep.simple = false;
        rep.issues.push_back({"NonSimplicialLink", where + "doubled triangle"});
      }
  }
  return rep;
}

CubeFlags flags(const CubeComplex& x) {
  ValidationReport rep = validate(x);
  CubeFlags out;
  out.simple = rep.attachments_ok && rep.simple;
  if (!out.simple) return out;

  out.flag = true;
  for (const LinkComplex& lk : all_links(x)) {
    std::size_t n = lk.darts.size();
    std::vector<char> adj(n * n, 0);
    for (const auto& e : lk.edges) {
      adj[e.v[0] * n + e.v[1]] = 1;
      adj[e.v[1] * n + e.v[0]] = 1;
    }
    std::set<std::array<std::size_t, 3>> tris;
    for (const auto& t : lk.triangles) tris.insert(t.v);
    // Every joined triple must span a triangle; a joined quadruple would need
    // a 3-simplex, which a link in a three-dimensional complex cannot carry.
    for (std::size_t a = 0; a + 2 < n && out.flag; ++a)
      for (std::size_t b = a + 1; b + 1 < n && out.flag; ++b) {
        if (!adj[a * n + b]) continue;
        for (std::size_t c = b + 1; c < n && out.flag; ++c) {
          if (!adj[a * n + c] || !adj[b * n + c]) continue;
          if (!tris.count({a, b, c})) {
            out.flag = false;
            break;
          }
          for (std::size_t d = c + 1; d < n; ++d)
            if (adj[a * n + d] && adj[b * n + d] && adj[c * n + d]) {
              out.flag = false;
              break;
            }
        }
      }
    if (!out.flag) break;
  }
  return out;
}

int Hyperplane::side_of(Dart d) const {
  if (!two_sided) throw Error("OneSidedHyperplane", "side query on a one-sided hyperplane");
  auto it = std::lower_bound(dual_edges.begin(), dual_edges.end(), dart_edge(d));
  if (it == dual_edges.end() || *it != dart_edge(d))
    throw Error("NotDual", "dart " + std::to_string(d) + " is not dual to this hyperplane");
  return dart_end(d) == positive_end[static_cast<std::size_t>(it - dual_edges.begin())] ? 1 : 0;
}

Hyperplanes hyperplanes(const CubeComplex& x) {
  require_well_formed(x);
  const std::size_t ne = x.edges.size(), nq = x.squares.size();
  const std::size_t total = ne + 2 * nq + 3 * x.cubes.size();
  auto sq_node = [&](std::size_t q, int axis) { return ne + 2 * q + static_cast<std::size_t>(axis); };
  auto cube_node = [&](std::size_t c, int axis) {
    return ne + 2 * nq + 3 * c + static_cast<std::size_t>(axis);
  };

  ParityDsu dsu(total);
  for (std::size_t q = 0; q < nq; ++q)
    for (int axis = 0; axis < 2; ++axis) {
      int o = 1 - axis;
      for (int s = 0; s < 2; ++s) {
        std::size_t f = facet(o, s);
        dsu.unite(sq_node(q, axis), x.squares[q].side[f], x.squares[q].rev[f] ? 1 : 0);
      }
    }
  for (std::size_t c = 0; c < x.cubes.size(); ++c)
    for (int axis = 0; axis < 3; ++axis)
      for (int j = 0; j < 3; ++j) {
        if (j == axis) continue;
        auto fc = others_of(j);
        int p = fc[0] == axis ? 0 : 1;
        for (int s = 0; s < 2; ++s) {
          std::size_t f = facet(j, s);
          const SquareMap& m = x.cubes[c].map[f];
          dsu.unite(cube_node(c, axis), sq_node(x.cubes[c].face[f], m.axis[p]),
                    m.flip[p] ? 1 : 0);
        }
      }

  Hyperplanes out;
  out.of_edge.assign(ne, no_cell);
  std::map<std::size_t, std::size_t> index_of_root;
  for (std::size_t node = 0; node < total; ++node) {
    auto [root, parity] = dsu.find(node);
    auto [it, fresh] = index_of_root.try_emplace(root, out.all.size());
    if (fresh) {
      out.all.emplace_back();
      out.all.back().two_sided = !dsu.bad[root];
    }
    Hyperplane& h = out.all[it->second];
    Midcube mc;
    if (node < ne) {
      mc = {1, node, 0};
      h.dual_edges.push_back(node);
      h.positive_end.push_back(parity == 0 ? 1 : 0);
      out.of_edge[node] = it->second;
    } else if (node < ne + 2 * nq) {
      mc = {2, (node - ne) / 2, static_cast<int>((node - ne) % 2)};
    } else {
      std::size_t k = node - ne - 2 * nq;
      mc = {3, k / 3, static_cast<int>(k % 3)};
    }
    h.midcubes.push_back(mc);
  }
  return out;
}

bool CrossingGraph::adjacent(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  std::array<std::size_t, 2> key{a, b};
  auto it = std::lower_bound(edges.begin(), edges.end(), key);
  return it != edges.end() && *it == key;
}

CrossingGraph crossing_graph(const CubeComplex& x, const Hyperplanes& hs) {
  CrossingGraph g;
  g.nodes = hs.all.size();
  std::map<std::array<std::size_t, 2>, std::size_t> seen;
  for (std::size_t q = 0; q < x.squares.size(); ++q) {
    std::size_t h0 = hs.of_edge[x.squares[q].side[facet(1, 0)]];
    std::size_t h1 = hs.of_edge[x.squares[q].side[facet(0, 0)]];
    if (h0 == h1) continue;  // a self-crossing is a specialness defect, not a graph edge
    std::array<std::size_t, 2> key{std::min(h0, h1), std::max(h0, h1)};
    seen.try_emplace(key, q);
  }
  for (const auto& [key, q] : seen) {
    g.edges.push_back(key);
    g.witness_square.push_back(q);
  }
  return g;
}

SpecialnessReport specialness(const CubeComplex& x, const Hyperplanes& hs) {
  SpecialnessReport rep;
  for (std::size_t i = 0; i < hs.all.size(); ++i)
    if (!hs.all[i].two_sided) {
      Witness w;
      w.kind = Witness::OneSided;
      w.h1 = i;
      rep.witnesses.push_back(w);
    }

  CrossingGraph gamma = crossing_graph(x, hs);
  for (std::size_t q = 0; q < x.squares.size(); ++q) {
    std::size_t h0 = hs.of_edge[x.squares[q].side[facet(1, 0)]];
    std::size_t h1 = hs.of_edge[x.squares[q].side[facet(0, 0)]];
    if (h0 != h1) continue;
    Witness w;
    w.kind = Witness::SelfIntersection;
    w.h1 = w.h2 = h0;
    w.square = q;
    rep.witnesses.push_back(w);
  }

  auto crossing_site = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    std::array<std::size_t, 2> key{a, b};
    auto it = std::lower_bound(gamma.edges.begin(), gamma.edges.end(), key);
    return gamma.witness_square[static_cast<std::size_t>(it - gamma.edges.begin())];
  };

  for (const LinkComplex& lk : all_links(x))
    for (std::size_t i = 0; i < lk.darts.size(); ++i)
      for (std::size_t j = i + 1; j < lk.darts.size(); ++j) {
        if (lk.joined(i, j)) continue;
        Dart d1 = lk.darts[i], d2 = lk.darts[j];
        std::size_t ha = hs.of_edge[dart_edge(d1)], hb = hs.of_edge[dart_edge(d2)];
        if (ha == hb) {
          const Hyperplane& h = hs.all[ha];
          // Opposite ends of one loop always see opposite sides, so a lone
          // circle never trips this.
          if (h.two_sided && h.side_of(d1) == h.side_of(d2)) {
            Witness w;
            w.kind = Witness::SelfOsculation;
            w.h1 = w.h2 = ha;
            w.vertex = lk.vertex;
            w.d1 = d1;
            w.d2 = d2;
            rep.witnesses.push_back(w);
          }
        } else if (gamma.adjacent(ha, hb)) {
          Witness w;
          w.kind = Witness::InterOsculation;
          w.h1 = std::min(ha, hb);
          w.h2 = std::max(ha, hb);
          w.square = crossing_site(ha, hb);
          w.vertex = lk.vertex;
          w.d1 = d1;
          w.d2 = d2;
          rep.witnesses.push_back(w);
        }
      }

  rep.special = rep.witnesses.empty();
  return rep;
}

SpecialnessReport specialness(const CubeComplex& x) {
  return specialness(x, hyperplanes(x));
}

CubeComplex salvetti(const CrossingGraph& g, int dim_cap) {
  CubeComplex x;
  x.vertices = 1;
  for (std::size_t i = 0; i < g.nodes; ++i) x.add_edge(0, 0);
  std::map<std::array<std::size_t, 2>, std::size_t> sq_of;
  for (const auto& e : g.edges) {
    // Axis 0 runs along the lower generator's loop, axis 1 along the higher.
    std::size_t q = x.add_square({e[1], e[1], e[0], e[0]});
    sq_of[e] = q;
  }
  if (dim_cap >= 3)
    for (std::size_t u = 0; u < g.nodes; ++u)
      for (std::size_t v = u + 1; v < g.nodes; ++v) {
        if (!g.adjacent(u, v)) continue;
        for (std::size_t w = v + 1; w < g.nodes; ++w) {
          if (!g.adjacent(u, w) || !g.adjacent(v, w)) continue;
          x.add_cube({sq_of[{v, w}], sq_of[{v, w}], sq_of[{u, w}], sq_of[{u, w}],
                      sq_of[{u, v}], sq_of[{u, v}]});
        }
      }
  return x;
}

std::string raag_presentation(const CrossingGraph& g) {
  std::string s = "<";
  for (std::size_t i = 0; i < g.nodes; ++i) {
    if (i) s += ", ";
    s += "x" + std::to_string(i);
  }
  if (!g.edges.empty()) {
    s += " | ";
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (i) s += ", ";
      s += "[x" + std::to_string(g.edges[i][0]) + ",x" + std::to_string(g.edges[i][1]) + "]";
    }
  }
  s += ">";
  return s;
}

CharMap raag_and_char_map(const CubeComplex& x, int dim_cap) {
  Hyperplanes hs = hyperplanes(x);
  SpecialnessReport sp = specialness(x, hs);
  if (!sp.special)
    throw Error("NotSpecial",
                std::to_string(sp.witnesses.size()) + " specialness witnesses in the way");

  CharMap cm;
  cm.gamma = crossing_graph(x, hs);
  cm.target = salvetti(cm.gamma, dim_cap);

  cm.edge_image.resize(x.edges.size());
  cm.edge_reversed.resize(x.edges.size());
  for (std::size_t e = 0; e < x.edges.size(); ++e) {
    std::size_t h = hs.of_edge[e];
    cm.edge_image[e] = h;  // loop ids equal hyperplane ids by construction
    cm.edge_reversed[e] = hs.all[h].side_of(make_dart(e, 1)) == 0;
  }

  auto pair_index = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    std::array<std::size_t, 2> key{a, b};
    auto it = std::lower_bound(cm.gamma.edges.begin(), cm.gamma.edges.end(), key);
    return static_cast<std::size_t>(it - cm.gamma.edges.begin());
  };
  cm.square_image.resize(x.squares.size());
  for (std::size_t q = 0; q < x.squares.size(); ++q) {
    std::size_t h0 = hs.of_edge[x.squares[q].side[facet(1, 0)]];
    std::size_t h1 = hs.of_edge[x.squares[q].side[facet(0, 0)]];
    cm.square_image[q] = pair_index(h0, h1);  // target squares follow gamma edge order
  }

  // Target cubes follow the clique enumeration in salvetti(); replay it.
  std::map<std::array<std::size_t, 3>, std::size_t> cube_of;
  if (dim_cap >= 3) {
    std::size_t next = 0;
    for (std::size_t u = 0; u < cm.gamma.nodes; ++u)
      for (std::size_t v = u + 1; v < cm.gamma.nodes; ++v) {
        if (!cm.gamma.adjacent(u, v)) continue;
        for (std::size_t w = v + 1; w < cm.gamma.nodes; ++w)
          if (cm.gamma.adjacent(u, w) && cm.gamma.adjacent(v, w)) cube_of[{u, v, w}] = next++;
      }
  }
  cm.cube_image.assign(x.cubes.size(), no_cell);
  for (std::size_t c = 0; c < x.cubes.size(); ++c) {
    std::array<std::size_t, 3> hset;
    for (int axis = 0; axis < 3; ++axis)
      hset[axis] = hs.of_edge[cube_edge(x, c, axis, 0).first];
    std::sort(hset.begin(), hset.end());
    auto it = cube_of.find(hset);
    if (it == cube_of.end())
      cm.failures.push_back({"NoImageCell",
                             cell_ref(3, c) + " has no image below the completion cap"});
    else
      cm.cube_image[c] = it->second;
  }

  // Link-by-link: the induced map must be injective on darts and corners, and
  // its image full, so none of the target's commutations are missed here.
  for (const LinkComplex& lk : all_links(x)) {
    const std::string where = "link of " + cell_ref(0, lk.vertex) + ": ";
    std::vector<Dart> image(lk.darts.size());
    for (std::size_t i = 0; i < lk.darts.size(); ++i) {
      Dart d = lk.darts[i];
      std::size_t e = dart_edge(d);
      image[i] = make_dart(cm.edge_image[e], dart_end(d) ^ (cm.edge_reversed[e] ? 1 : 0));
    }
    std::map<std::array<Dart, 2>, int> image_pairs;
    for (const auto& le : lk.edges) {
      std::array<Dart, 2> key{std::min(image[le.v[0]], image[le.v[1]]),
                              std::max(image[le.v[0]], image[le.v[1]])};
      ++image_pairs[key];
    }
    for (const auto& [key, count] : image_pairs) {
      (void)key;
      if (count > 1)
        cm.failures.push_back({"LinkEdgeCollision", where + "two corners map to one corner"});
    }
    for (std::size_t i = 0; i < lk.darts.size(); ++i)
      for (std::size_t j = i + 1; j < lk.darts.size(); ++j) {
        if (image[i] == image[j]) {
          cm.failures.push_back({"LinkCollision",
                                 where + "darts " + std::to_string(lk.darts[i]) + " and " +
                                     std::to_string(lk.darts[j]) + " map to one dart"});
          continue;
        }
        bool target_joined = dart_edge(image[i]) != dart_edge(image[j]) &&
                             cm.gamma.adjacent(dart_edge(image[i]), dart_edge(image[j]));
        if (!lk.joined(i, j) && target_joined)
          cm.failures.push_back({"NotFull",
                                 where + "darts " + std::to_string(lk.darts[i]) + " and " +
                                     std::to_string(lk.darts[j]) +
                                     " miss a commutation present downstairs"});
      }
  }

  cm.local_isometry = cm.failures.empty();
  return cm;
}

PermutationCover trivial_cover(const CubeComplex& x, std::size_t degree) {
  PermutationCover pc;
  pc.degree = degree;
  std::vector<std::size_t> id(degree);
  std::iota(id.begin(), id.end(), std::size_t{0});
  pc.edge_perm.assign(x.edges.size(), id);
  return pc;
}

PermutationCover tensor(const PermutationCover& a, const PermutationCover& b) {
  if (a.edge_perm.size() != b.edge_perm.size())
    throw Error("BadCover", "tensor of covers over different bases");
  PermutationCover out;
  out.degree = a.degree * b.degree;
  out.edge_perm.resize(a.edge_perm.size());
  for (std::size_t e = 0; e < a.edge_perm.size(); ++e) {
    out.edge_perm[e].resize(out.degree);
    for (std::size_t k1 = 0; k1 < a.degree; ++k1)
      for (std::size_t k2 = 0; k2 < b.degree; ++k2)
        out.edge_perm[e][k1 * b.degree + k2] = a.edge_perm[e][k1] * b.degree + b.edge_perm[e][k2];
  }
  return out;
}

namespace {

void check_cover_data(const CubeComplex& x, const PermutationCover& pc) {
  if (pc.degree == 0) throw Error("BadCover", "degree zero");
  if (pc.edge_perm.size() != x.edges.size())
    throw Error("BadCover", "need one sheet permutation per edge");
  for (std::size_t e = 0; e < pc.edge_perm.size(); ++e) {
    if (pc.edge_perm[e].size() != pc.degree)
      throw Error("BadCover", cell_ref(1, e) + ": permutation size is not the degree");
    std::vector<char> seen(pc.degree, 0);
    for (std::size_t k : pc.edge_perm[e]) {
      if (k >= pc.degree || seen[k])
        throw Error("BadCover", cell_ref(1, e) + ": not a permutation of the sheets");
      seen[k] = 1;
    }
  }
}

using SheetVec = std::vector<std::size_t>;

SheetVec apply_perm(const SheetVec& t, const SheetVec& s) {
  SheetVec out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) out[k] = t[s[k]];
  return out;
}

// Sheet of each square corner per starting sheet; the two routes around the
// square must agree for the lifts to exist.
std::array<SheetVec, 4> square_sheets(const CubeComplex& x, std::size_t q,
                                      const std::vector<SheetVec>& fwd,
                                      const std::vector<SheetVec>& inv) {
  const auto& sq = x.squares[q];
  auto transport = [&](int axis, int side) -> const SheetVec& {
    std::size_t f = facet(axis, side);
    return sq.rev[f] ? inv[sq.side[f]] : fwd[sq.side[f]];
  };
  std::array<SheetVec, 4> sheet;
  sheet[0].resize(fwd.empty() ? 0 : fwd[0].size());
  std::iota(sheet[0].begin(), sheet[0].end(), std::size_t{0});
  sheet[1] = apply_perm(transport(1, 0), sheet[0]);  // along axis 0 over the bottom
  sheet[2] = apply_perm(transport(0, 0), sheet[0]);  // along axis 1 over the left side
  sheet[3] = apply_perm(transport(0, 1), sheet[1]);
  if (sheet[3] != apply_perm(transport(1, 1), sheet[2]))
    throw Error("RelatorViolation", cell_ref(2, q) + ": sheet holonomy does not close");
  return sheet;
}

std::array<SheetVec, 8> cube_sheets(const CubeComplex& x, std::size_t c,
                                    const std::vector<SheetVec>& fwd,
                                    const std::vector<SheetVec>& inv) {
  auto transport = [&](int axis, int pinned) -> const SheetVec& {
    auto [e, flip] = cube_edge(x, c, axis, pinned);
    return flip ? inv[e] : fwd[e];
  };
  std::array<SheetVec, 8> sheet;
  sheet[0].resize(fwd.empty() ? 0 : fwd[0].size());
  std::iota(sheet[0].begin(), sheet[0].end(), std::size_t{0});
  for (int corner = 1; corner < 8; ++corner) {
    int axis = corner & 1 ? 0 : (corner & 2 ? 1 : 2);  // lowest set bit
    int from = corner & ~(1 << axis);
    auto rem = others_of(axis);
    int pinned = ((from >> rem[0]) & 1) | (((from >> rem[1]) & 1) << 1);
    sheet[corner] = apply_perm(transport(axis, pinned), sheet[from]);
  }
  for (int corner = 0; corner < 8; ++corner)
    for (int axis = 0; axis < 3; ++axis) {
      if (corner & (1 << axis)) continue;
      auto rem = others_of(axis);
      int pinned = ((corner >> rem[0]) & 1) | (((corner >> rem[1]) & 1) << 1);
      if (sheet[corner | (1 << axis)] != apply_perm(transport(axis, pinned), sheet[corner]))
        throw Error("RelatorViolation", cell_ref(3, c) + ": sheet holonomy does not close");
    }
  return sheet;
}

}  // namespace

Cover cover(const CubeComplex& x, const PermutationCover& pc) {
  require_well_formed(x);
  check_cover_data(x, pc);
  const std::size_t d = pc.degree;

  std::vector<SheetVec> fwd = pc.edge_perm, inv(x.edges.size());
  for (std::size_t e = 0; e < x.edges.size(); ++e) {
    inv[e].resize(d);
    for (std::size_t k = 0; k < d; ++k) inv[e][fwd[e][k]] = k;
  }

  Cover cv;
  cv.degree = d;
  CubeComplex& t = cv.total;
  t.vertices = x.vertices * d;
  for (std::size_t e = 0; e < x.edges.size(); ++e)
    for (std::size_t k = 0; k < d; ++k)
      t.add_edge(x.edges[e].ends[0] * d + k, x.edges[e].ends[1] * d + fwd[e][k]);

  for (std::size_t q = 0; q < x.squares.size(); ++q) {
    auto sheet = square_sheets(x, q, fwd, inv);
    for (std::size_t k = 0; k < d; ++k) {
      CubeComplex::SquareCell sc;
      for (int axis = 0; axis < 2; ++axis)
        for (int s = 0; s < 2; ++s) {
          std::size_t f = facet(axis, s);
          int r = x.squares[q].rev[f] ? 1 : 0;
          // Corner carrying the lifted edge's tail: pinned axis at s, free at r.
          int corner = axis == 0 ? (s | (r << 1)) : (r | (s << 1));
          sc.side[f] = x.squares[q].side[f] * d + sheet[corner][k];
          sc.rev[f] = x.squares[q].rev[f];
        }
      t.add_square(sc.side, sc.rev);
    }
  }

  for (std::size_t c = 0; c < x.cubes.size(); ++c) {
    auto sheet = cube_sheets(x, c, fwd, inv);
    for (std::size_t k = 0; k < d; ++k) {
      CubeComplex::CubeCell cc;
      for (int axis = 0; axis < 3; ++axis)
        for (int s = 0; s < 2; ++s) {
          std::size_t f = facet(axis, s);
          const SquareMap& m = x.cubes[c].map[f];
          auto fc = others_of(axis);
          // Corner over the face's all-zeros corner.
          int corner = s << axis;
          for (int p = 0; p < 2; ++p) corner |= (m.flip[p] ? 1 : 0) << fc[p];
          cc.face[f] = x.cubes[c].face[f] * d + sheet[corner][k];
          cc.map[f] = m;
        }
      t.add_cube(cc.face, cc.map);
    }
  }
  return cv;
}

std::vector<Piece> components(const CubeComplex& x) {
  require_well_formed(x);
  const std::size_t ov = 0, oe = x.vertices, oq = oe + x.edges.size(),
                    oc = oq + x.squares.size(), total = oc + x.cubes.size();
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (std::size_t e = 0; e < x.edges.size(); ++e)
    for (int s = 0; s < 2; ++s) unite(oe + e, ov + x.edges[e].ends[s]);
  for (std::size_t q = 0; q < x.squares.size(); ++q)
    for (std::size_t f = 0; f < 4; ++f) unite(oq + q, oe + x.squares[q].side[f]);
  for (std::size_t c = 0; c < x.cubes.size(); ++c)
    for (std::size_t f = 0; f < 6; ++f) unite(oc + c, oq + x.cubes[c].face[f]);

  std::map<std::size_t, std::size_t> piece_of_root;
  std::vector<Piece> out;
  auto piece_for = [&](std::size_t node) -> Piece& {
    auto [it, fresh] = piece_of_root.try_emplace(find(node), out.size());
    if (fresh) out.emplace_back();
    return out[it->second];
  };

  // Two passes per dimension: assign new ids, then remap attachments.
  std::vector<std::size_t> new_vertex(x.vertices), new_edge(x.edges.size()),
      new_square(x.squares.size());
  for (std::size_t v = 0; v < x.vertices; ++v) {
    Piece& p = piece_for(ov + v);
    new_vertex[v] = p.complex.add_vertex();
    p.vertex_map.push_back(v);
  }
  for (std::size_t e = 0; e < x.edges.size(); ++e) {
    Piece& p = piece_for(oe + e);
    new_edge[e] = p.complex.add_edge(new_vertex[x.edges[e].ends[0]], new_vertex[x.edges[e].ends[1]]);
    p.edge_map.push_back(e);
  }
  for (std::size_t q = 0; q < x.squares.size(); ++q) {
    Piece& p = piece_for(oq + q);
    auto side = x.squares[q].side;
    for (auto& s : side) s = new_edge[s];
    new_square[q] = p.complex.add_square(side, x.squares[q].rev);
    p.square_map.push_back(q);
  }
  for (std::size_t c = 0; c < x.cubes.size(); ++c) {
    Piece& p = piece_for(oc + c);
    auto face = x.cubes[c].face;
    for (auto& f : face) f = new_square[f];
    p.complex.add_cube(face, x.cubes[c].map);
    p.cube_map.push_back(c);
  }
  return out;
}

FiberProduct fiber_product(const CubeComplex& x, const PermutationCover& a,
                           const PermutationCover& b) {
  FiberProduct fp;
  fp.product = cover(x, tensor(a, b));
  fp.pieces = components(fp.product.total);
  for (const Piece& p : fp.pieces) {
    std::size_t n = 0;
    for (std::size_t v : p.vertex_map)
      if (base_cell(v, fp.product.degree) == 0) ++n;
    fp.piece_degree.push_back(n);
  }
  return fp;
}

std::string cube_to_json(const CubeComplex& x, const std::vector<EdgeTag>& tags) {
  nlohmann::json j;
  j["vertices"] = x.vertices;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : x.edges) j["edges"].push_back({e.ends[0], e.ends[1]});
  if (!x.squares.empty()) {
    j["squares"] = nlohmann::json::array();
    for (const auto& q : x.squares)
      j["squares"].push_back({{"side", q.side}, {"rev", q.rev}});
  }
  if (!x.cubes.empty()) {
    j["cubes"] = nlohmann::json::array();
    for (const auto& c : x.cubes) {
      nlohmann::json maps = nlohmann::json::array();
      for (const auto& m : c.map) maps.push_back({{"axis", m.axis}, {"flip", m.flip}});
      j["cubes"].push_back({{"face", c.face}, {"map", maps}});
    }
  }
  if (!tags.empty()) {
    j["tags"] = nlohmann::json::array();
    for (const auto& t : tags) {
      nlohmann::json jt{{"edge", t.edge}};
      switch (t.tag.kind) {
        case HyperplaneTag::Untyped: jt["kind"] = "untyped"; break;
        case HyperplaneTag::Cut:
          jt["kind"] = "cut";
          if (t.tag.index >= 0) jt["index"] = t.tag.index;
          break;
        case HyperplaneTag::Bind:
          jt["kind"] = "bind";
          jt["index"] = t.tag.index;
          break;
      }
      j["tags"].push_back(jt);
    }
  }
  return j.dump(2);
}

CubeJson cube_from_json(const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    CubeJson out;
    out.complex.vertices = j.at("vertices").get<std::size_t>();
    for (const auto& e : j.value("edges", nlohmann::json::array()))
      out.complex.add_edge(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    for (const auto& q : j.value("squares", nlohmann::json::array())) {
      std::array<std::size_t, 4> side;
      std::array<bool, 4> rev;
      for (int i = 0; i < 4; ++i) {
        side[i] = q.at("side").at(i).get<std::size_t>();
        rev[i] = q.at("rev").at(i).get<bool>();
      }
      out.complex.add_square(side, rev);
    }
    for (const auto& c : j.value("cubes", nlohmann::json::array())) {
      std::array<std::size_t, 6> face;
      std::array<SquareMap, 6> map;
      for (int i = 0; i < 6; ++i) {
        face[i] = c.at("face").at(i).get<std::size_t>();
        for (int p = 0; p < 2; ++p) {
          map[i].axis[p] = c.at("map").at(i).at("axis").at(p).get<int>();
          map[i].flip[p] = c.at("map").at(i).at("flip").at(p).get<bool>();
        }
      }
      out.complex.add_cube(face, map);
    }
    for (const auto& t : j.value("tags", nlohmann::json::array())) {
      EdgeTag tag;
      tag.edge = t.at("edge").get<std::size_t>();
      std::string kind = t.at("kind").get<std::string>();
      if (kind == "cut") {
        tag.tag.kind = HyperplaneTag::Cut;
        tag.tag.index = t.value("index", -1);
      } else if (kind == "bind") {
        tag.tag.kind = HyperplaneTag::Bind;
        tag.tag.index = t.at("index").get<int>();
      } else if (kind == "untyped") {
        tag.tag.kind = HyperplaneTag::Untyped;
      } else {
        throw Error("BadInput", "unknown tag kind \"" + kind + "\"");
      }
      out.tags.push_back(tag);
    }
    return out;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error("BadInput", e.what());
  }
}

void apply_tags(Hyperplanes& hs, const std::vector<EdgeTag>& tags) {
  for (const auto& t : tags) {
    if (t.tag.kind == HyperplaneTag::Untyped) continue;
    if (t.edge >= hs.of_edge.size())
      throw Error("BadInput", "tag names " + cell_ref(1, t.edge) + " which does not exist");
    HyperplaneTag& cur = hs.all[hs.of_edge[t.edge]].tag;
    bool same = cur.kind == t.tag.kind &&
                (cur.kind != HyperplaneTag::Bind || cur.index == t.tag.index);
    if (cur.kind != HyperplaneTag::Untyped && !same)
      throw Error("TagConflict",
                  "hyperplane over " + cell_ref(1, t.edge) + " tagged two different ways");
    cur = t.tag;
  }
}

std::string to_dot(const CrossingGraph& g, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "graph crossings {\n";
  for (std::size_t i = 0; i < g.nodes; ++i) {
    os << "  " << i << " [label=\"";
    if (i < names.size())
      os << names[i];
    else
      os << "H" << i;
    os << "\"];\n";
  }
  for (const auto& e : g.edges) os << "  " << e[0] << " -- " << e[1] << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace npcgm
