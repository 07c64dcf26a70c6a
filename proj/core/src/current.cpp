#include <npcgm/current.hpp>

#include <npcgm/surface_model.hpp>

namespace npcgm {

namespace {

std::vector<int> require_bicoloring(const ConfigGraph& g) {
  auto color = bicoloring(g);
  if (!color) throw Error("NotBipartite", "current equations need a bicoloring");
  return *color;
}

}  // namespace

std::vector<RatVec> solution_space(const ConfigGraph& g) {
  auto color = require_bicoloring(g);
  CycleBasis cycles = cycle_basis(g);

  // In edge variables every vertex equation reads the same way: the sum of
  // the incident edge variables vanishes (the positive-vertex equations are
  // the negated originals).
  RatMat eqs(g.vertices.size() + cycles.cycles.size(), g.edges.size());
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    for (End d : g.ends_at[v]) eqs(v, edge_of(d)) += 1;

  // Weighted cycle equations over the values at the traversal's initial
  // ends: the edge variable enters positively when the edge is entered from
  // its negative vertex.
  for (std::size_t i = 0; i < cycles.cycles.size(); ++i)
    for (const auto& [e, reversed] : cycles.cycles[i]) {
      std::size_t initial = g.edges[e].v[reversed ? 1 : 0];
      int sign = color[initial] == -1 ? 1 : -1;
      eqs(g.vertices.size() + i, e) += sign * Rat(g.edges[e].b);
    }

  return nullspace(eqs);
}

std::variant<CurrentSolution, InfeasibilityWitness> nondegenerate_point(const ConfigGraph& g) {
  auto color = require_bicoloring(g);
  auto basis = solution_space(g);

  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    bool alive = false;
    for (const auto& vec : basis) alive = alive || vec[e] != 0;
    if (!alive) {
      int side = color[g.edges[e].v[0]] == -1 ? 0 : 1;
      return InfeasibilityWitness{make_end(e, side), basis};
    }
  }

  RatVec point = basis.front();
  for (std::size_t i = 1; i < basis.size(); ++i) {
    Rat lambda = 1;
    for (bool clash = true; clash;) {
      clash = false;
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (basis[i][e] != 0 && point[e] + lambda * basis[i][e] == 0) clash = true;
      if (clash) lambda += 1;
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) point[e] += lambda * basis[i][e];
  }

  CurrentSolution sol;
  sol.end_values.resize(2 * g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (int s = 0; s < 2; ++s) {
      End d = make_end(e, s);
      sol.end_values[d] = color[g.vertex_of(d)] == -1 ? point[e] : -point[e];
    }
  sol.nondegenerate = true;
  return sol;
}

SurvivalCrosscheck crosscheck_survival(const ConfigGraph& g) {
  SurvivalCrosscheck report;
  auto basis = solution_space(g);

  report.functional_alive.assign(g.edges.size(), false);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (const auto& vec : basis)
      if (vec[e] != 0) report.functional_alive[e] = true;

  report.feasible = std::holds_alternative<CurrentSolution>(nondegenerate_point(g));

  SurfaceModel m = build_model(g);
  report.class_survives.resize(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    RatVec cls;
    for (const Int& c : m.curve_class[e]) cls.emplace_back(c);
    report.class_survives[e] = survives(m, g, cls);
  }

  bool all_alive = true;
  report.agree = true;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    all_alive = all_alive && report.functional_alive[e];
    if (report.functional_alive[e] != report.class_survives[e]) report.agree = false;
  }
  if (report.feasible != all_alive) report.agree = false;
  return report;
}

}  // namespace npcgm
