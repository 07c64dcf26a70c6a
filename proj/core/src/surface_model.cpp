#include <npcgm/surface_model.hpp>

#include <deque>

namespace npcgm {

Int SurfaceModel::pair(const IntVec& x, const IntVec& y) const {
  IntVec jy = mul(form, y);
  Int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * jy[i];
  return s;
}

SurfaceModel build_model(const ConfigGraph& g) {
  SurfaceModel m;
  m.cycles = cycle_basis(g);

  m.handle_base.resize(g.vertices.size());
  std::size_t dim = 0;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    m.handle_base[v] = dim;
    dim += 2 * static_cast<std::size_t>(g.genus(v));
  }
  m.z_index.assign(g.edges.size(), SurfaceModel::npos);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (!m.cycles.in_tree[e]) {
      m.z_index[e] = dim;
      dim += 2;
    }
  m.genus = dim / 2;

  m.form = IntMat(dim, dim);
  for (std::size_t i = 0; i + 1 < dim; i += 2) {
    m.form(i, i + 1) = 1;
    m.form(i + 1, i) = -1;
  }

  auto coloring = bicoloring(g);
  m.eps.resize(2 * g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (int s = 0; s < 2; ++s) {
      End d = make_end(e, s);
      if (coloring)
        m.eps[d] = (*coloring)[g.vertex_of(d)];
      else
        m.eps[d] = g.vertices[g.vertex_of(d)].id < g.vertices[g.vertex_of(bar(d))].id ? 1 : -1;
    }

  m.curve_class.assign(g.edges.size(), IntVec(dim));
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (m.z_index[e] != SurfaceModel::npos) m.curve_class[e][m.z_index[e]] = 1;

  // Tree-edge classes by the cut rule: summing the vertex relations over the
  // component of one chosen end leaves that end's curve plus the non-tree
  // curves crossing the cut.
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (!m.cycles.in_tree[e]) continue;
    End base_end = make_end(e, 0);
    std::vector<bool> in_side(g.vertices.size(), false);
    std::deque<std::size_t> queue{g.vertex_of(base_end)};
    in_side[g.vertex_of(base_end)] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (End d : g.ends_at[v]) {
        if (edge_of(d) == e || !m.cycles.in_tree[edge_of(d)]) continue;
        std::size_t w = g.vertex_of(bar(d));
        if (!in_side[w]) {
          in_side[w] = true;
          queue.push_back(w);
        }
      }
    }
    IntVec cls(dim);
    for (std::size_t f = 0; f < g.edges.size(); ++f) {
      if (m.cycles.in_tree[f]) continue;
      for (int s = 0; s < 2; ++s) {
        End d = make_end(f, s);
        if (in_side[g.vertex_of(d)] && !in_side[g.vertex_of(bar(d))]) {
          Int coeff = -Int(m.eps[base_end]) * Int(m.eps[d]);
          for (std::size_t i = 0; i < dim; ++i) cls[i] += coeff * m.curve_class[f][i];
        }
      }
    }
    m.curve_class[e] = std::move(cls);
  }
  return m;
}

IntMat twist_matrix(const IntMat& form, const IntVec& cls, const Int& power) {
  std::size_t dim = form.rows;
  IntVec row = mul(transpose(form), cls);  // row[j] = I(cls, basis_j)
  IntMat t = int_identity(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) t(i, j) += power * cls[i] * row[j];
  return t;
}

IntMat sigma_star(const SurfaceModel& m, const ConfigGraph& g) {
  IntMat sigma = int_identity(2 * m.genus);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    sigma = mul(twist_matrix(m.form, m.curve_class[e], g.edges[e].b), sigma);
  return sigma;
}

namespace {

RatMat sigma_minus_id(const SurfaceModel& m, const ConfigGraph& g) {
  IntMat sigma = sigma_star(m, g);
  RatMat d(sigma.rows, sigma.cols);
  for (std::size_t r = 0; r < sigma.rows; ++r)
    for (std::size_t c = 0; c < sigma.cols; ++c)
      d(r, c) = Rat(sigma(r, c) - (r == c ? 1 : 0));
  return d;
}

}  // namespace

bool survives(const SurfaceModel& m, const ConfigGraph& g, const RatVec& cls) {
  if (is_zero(cls)) return false;
  return !in_column_span(sigma_minus_id(m, g), cls);
}

std::vector<IntVec> invariant_functionals(const SurfaceModel& m, const ConfigGraph& g) {
  IntMat sigma = sigma_star(m, g);
  for (std::size_t i = 0; i < sigma.rows; ++i) sigma(i, i) -= 1;
  return int_row_kernel(sigma);
}

std::vector<Int> z_values(const SurfaceModel& m, const IntVec& xi) {
  std::vector<Int> vals(m.curve_class.size());
  for (std::size_t e = 0; e < m.curve_class.size(); ++e) {
    Int s = 0;
    for (std::size_t i = 0; i < xi.size(); ++i) s += xi[i] * m.curve_class[e][i];
    vals[e] = s;
  }
  return vals;
}

std::vector<Int> fiber_values(const SurfaceModel& m, const ConfigGraph& g, const IntVec& xi) {
  std::vector<Int> mz = z_values(m, xi);
  std::vector<Int> f(g.vertices.size());
  std::vector<bool> set(g.vertices.size(), false);
  set[0] = true;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (End d : g.ends_at[v]) {
      End other = bar(d);
      std::size_t w = g.vertex_of(other);
      if (set[w]) continue;
      // f(w) - f(v) = b * eps(d) * xi(z), with d the end at v seen from w.
      f[w] = f[v] + g.b_of(d) * Int(m.eps[d]) * mz[edge_of(d)];
      set[w] = true;
      queue.push_back(w);
    }
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    End d0 = make_end(e, 0);
    End d1 = make_end(e, 1);
    Int lhs = f[g.vertex_of(d1)] - f[g.vertex_of(d0)];
    Int rhs = g.edges[e].b * Int(m.eps[d0]) * mz[e];
    if (lhs != rhs)
      throw Error("InconsistentCycle",
                  "functional is not twist-invariant around a cycle through edge '" +
                      g.edges[e].id + "'");
  }
  return f;
}

}  // namespace npcgm
