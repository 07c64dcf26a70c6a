#include <npcgm/cutbind.hpp>

#include <npcgm/error.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace npcgm {
namespace {

RatVec to_rat(const IntVec& v) {
  RatVec r;
  r.reserve(v.size());
  for (const Int& e : v) r.emplace_back(e);
  return r;
}

Int dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// chopping pieces into pants

struct PoolSlot {
  std::size_t curve;
  int sign;
  int side;  // which CutCurve::Side this slot fills once consumed
};

void consume(PantsDecomposition& d, std::size_t pi, int si, const PoolSlot& s) {
  d.pants[pi].slot[static_cast<std::size_t>(si)] = {s.curve, s.sign};
  d.curves[s.curve].side[static_cast<std::size_t>(s.side)] = {pi, si};
}

// Cut the piece at vertex v into pants. The pool starts with the boundary
// slots, signed by the boundary orientation, plus both sides of one new
// curve per handle. While more than three slots remain, the first pair in
// lexicographic order whose induced sum survives is split off as a pants and
// the other side of the new curve goes to the back of the pool.
void chop_piece(const SurfaceModel& m, const ConfigGraph& g, std::size_t v,
                PantsDecomposition& d) {
  const std::size_t dim = m.form.rows;
  std::vector<PoolSlot> pool;
  for (End e : g.ends_at[v]) pool.push_back({edge_of(e), m.eps[e], side_of(e)});
  const std::size_t handles = g.genus(v).convert_to<std::size_t>();
  for (std::size_t i = 0; i < handles; ++i) {
    CutCurve c;
    c.cls.assign(dim, 0);
    c.cls[m.handle_base[v] + 2 * i] = 1;
    c.vertex = v;
    const std::size_t id = d.curves.size();
    d.curves.push_back(std::move(c));
    pool.push_back({id, 1, 0});
    pool.push_back({id, -1, 1});
  }
  auto induced = [&](const PoolSlot& s) {
    IntVec w = d.curves[s.curve].cls;
    if (s.sign < 0)
      for (Int& e : w) e = -e;
    return w;
  };
  while (pool.size() > 3) {
    std::size_t bi = no_cell, bj = no_cell;
    IntVec sum;
    for (std::size_t i = 0; i + 1 < pool.size() && bi == no_cell; ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        IntVec cand = induced(pool[i]);
        const IntVec other = induced(pool[j]);
        for (std::size_t t = 0; t < dim; ++t) cand[t] += other[t];
        if (survives(m, g, to_rat(cand))) {
          bi = i;
          bj = j;
          sum = std::move(cand);
          break;
        }
      }
    }
    if (bi == no_cell)
      throw Error("TemplateSearchExhausted",
                  "no surviving pair in piece '" + g.vertices[v].id + "'");
    CutCurve c;
    c.cls = std::move(sum);
    c.vertex = v;
    const std::size_t id = d.curves.size();
    d.curves.push_back(std::move(c));
    const std::size_t pi = d.pants.size();
    d.pants.push_back(Pants{v, {}});
    consume(d, pi, 0, pool[bi]);
    consume(d, pi, 1, pool[bj]);
    d.pants[pi].slot[2] = {id, -1};
    d.curves[id].side[0] = {pi, 2};
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(bj));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(bi));
    pool.push_back({id, 1, 1});
  }
  const std::size_t pi = d.pants.size();
  d.pants.push_back(Pants{v, {}});
  for (int k = 0; k < 3; ++k) consume(d, pi, k, pool[static_cast<std::size_t>(k)]);
}

void push_edge_curves(const SurfaceModel& m, const ConfigGraph& g,
                      PantsDecomposition& d) {
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    CutCurve c;
    c.cls = m.curve_class[e];
    c.edge = e;
    d.curves.push_back(std::move(c));
  }
}

// ---------------------------------------------------------------------------
// functional selection

IntMat unimodular_inverse(const IntMat& a) {
  const std::size_t n = a.rows;
  IntMat inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    IntVec e(n, Int(0));
    e[j] = 1;
    std::optional<IntVec> col = int_solve(a, e);
    if (!col) throw Error("NoNondegenerateXi", "value lattice basis failed to invert");
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = (*col)[i];
  }
  return inv;
}

// ---------------------------------------------------------------------------
// arc patterns and the square complex

enum class Role { Lone, Fam0, Fam1 };

Role role_of(const PantsPattern& pp, int slot) {
  if (slot == pp.lone) return Role::Lone;
  return slot == pp.fam[0] ? Role::Fam0 : Role::Fam1;
}

std::size_t role_len(const PantsPattern& pp, Role r) {
  switch (r) {
    case Role::Lone: return pp.p + pp.q;
    case Role::Fam0: return pp.p;
    default: return pp.q;
  }
}

// Local region id of the segment following `seg` positions of a boundary.
// Region 0 is the central one touching all three boundaries; 1..p-1 sit
// between the lone boundary and fam[0], p..p+q-2 between lone and fam[1].
std::size_t region_of_seg(const PantsPattern& pp, Role r, std::size_t seg) {
  const std::size_t p = pp.p, q = pp.q;
  switch (r) {
    case Role::Lone:
      if (seg == p - 1 || seg == p + q - 1) return 0;
      if (seg < p - 1) return 1 + seg;
      return seg;
    case Role::Fam0:
      return seg == p - 1 ? 0 : p - 1 - seg;
    default:
      return seg == q - 1 ? 0 : p + (q - 2 - seg);
  }
}

// Local arc id at a boundary position. Arcs to fam[0] are 0..p-1 by their
// position on the lone boundary, arcs to fam[1] are p..p+q-1.
std::size_t arc_at(const PantsPattern& pp, Role r, std::size_t pos) {
  switch (r) {
    case Role::Lone: return pos;
    case Role::Fam0: return pp.p - 1 - pos;
    default: return pp.p + (pp.q - 1 - pos);
  }
}

struct SideRef {
  std::size_t pants;
  int slot;
  Role role;
  std::size_t len;
};

SideRef side_ref(const PantsDecomposition& d,
                 const std::vector<PantsPattern>& pattern, std::size_t f,
                 std::size_t which) {
  const CutCurve::Side& s = d.curves[f].side[which];
  if (s.pants == no_cell)
    throw Error("ShiftSearchFailed", "curve side not attached to a pants");
  const PantsPattern& pp = pattern[s.pants];
  const Role r = role_of(pp, s.slot);
  return {s.pants, s.slot, r, role_len(pp, r)};
}

std::vector<PantsPattern> derive_patterns(const PantsDecomposition& d,
                                          const XiData& x) {
  std::vector<PantsPattern> out;
  out.reserve(d.pants.size());
  for (const Pants& P : d.pants) {
    std::array<Int, 3> val;
    for (std::size_t i = 0; i < 3; ++i)
      val[i] = Int(P.slot[i].sign) * x.value[P.slot[i].curve];
    int lone = -1;
    for (int i = 0; i < 3 && lone < 0; ++i) {
      const Int& a = val[static_cast<std::size_t>((i + 1) % 3)];
      const Int& b = val[static_cast<std::size_t>((i + 2) % 3)];
      if (sgn(a) == sgn(b) && sgn(val[static_cast<std::size_t>(i)]) != sgn(a))
        lone = i;
    }
    if (lone < 0) throw Error("BadTriple", "pants values admit no lone sign");
    const int f0 = lone == 0 ? 1 : 0;
    const int f1 = lone == 2 ? 1 : 2;
    const ArcPattern a =
        pants_arc_pattern(val[static_cast<std::size_t>(lone)],
                          val[static_cast<std::size_t>(f0)],
                          val[static_cast<std::size_t>(f1)]);
    PantsPattern pp;
    pp.lone = lone;
    pp.fam = {f0, f1};
    pp.p = a.p;
    pp.q = a.q;
    out.push_back(pp);
  }
  return out;
}

struct Layout {
  std::vector<std::size_t> M;      // per curve: crossing count
  std::vector<std::size_t> cbase;  // per curve: first cut edge id
  std::vector<std::size_t> vbase;  // per pants: first vertex id
  std::vector<std::size_t> bbase;  // per pants: first bind arc index
  std::size_t total_cut = 0, total_arcs = 0, total_regions = 0;

  std::size_t cut_edge(std::size_t f, std::size_t t) const { return cbase[f] + t; }
  std::size_t bind_edge(std::size_t pants, std::size_t arc) const {
    return total_cut + bbase[pants] + arc;
  }
};

// Build the square complex for the given shifts. Cut edges run from the
// primary to the secondary side of their curve; position t on the primary
// boundary meets position (shift - t - 1) mod M on the secondary one. A bind
// edge runs from the region right of its arc to the region left of it,
// oriented along the flow out of the pants through the positive-value slot.
SurfaceComplex build_complex(const PantsDecomposition& d, const XiData& x,
                             const std::vector<PantsPattern>& pattern,
                             const std::vector<std::size_t>& shift, Layout& lay) {
  const std::size_t nf = d.curves.size(), np = d.pants.size();
  lay = Layout{};
  lay.M.resize(nf);
  lay.cbase.resize(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    lay.M[f] = iabs(x.value[f]).convert_to<std::size_t>();
    lay.cbase[f] = lay.total_cut;
    lay.total_cut += lay.M[f];
  }
  lay.vbase.resize(np);
  lay.bbase.resize(np);
  for (std::size_t P = 0; P < np; ++P) {
    lay.vbase[P] = lay.total_regions;
    lay.bbase[P] = lay.total_arcs;
    lay.total_regions += pattern[P].p + pattern[P].q - 1;
    lay.total_arcs += pattern[P].p + pattern[P].q;
  }

  SurfaceComplex sc;
  CubeComplex& cx = sc.complex;
  for (std::size_t P = 0; P < np; ++P) {
    const std::size_t regions = pattern[P].p + pattern[P].q - 1;
    for (std::size_t r = 0; r < regions; ++r) {
      cx.add_vertex();
      sc.vertex_pants.push_back(P);
      sc.vertex_region.push_back(r);
    }
  }

  for (std::size_t f = 0; f < nf; ++f) {
    const SideRef prim = side_ref(d, pattern, f, 0);
    const SideRef sec = side_ref(d, pattern, f, 1);
    const std::size_t M = lay.M[f];
    if (prim.len != M || sec.len != M)
      throw Error("ShiftSearchFailed", "crossing counts disagree across a curve");
    for (std::size_t t = 0; t < M; ++t) {
      const std::size_t tp = region_of_seg(pattern[prim.pants], prim.role, t);
      const std::size_t ts = region_of_seg(pattern[sec.pants], sec.role,
                                           (shift[f] + M - t - 1) % M);
      cx.add_edge(lay.vbase[prim.pants] + tp, lay.vbase[sec.pants] + ts);
      sc.edge_kind.push_back(SurfaceEdgeKind::Cut);
      sc.edge_curve.push_back(f);
    }
  }

  for (std::size_t P = 0; P < np; ++P) {
    const PantsPattern& pp = pattern[P];
    const std::size_t p = pp.p, q = pp.q;
    const PantsSlot& ls = d.pants[P].slot[static_cast<std::size_t>(pp.lone)];
    const bool lone_out = Int(ls.sign) * x.value[ls.curve] > 0;
    for (std::size_t a = 0; a < p + q; ++a) {
      struct EndPt {
        Role role;
        std::size_t pos, len;
      };
      const EndPt lo{Role::Lone, a, p + q};
      const EndPt fa = a < p ? EndPt{Role::Fam0, p - 1 - a, p}
                             : EndPt{Role::Fam1, q - 1 - (a - p), q};
      const EndPt out = lone_out ? lo : fa;
      const EndPt in = lone_out ? fa : lo;
      const std::size_t left = region_of_seg(pp, out.role, out.pos);
      const std::size_t right =
          region_of_seg(pp, out.role, (out.pos + out.len - 1) % out.len);
      const std::size_t left2 =
          region_of_seg(pp, in.role, (in.pos + in.len - 1) % in.len);
      const std::size_t right2 = region_of_seg(pp, in.role, in.pos);
      if (left != left2 || right != right2)
        throw Error("ShiftSearchFailed", "band regions disagree across an arc");
      cx.add_edge(lay.vbase[P] + right, lay.vbase[P] + left);
      sc.edge_kind.push_back(SurfaceEdgeKind::Bind);
      sc.edge_curve.push_back(no_cell);
    }
  }

  for (std::size_t f = 0; f < nf; ++f) {
    const SideRef prim = side_ref(d, pattern, f, 0);
    const SideRef sec = side_ref(d, pattern, f, 1);
    const int eta =
        d.pants[prim.pants].slot[static_cast<std::size_t>(prim.slot)].sign;
    const bool out_primary = Int(eta) * x.value[f] > 0;
    const bool R = !out_primary;
    const std::size_t M = lay.M[f];
    for (std::size_t k = 0; k < M; ++k) {
      const std::size_t kk = (shift[f] + M - k) % M;
      const std::size_t alpha =
          lay.bind_edge(prim.pants, arc_at(pattern[prim.pants], prim.role, k));
      const std::size_t beta =
          lay.bind_edge(sec.pants, arc_at(pattern[sec.pants], sec.role, kk));
      cx.add_square({alpha, beta, lay.cut_edge(f, (k + M - 1) % M),
                     lay.cut_edge(f, k)},
                    {R, R, false, false});
      sc.square_curve.push_back(f);
    }
  }

  // Bind edges belong to one immersed curve each; label the components.
  std::vector<std::size_t> parent(lay.total_arcs);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (const CubeComplex::SquareCell& s : cx.squares) {
    const std::size_t a = find(s.side[0] - lay.total_cut);
    const std::size_t b = find(s.side[1] - lay.total_cut);
    if (a != b) parent[a] = b;
  }
  std::vector<std::size_t> label(lay.total_arcs, no_cell);
  std::size_t next = 0;
  for (std::size_t arc = 0; arc < lay.total_arcs; ++arc) {
    const std::size_t r = find(arc);
    if (label[r] == no_cell) label[r] = next++;
    sc.edge_curve[lay.total_cut + arc] = label[r];
  }
  return sc;
}

// ---------------------------------------------------------------------------
// homology class of the assembled system

// Model class represented by the bind curves of a built complex. The cycle
// lattice is coordinatized by a spanning forest; the level curve pushed off
// itself and the bind curve parallel to each cut curve are read off as
// chains, and the part of the level class lying in the span of the curve
// classes is extracted through the Smith form of the bind classes. The
// complementary half of the model basis is fixed by the cell pairing numbers
// of the level chain. Every step is checked and failures throw
// Error("ShiftSearchFailed").
IntVec system_class(const SurfaceModel& m, const ConfigGraph& g,
                    const PantsDecomposition& d, const XiData& x,
                    const std::vector<PantsPattern>& pattern,
                    const CubeComplex& cx, const Layout& lay) {
  const std::size_t nf = d.curves.size();
  const std::size_t E = cx.edges.size(), V = cx.vertices, Q = cx.squares.size();
  const std::size_t dim = m.form.rows;
  auto fail = [](const std::string& what) {
    return Error("ShiftSearchFailed", what);
  };

  // spanning forest of the region graph
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(V);
  for (std::size_t e = 0; e < E; ++e) {
    const auto& ends = cx.edges[e].ends;
    adj[ends[0]].push_back({e, ends[1]});
    if (ends[1] != ends[0]) adj[ends[1]].push_back({e, ends[0]});
  }
  std::vector<char> seen(V, 0), in_tree(E, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (const auto& [e, w] : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        in_tree[e] = 1;
        stack.push_back(w);
      }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw fail("region graph is disconnected");
  std::vector<std::size_t> nontree;
  for (std::size_t e = 0; e < E; ++e)
    if (!in_tree[e]) nontree.push_back(e);
  const std::size_t z1 = nontree.size();
  if (z1 != E - V + 1) throw fail("cycle rank mismatch");

  auto coords = [&](const std::vector<Int>& chain) {
    std::vector<Int> acc(V, Int(0));
    for (std::size_t e = 0; e < E; ++e)
      if (chain[e] != 0) {
        acc[cx.edges[e].ends[1]] += chain[e];
        acc[cx.edges[e].ends[0]] -= chain[e];
      }
    for (const Int& a : acc)
      if (a != 0) throw fail("chain is not a cycle");
    IntVec c(z1);
    for (std::size_t i = 0; i < z1; ++i) c[i] = chain[nontree[i]];
    return c;
  };

  IntMat d2(z1, Q);
  for (std::size_t s = 0; s < Q; ++s) {
    const CubeComplex::SquareCell& sq = cx.squares[s];
    std::vector<Int> ch(E, Int(0));
    ch[sq.side[2]] += sq.rev[2] ? -1 : 1;
    ch[sq.side[1]] += sq.rev[1] ? -1 : 1;
    ch[sq.side[3]] += sq.rev[3] ? 1 : -1;
    ch[sq.side[0]] += sq.rev[0] ? 1 : -1;
    const IntVec c = coords(ch);
    for (std::size_t i = 0; i < z1; ++i) d2(i, s) = c[i];
  }
  const Smith s2 = smith_normal_form(d2);
  std::size_t r2 = 0;
  while (r2 < std::min(z1, Q) && s2.d(r2, r2) != 0) ++r2;
  for (std::size_t i = 0; i < r2; ++i)
    if (iabs(s2.d(i, i)) != 1) throw fail("square boundaries span with torsion");
  if (Q - r2 != 1) throw fail("unexpected rank of the square boundaries");
  const std::size_t hdim = z1 - r2;
  if (hdim != dim) throw fail("homology rank disagrees with the model");
  auto hcoords = [&](const IntVec& c) {
    IntVec out(hdim);
    for (std::size_t i = 0; i < hdim; ++i) {
      Int acc = 0;
      for (std::size_t j = 0; j < z1; ++j) acc += s2.u(r2 + i, j) * c[j];
      out[i] = acc;
    }
    return out;
  };

  std::vector<int> eta_p(nf);
  std::vector<char> outp(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const CutCurve& cv = d.curves[f];
    const int ep =
        d.pants[cv.side[0].pants].slot[static_cast<std::size_t>(cv.side[0].slot)].sign;
    const int es =
        d.pants[cv.side[1].pants].slot[static_cast<std::size_t>(cv.side[1].slot)].sign;
    if (ep == 0 || ep + es != 0) throw fail("curve sides do not oppose");
    eta_p[f] = ep;
    outp[f] = Int(ep) * x.value[f] > 0;
  }

  // the level curve, pushed off the bind curves: one strand per cut segment
  std::vector<Int> wch(E, Int(0));
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t t = 0; t < lay.M[f]; ++t)
      wch[lay.cut_edge(f, t)] = outp[f] ? 1 : -1;

  IntMat zp(nf, hdim);
  std::vector<Int> pairing(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const SideRef prim = side_ref(d, pattern, f, 0);
    std::vector<Int> zch(E, Int(0));
    const int s = sgn(x.value[f]);
    for (std::size_t k = 0; k < lay.M[f]; ++k)
      zch[lay.bind_edge(prim.pants, arc_at(pattern[prim.pants], prim.role, k))] += s;
    Int P = 0;
    for (std::size_t t = 0; t < lay.M[f]; ++t) P += wch[lay.cut_edge(f, t)];
    P *= eta_p[f];
    if (P != x.value[f]) throw fail("level pairing failed its self-check");
    pairing[f] = P;
    const IntVec hz = hcoords(coords(zch));
    for (std::size_t j = 0; j < hdim; ++j) zp(f, j) = hz[j];
  }
  const IntVec h = hcoords(coords(wch));

  const Smith sz = smith_normal_form(zp);
  std::size_t r = 0;
  while (r < std::min(nf, hdim) && sz.d(r, r) != 0) ++r;
  for (std::size_t i = r; i < nf; ++i) {
    IntVec rel(dim, Int(0));
    for (std::size_t f = 0; f < nf; ++f)
      if (sz.u(i, f) != 0)
        for (std::size_t t = 0; t < dim; ++t)
          rel[t] += sz.u(i, f) * d.curves[f].cls[t];
    for (const Int& e : rel)
      if (e != 0) throw fail("curve relation fails in the model");
  }
  IntVec c(hdim);
  for (std::size_t j = 0; j < hdim; ++j) {
    Int acc = 0;
    for (std::size_t i = 0; i < hdim; ++i) acc += h[i] * sz.v(i, j);
    c[j] = acc;
  }
  IntVec psi(dim, Int(0));
  for (std::size_t i = 0; i < r; ++i) {
    IntVec K(dim, Int(0));
    for (std::size_t f = 0; f < nf; ++f)
      if (sz.u(i, f) != 0)
        for (std::size_t t = 0; t < dim; ++t)
          K[t] += sz.u(i, f) * d.curves[f].cls[t];
    for (std::size_t t = 0; t < dim; ++t) {
      const Int num = c[i] * K[t];
      if (num % sz.d(i, i) != 0)
        throw fail("level class is not integral over the curve span");
      psi[t] += num / sz.d(i, i);
    }
  }

  // symplectic partners of the curve span, fixed by the pairing numbers
  std::size_t hspan = 0;
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    hspan += 2 * g.genus(v).convert_to<std::size_t>();
  for (std::size_t f = 0; f < nf; ++f) {
    const CutCurve& cv = d.curves[f];
    if (cv.edge != no_cell) {
      if (m.z_index[cv.edge] != SurfaceModel::npos)
        psi[m.z_index[cv.edge] + 1] = -pairing[f];
      continue;
    }
    std::size_t nz = no_cell;
    bool unit = true;
    for (std::size_t t = 0; t < dim && unit; ++t) {
      if (cv.cls[t] == 0) continue;
      if (nz != no_cell || cv.cls[t] != 1) unit = false;
      nz = t;
    }
    if (unit && nz != no_cell && nz < hspan && nz % 2 == 0)
      psi[nz + 1] = -pairing[f];
  }
  return psi;
}

void check_level(const CutBindSystem& s, std::size_t j) {
  if (j < 1 || j > s.xi.n + 2)
    throw Error("IndexOutOfRange", "level " + std::to_string(j) +
                                       " outside 1.." + std::to_string(s.xi.n + 2));
}

}  // namespace

PantsDecomposition pants_subordinate(const SurfaceModel& m, const ConfigGraph& g) {
  PantsDecomposition d;
  push_edge_curves(m, g, d);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (!survives(m, g, to_rat(d.curves[e].cls)))
      throw Error("SurvivalPreconditionFailed",
                  "gluing curve '" + g.edges[e].id + "' dies in the mapping torus");
  for (std::size_t v = 0; v < g.vertices.size(); ++v) chop_piece(m, g, v, d);
  return d;
}

std::vector<IntVec> piece_curves(const SurfaceModel& m, const ConfigGraph& g,
                                 std::size_t v) {
  PantsDecomposition d;
  push_edge_curves(m, g, d);
  const std::size_t before = d.curves.size();
  chop_piece(m, g, v, d);
  std::vector<IntVec> out;
  for (std::size_t i = before; i < d.curves.size(); ++i)
    out.push_back(d.curves[i].cls);
  return out;
}

XiData xi_select(const SurfaceModel& m, const ConfigGraph& g,
                 const PantsDecomposition& d) {
  const std::size_t nc = d.curves.size();
  const std::vector<IntVec> basis = invariant_functionals(m, g);
  if (basis.empty() || nc == 0)
    throw Error("NoNondegenerateXi", "no invariant functionals");
  const std::size_t nb = basis.size();
  IntMat V(nb, nc);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t c = 0; c < nc; ++c) V(i, c) = dot(basis[i], d.curves[c].cls);

  // lattice of realizable per-curve value rows
  const Smith sv = smith_normal_form(V);
  std::size_t r = 0;
  while (r < std::min(nb, nc) && sv.d(r, r) != 0) ++r;
  if (r == 0)
    throw Error("NoNondegenerateXi", "invariant functionals vanish on the system");
  const IntMat vinv = unimodular_inverse(sv.v);
  std::vector<IntVec> gen(r, IntVec(nc));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t c = 0; c < nc; ++c) gen[i][c] = sv.d(i, i) * vinv(i, c);
  for (std::size_t c = 0; c < nc; ++c) {
    bool hit = false;
    for (std::size_t i = 0; i < r && !hit; ++i) hit = gen[i][c] != 0;
    if (!hit)
      throw Error("NoNondegenerateXi", "a curve takes no invariant value");
  }

  // smallest power combination of the generators avoiding every zero entry
  IntVec w;
  const unsigned long bound = static_cast<unsigned long>(nc * r + 2);
  for (unsigned long t = 1; t <= bound && w.empty(); ++t) {
    IntVec cand(nc, Int(0));
    Int pw = 1;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t c = 0; c < nc; ++c) cand[c] += pw * gen[i][c];
      pw *= t;
    }
    if (std::find(cand.begin(), cand.end(), Int(0)) == cand.end())
      w = std::move(cand);
  }
  if (w.empty())
    throw Error("NoNondegenerateXi", "no combination avoided the zero locus");
  if (w[0] < 0)
    for (Int& e : w) e = -e;

  const std::optional<IntVec> y = int_solve(transpose(V), w);
  if (!y) throw Error("NoNondegenerateXi", "value vector escaped the lattice");
  XiData out;
  out.xi.assign(m.form.rows, Int(0));
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t t = 0; t < m.form.rows; ++t) out.xi[t] += (*y)[i] * basis[i][t];
  out.value = std::move(w);
  out.fiber = fiber_values(m, g, out.xi);

  std::vector<Int> levels = out.fiber;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.size() < 2)
    throw Error("NoNondegenerateXi", "fiber values collapse to one level");
  out.t.reserve(levels.size());
  for (const Int& l : levels) out.t.push_back(-l);
  out.index.reserve(out.fiber.size());
  for (const Int& f : out.fiber) {
    const std::size_t at = static_cast<std::size_t>(
        std::lower_bound(levels.begin(), levels.end(), f) - levels.begin());
    out.index.push_back(at + 1);
  }
  out.n = levels.size() - 2;
  return out;
}

ArcPattern pants_arc_pattern(const Int& m, const Int& m1, const Int& m2) {
  if (m == 0 || m1 == 0 || m2 == 0) throw Error("BadTriple", "zero boundary value");
  if (sgn(m1) != sgn(m2) || sgn(m) == sgn(m1))
    throw Error("BadTriple", "lone value must oppose the paired values");
  if (m + m1 + m2 != 0) throw Error("BadTriple", "boundary values do not balance");
  ArcPattern a{m, m1, m2, 0, 0};
  a.p = iabs(m1).convert_to<std::size_t>();
  a.q = iabs(m2).convert_to<std::size_t>();
  return a;
}

CutBindSystem assemble_cut_bind(const SurfaceModel& m, const ConfigGraph& g,
                                PantsDecomposition d, XiData x) {
  const std::size_t nf = d.curves.size();
  const std::size_t dim = m.form.rows;
  if (x.value.size() != nf)
    throw Error("ShiftSearchFailed", "functional and decomposition disagree");
  std::vector<PantsPattern> pattern = derive_patterns(d, x);

  const std::vector<std::size_t> zero(nf, 0);
  Layout lay;
  const SurfaceComplex sc0 = build_complex(d, x, pattern, zero, lay);
  const IntVec psi0 = system_class(m, g, d, x, pattern, sc0.complex, lay);

  const IntVec target = mul(m.form, x.xi);
  IntVec defect(dim);
  for (std::size_t t = 0; t < dim; ++t) defect[t] = target[t] - psi0[t];

  // dragging the secondary side of curve f one step adds its slot sign times
  // the curve class
  IntMat drag(dim, nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const CutCurve::Side& s = d.curves[f].side[1];
    const int es = d.pants[s.pants].slot[static_cast<std::size_t>(s.slot)].sign;
    for (std::size_t t = 0; t < dim; ++t) drag(t, f) = Int(es) * d.curves[f].cls[t];
  }
  const std::optional<IntVec> sol = int_solve(drag, defect);
  if (!sol)
    throw Error("ShiftSearchFailed", "no integral shift matches the duality class");
  const IntVec& s = *sol;

  std::vector<std::size_t> shift(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const Int M(static_cast<unsigned long>(lay.M[f]));
    Int rem = s[f] % M;
    if (rem < 0) rem += M;
    shift[f] = rem.convert_to<std::size_t>();
  }

  Layout lay1;
  const SurfaceComplex sc1 = build_complex(d, x, pattern, shift, lay1);
  const IntVec psi1 = system_class(m, g, d, x, pattern, sc1.complex, lay1);
  // The complex sees a shift only modulo its crossing count, so the recovered
  // class is periodic while the true marked class is affine: wrapping one
  // curve by a full period twists the marking and moves the class by the
  // period times the drag vector. The rebuilt class must therefore match the
  // prediction up to the lattice those period vectors span.
  IntVec resid(dim);
  for (std::size_t t = 0; t < dim; ++t) {
    Int pred = target[t];
    for (std::size_t f = 0; f < nf; ++f)
      pred -= (s[f] - Int(static_cast<unsigned long>(shift[f]))) * drag(t, f);
    resid[t] = pred - psi1[t];
  }
  IntMat period(dim, nf);
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t t = 0; t < dim; ++t)
      period(t, f) = Int(static_cast<unsigned long>(lay.M[f])) * drag(t, f);
  if (!int_solve(period, resid))
    throw Error("ShiftSearchFailed", "rebuilt class is off the twist lattice");
  IntVec w = target;

  CutBindSystem out;
  out.decomp = std::move(d);
  out.xi = std::move(x);
  out.pattern = std::move(pattern);
  out.shift = std::move(shift);
  out.shift_exact = s;
  out.w_class = std::move(w);
  return out;
}

SurfaceComplex surface_square_complex(const CutBindSystem& s) {
  Layout lay;
  return build_complex(s.decomp, s.xi, s.pattern, s.shift, lay);
}

std::vector<EdgeTag> SurfaceComplex::tags() const {
  std::vector<EdgeTag> out;
  out.reserve(edge_kind.size());
  for (std::size_t e = 0; e < edge_kind.size(); ++e) {
    HyperplaneTag t;
    t.kind = edge_kind[e] == SurfaceEdgeKind::Cut ? HyperplaneTag::Cut
                                                  : HyperplaneTag::Bind;
    t.index = static_cast<int>(edge_curve[e]);
    out.push_back({e, t});
  }
  return out;
}

Int curve_divisibility(const ConfigGraph& g, const CutBindSystem& s,
                       std::size_t j, std::size_t curve) {
  check_level(s, j);
  if (curve >= s.decomp.curves.size())
    throw Error("IndexOutOfRange", "curve index");
  const CutCurve& c = s.decomp.curves[curve];
  const std::size_t v =
      c.edge != no_cell ? g.vertex_of(make_end(c.edge, 0)) : c.vertex;
  return gcd(iabs(s.xi.value[curve]), iabs(s.xi.fiber[v] + s.xi.t[j - 1]));
}

Int pants_divisibility(const CutBindSystem& s, std::size_t j, std::size_t pants) {
  check_level(s, j);
  if (pants >= s.decomp.pants.size())
    throw Error("IndexOutOfRange", "pants index");
  const Pants& P = s.decomp.pants[pants];
  const Int a = iabs(s.xi.value[P.slot[0].curve]);
  const Int b = iabs(s.xi.value[P.slot[1].curve]);
  return gcd(gcd(a, b), iabs(s.xi.fiber[P.vertex] + s.xi.t[j - 1]));
}

Int class_divisibility(const CutBindSystem& s, std::size_t j) {
  check_level(s, j);
  Int acc = content(s.xi.xi);
  for (const Int& f : s.xi.fiber) acc = gcd(acc, iabs(f + s.xi.t[j - 1]));
  return acc;
}

Int cover_level(const ConfigGraph& g, const CutBindSystem& s, std::size_t j) {
  check_level(s, j);
  Int acc = 1;
  for (std::size_t c = 0; c < s.decomp.curves.size(); ++c)
    acc = lcm(acc, curve_divisibility(g, s, j, c));
  return acc;
}

}  // namespace npcgm
