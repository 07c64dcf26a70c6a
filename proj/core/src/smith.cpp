#include <npcgm/smith.hpp>

#include <stdexcept>

namespace npcgm {

IntMat int_identity(std::size_t n) {
  IntMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMat transpose(const IntMat& m) {
  IntMat t(m.cols, m.rows);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) t(c, r) = m(r, c);
  return t;
}

IntMat mul(const IntMat& x, const IntMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mul: shape mismatch");
  IntMat z(x.rows, y.cols);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t k = 0; k < x.cols; ++k) {
      if (x(r, k) == 0) continue;
      for (std::size_t c = 0; c < y.cols; ++c) z(r, c) += x(r, k) * y(k, c);
    }
  return z;
}

IntVec mul(const IntMat& x, const IntVec& v) {
  if (x.cols != v.size()) throw std::invalid_argument("mul: shape mismatch");
  IntVec out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < x.cols; ++c)
      if (x(r, c) != 0) out[r] += x(r, c) * v[c];
  return out;
}

namespace {

void row_swap(IntMat& m, std::size_t i, std::size_t j) {
  for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(i, c), m(j, c));
}
void col_swap(IntMat& m, std::size_t i, std::size_t j) {
  for (std::size_t r = 0; r < m.rows; ++r) std::swap(m(r, i), m(r, j));
}
// row i -= f * row j
void row_axpy(IntMat& m, std::size_t i, std::size_t j, const Int& f) {
  for (std::size_t c = 0; c < m.cols; ++c) m(i, c) -= f * m(j, c);
}
void col_axpy(IntMat& m, std::size_t i, std::size_t j, const Int& f) {
  for (std::size_t r = 0; r < m.rows; ++r) m(r, i) -= f * m(r, j);
}
void row_negate(IntMat& m, std::size_t i) {
  for (std::size_t c = 0; c < m.cols; ++c) m(i, c) = -m(i, c);
}

}  // namespace

Smith smith_normal_form(const IntMat& a) {
  Smith s{int_identity(a.rows), a, int_identity(a.cols)};
  IntMat& d = s.d;
  std::size_t n = std::min(a.rows, a.cols);
  for (std::size_t t = 0; t < n; ++t) {
    // Move a nonzero entry of minimal absolute value into position (t, t).
    bool any = false;
    std::size_t pr = t, pc = t;
    for (std::size_t r = t; r < d.rows; ++r)
      for (std::size_t c = t; c < d.cols; ++c) {
        if (d(r, c) == 0) continue;
        if (!any || iabs(d(r, c)) < iabs(d(pr, pc))) {
          pr = r;
          pc = c;
          any = true;
        }
      }
    if (!any) break;
    if (pr != t) {
      row_swap(d, t, pr);
      row_swap(s.u, t, pr);
    }
    if (pc != t) {
      col_swap(d, t, pc);
      col_swap(s.v, t, pc);
    }
    for (;;) {
      bool dirty = false;
      for (std::size_t r = t + 1; r < d.rows; ++r) {
        if (d(r, t) == 0) continue;
        Int q = d(r, t) / d(t, t);
        row_axpy(d, r, t, q);
        row_axpy(s.u, r, t, q);
        if (d(r, t) != 0) {
          // Remainder smaller than the pivot: swap it up and restart.
          row_swap(d, t, r);
          row_swap(s.u, t, r);
          dirty = true;
        }
      }
      for (std::size_t c = t + 1; c < d.cols; ++c) {
        if (d(t, c) == 0) continue;
        Int q = d(t, c) / d(t, t);
        col_axpy(d, c, t, q);
        col_axpy(s.v, c, t, q);
        if (d(t, c) != 0) {
          col_swap(d, t, c);
          col_swap(s.v, t, c);
          dirty = true;
        }
      }
      if (!dirty) {
        bool clean = true;
        for (std::size_t r = t + 1; r < d.rows; ++r)
          if (d(r, t) != 0) clean = false;
        for (std::size_t c = t + 1; c < d.cols; ++c)
          if (d(t, c) != 0) clean = false;
        if (clean) break;
      }
    }
    // Enforce divisibility of the remaining block by the pivot.
    for (;;) {
      bool fixed = true;
      for (std::size_t r = t + 1; r < d.rows && fixed; ++r)
        for (std::size_t c = t + 1; c < d.cols && fixed; ++c) {
          if (d(r, c) % d(t, t) != 0) {
            // Fold row r into row t and re-reduce.
            row_axpy(d, t, r, Int(-1));
            row_axpy(s.u, t, r, Int(-1));
            fixed = false;
          }
        }
      if (fixed) break;
      for (;;) {
        bool dirty = false;
        for (std::size_t c = t + 1; c < d.cols; ++c) {
          if (d(t, c) == 0) continue;
          Int q = d(t, c) / d(t, t);
          col_axpy(d, c, t, q);
          col_axpy(s.v, c, t, q);
          if (d(t, c) != 0) {
            col_swap(d, t, c);
            col_swap(s.v, t, c);
            dirty = true;
          }
        }
        for (std::size_t r = t + 1; r < d.rows; ++r) {
          if (d(r, t) == 0) continue;
          Int q = d(r, t) / d(t, t);
          row_axpy(d, r, t, q);
          row_axpy(s.u, r, t, q);
          if (d(r, t) != 0) {
            row_swap(d, t, r);
            row_swap(s.u, t, r);
            dirty = true;
          }
        }
        if (!dirty) break;
      }
    }
    if (d(t, t) < 0) {
      row_negate(d, t);
      row_negate(s.u, t);
    }
  }
  return s;
}

std::size_t int_rank(const IntMat& a) {
  Smith s = smith_normal_form(a);
  std::size_t r = 0;
  std::size_t n = std::min(a.rows, a.cols);
  for (std::size_t i = 0; i < n; ++i)
    if (s.d(i, i) != 0) ++r;
  return r;
}

std::vector<IntVec> int_row_kernel(const IntMat& a) {
  Smith s = smith_normal_form(a);
  std::size_t n = std::min(a.rows, a.cols);
  std::vector<IntVec> basis;
  for (std::size_t i = 0; i < a.rows; ++i) {
    bool zero_row = i >= n || s.d(i, i) == 0;
    if (!zero_row) continue;
    IntVec v(a.rows);
    for (std::size_t c = 0; c < a.rows; ++c) v[c] = s.u(i, c);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<IntVec> int_solve(const IntMat& a, const IntVec& b) {
  if (a.rows != b.size()) throw std::invalid_argument("int_solve: shape mismatch");
  Smith s = smith_normal_form(a);
  IntVec ub = mul(s.u, b);
  std::size_t n = std::min(a.rows, a.cols);
  IntVec z(a.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    if (i < n && s.d(i, i) != 0) {
      if (ub[i] % s.d(i, i) != 0) return std::nullopt;
      z[i] = ub[i] / s.d(i, i);
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return mul(s.v, z);
}

bool in_column_lattice(const IntMat& a, const IntVec& b) { return int_solve(a, b).has_value(); }

std::vector<Int> invariant_factors(const IntMat& a) {
  Smith s = smith_normal_form(a);
  std::vector<Int> out;
  std::size_t n = std::min(a.rows, a.cols);
  for (std::size_t i = 0; i < n; ++i)
    if (s.d(i, i) != 0) out.push_back(s.d(i, i));
  return out;
}

}  // namespace npcgm
