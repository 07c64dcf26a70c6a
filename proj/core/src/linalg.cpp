#include <npcgm/linalg.hpp>

#include <sstream>
#include <stdexcept>

namespace npcgm {

Int content(const std::vector<Int>& v) {
  Int g = 0;
  for (const Int& x : v) g = gcd(g, x);
  return iabs(g);
}

std::vector<Int> primitive_integer_vector(const std::vector<Rat>& v) {
  Int scale = 1;
  for (const Rat& q : v) scale = lcm(scale, den(q));
  std::vector<Int> w;
  w.reserve(v.size());
  for (const Rat& q : v) w.push_back(Int(num(q) * (scale / den(q))));
  Int g = content(w);
  if (g > 1)
    for (Int& x : w) x /= g;
  return w;
}

std::string to_string(const Rat& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

RatMat rat_identity(std::size_t n) {
  RatMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMat transpose(const RatMat& m) {
  RatMat t(m.cols, m.rows);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) t(c, r) = m(r, c);
  return t;
}

RatMat mul(const RatMat& x, const RatMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mul: shape mismatch");
  RatMat z(x.rows, y.cols);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const Rat& xv = x(r, k);
      if (xv == 0) continue;
      for (std::size_t c = 0; c < y.cols; ++c) z(r, c) += xv * y(k, c);
    }
  return z;
}

RatVec mul(const RatMat& x, const RatVec& v) {
  if (x.cols != v.size()) throw std::invalid_argument("mul: shape mismatch");
  RatVec out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < x.cols; ++c)
      if (x(r, c) != 0) out[r] += x(r, c) * v[c];
  return out;
}

RatVec mul_left(const RatVec& v, const RatMat& x) {
  if (x.rows != v.size()) throw std::invalid_argument("mul_left: shape mismatch");
  RatVec out(x.cols);
  for (std::size_t r = 0; r < x.rows; ++r)
    if (v[r] != 0)
      for (std::size_t c = 0; c < x.cols; ++c) out[c] += v[r] * x(r, c);
  return out;
}

bool is_zero(const RatVec& v) {
  for (const Rat& q : v)
    if (q != 0) return false;
  return true;
}

std::vector<std::size_t> rref_in_place(RatMat& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t p = row;
    while (p < m.rows && m(p, col) == 0) ++p;
    if (p == m.rows) continue;
    if (p != row)
      for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(p, c), m(row, c));
    Rat inv = Rat(1) / m(row, col);
    for (std::size_t c = 0; c < m.cols; ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == row || m(r, col) == 0) continue;
      Rat f = m(r, col);
      for (std::size_t c = 0; c < m.cols; ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(RatMat m) { return rref_in_place(m).size(); }

std::vector<RatVec> nullspace(const RatMat& m) {
  RatMat r = m;
  std::vector<std::size_t> pivots = rref_in_place(r);
  std::vector<bool> is_pivot(m.cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (std::size_t freec = 0; freec < m.cols; ++freec) {
    if (is_pivot[freec]) continue;
    RatVec v(m.cols);
    v[freec] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, freec);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<RatVec> left_nullspace(const RatMat& m) { return nullspace(transpose(m)); }

std::optional<RatVec> solve(const RatMat& m, const RatVec& b) {
  if (m.rows != b.size()) throw std::invalid_argument("solve: shape mismatch");
  RatMat aug(m.rows, m.cols + 1);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) aug(r, c) = m(r, c);
    aug(r, m.cols) = b[r];
  }
  std::vector<std::size_t> pivots = rref_in_place(aug);
  for (std::size_t c : pivots)
    if (c == m.cols) return std::nullopt;  // inconsistent system
  RatVec x(m.cols);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols);
  return x;
}

bool in_column_span(const RatMat& m, const RatVec& b) { return solve(m, b).has_value(); }

}  // namespace npcgm
