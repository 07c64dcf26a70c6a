#pragma once

#include <npcgm/rational.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace npcgm {

using IntVec = std::vector<Int>;

struct IntMat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Int> a;

  IntMat() = default;
  IntMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  Int& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

IntMat int_identity(std::size_t n);
IntMat transpose(const IntMat& m);
IntMat mul(const IntMat& x, const IntMat& y);
IntVec mul(const IntMat& x, const IntVec& v);

// u * a * v = d with u, v unimodular and d diagonal, d[i] | d[i+1].
struct Smith {
  IntMat u, d, v;
};
Smith smith_normal_form(const IntMat& a);

std::size_t int_rank(const IntMat& a);

// Saturated basis of {x row vector : x a = 0} over the integers.
std::vector<IntVec> int_row_kernel(const IntMat& a);

// One integer solution of a x = b, if any.
std::optional<IntVec> int_solve(const IntMat& a, const IntVec& b);

// Whether b lies in the lattice spanned by the columns of a.
bool in_column_lattice(const IntMat& a, const IntVec& b);

// Invariant factors d_1 | d_2 | ... (nonzero diagonal of the Smith form).
std::vector<Int> invariant_factors(const IntMat& a);

}  // namespace npcgm
