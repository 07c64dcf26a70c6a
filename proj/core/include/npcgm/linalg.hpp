#pragma once

#include <npcgm/rational.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace npcgm {

using RatVec = std::vector<Rat>;

// Dense row-major rational matrix, sized for desk-scale exact computations.
struct RatMat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rat> a;

  RatMat() = default;
  RatMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  Rat& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const Rat& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

RatMat rat_identity(std::size_t n);
RatMat transpose(const RatMat& m);
RatMat mul(const RatMat& x, const RatMat& y);
RatVec mul(const RatMat& x, const RatVec& v);
RatVec mul_left(const RatVec& v, const RatMat& x);  // row vector times matrix
bool is_zero(const RatVec& v);

// Reduced row echelon form in place; returns pivot column indices.
std::vector<std::size_t> rref_in_place(RatMat& m);

std::size_t rank(RatMat m);

// Basis of {x : m x = 0}.
std::vector<RatVec> nullspace(const RatMat& m);

// Basis of {x : x m = 0}.
std::vector<RatVec> left_nullspace(const RatMat& m);

// One solution of m x = b, if any.
std::optional<RatVec> solve(const RatMat& m, const RatVec& b);

// Whether b lies in the column span of m.
bool in_column_span(const RatMat& m, const RatVec& b);

}  // namespace npcgm
