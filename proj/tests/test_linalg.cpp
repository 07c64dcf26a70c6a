#include <npcgm/linalg.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace npcgm;

namespace {

RatMat mat(std::size_t r, std::size_t c, std::vector<long> entries) {
  RatMat m(r, c);
  for (std::size_t i = 0; i < entries.size(); ++i) m.a[i] = entries[i];
  return m;
}

RatVec vec(std::vector<long> entries) {
  RatVec v;
  for (long e : entries) v.emplace_back(e);
  return v;
}

}  // namespace

TEST_CASE("rational helpers") {
  Rat q(6, 4);
  CHECK(num(q) == 3);
  CHECK(den(q) == 2);
  CHECK(to_string(q) == "3/2");
  CHECK(to_string(Rat(-5)) == "-5");
  CHECK(sgn(Rat(0)) == 0);
  CHECK(sgn(Rat(-1, 7)) == -1);
  CHECK(iabs(Int(-12)) == 12);
  CHECK(gcd(Int(12), Int(-18)) == 6);
  CHECK(lcm(Int(4), Int(6)) == 12);
}

TEST_CASE("content and primitive scaling") {
  CHECK(content({Int(6), Int(-9), Int(15)}) == 3);
  CHECK(content({Int(0), Int(0)}) == 0);

  auto p = primitive_integer_vector({Rat(3, 2), Rat(-1), Rat(1, 2)});
  REQUIRE(p.size() == 3);
  CHECK(p[0] == 3);
  CHECK(p[1] == -2);
  CHECK(p[2] == 1);

  // Entries with a common factor shrink to coprime form.
  auto q = primitive_integer_vector({Rat(4), Rat(-6)});
  CHECK(q[0] == 2);
  CHECK(q[1] == -3);

  auto z = primitive_integer_vector({Rat(0), Rat(0)});
  CHECK(z[0] == 0);
  CHECK(z[1] == 0);
}

TEST_CASE("matrix products") {
  RatMat a = mat(2, 3, {1, 2, 3, 4, 5, 6});
  RatMat b = mat(3, 2, {7, 8, 9, 10, 11, 12});
  RatMat c = mul(a, b);
  CHECK(c(0, 0) == 58);
  CHECK(c(0, 1) == 64);
  CHECK(c(1, 0) == 139);
  CHECK(c(1, 1) == 154);

  RatVec x = mul(a, vec({1, 0, -1}));
  CHECK(x[0] == -2);
  CHECK(x[1] == -2);

  RatVec y = mul_left(vec({1, -1}), a);
  CHECK(y[0] == -3);
  CHECK(y[1] == -3);
  CHECK(y[2] == -3);

  RatMat t = transpose(a);
  CHECK(t.rows == 3);
  CHECK(t(2, 1) == 6);

  CHECK_THROWS_AS(mul(a, a), std::invalid_argument);
}

TEST_CASE("rref and rank") {
  RatMat m = mat(3, 4, {1, 2, 0, 3,
                        2, 4, 1, 7,
                        1, 2, 1, 4});
  auto pivots = rref_in_place(m);
  REQUIRE(pivots.size() == 2);
  CHECK(pivots[0] == 0);
  CHECK(pivots[1] == 2);
  // Echelon content: x1 + 2 x2 + 3 x4 = ..., x3 + x4 = ...
  CHECK(m(0, 0) == 1);
  CHECK(m(0, 1) == 2);
  CHECK(m(0, 2) == 0);
  CHECK(m(0, 3) == 3);
  CHECK(m(1, 2) == 1);
  CHECK(m(1, 3) == 1);
  for (std::size_t c = 0; c < 4; ++c) CHECK(m(2, c) == 0);

  CHECK(rank(mat(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1})) == 3);
  CHECK(rank(mat(2, 2, {1, 2, 2, 4})) == 1);
  CHECK(rank(RatMat(0, 5)) == 0);
}

TEST_CASE("nullspace") {
  RatMat m = mat(1, 3, {1, 1, 1});
  auto basis = nullspace(m);
  REQUIRE(basis.size() == 2);
  for (const auto& v : basis) CHECK(is_zero(mul(m, v)));

  // Rank-2 map on Q^3: kernel is one line.
  RatMat k = mat(2, 3, {1, 2, 3, 0, 1, 1});
  auto kb = nullspace(k);
  REQUIRE(kb.size() == 1);
  CHECK(is_zero(mul(k, kb[0])));
  CHECK_FALSE(is_zero(kb[0]));

  CHECK(nullspace(mat(2, 2, {1, 0, 0, 1})).empty());

  auto lb = left_nullspace(mat(3, 1, {1, 1, 1}));
  REQUIRE(lb.size() == 2);
  for (const auto& v : lb) {
    RatMat row(1, 3);
    for (std::size_t i = 0; i < 3; ++i) row(0, i) = v[i];
    CHECK(is_zero(mul(row, vec({1, 1, 1}))));
  }
}

TEST_CASE("solve") {
  RatMat m = mat(2, 2, {1, 2, 3, 4});
  auto x = solve(m, vec({5, 6}));
  REQUIRE(x.has_value());
  CHECK((*x)[0] == -4);
  CHECK((*x)[1] == Rat(9, 2));

  CHECK_FALSE(solve(mat(2, 2, {1, 1, 1, 1}), vec({0, 1})).has_value());

  // Underdetermined but consistent.
  auto u = solve(mat(1, 2, {2, 3}), vec({7}));
  REQUIRE(u.has_value());
  CHECK(2 * (*u)[0] + 3 * (*u)[1] == 7);

  CHECK(in_column_span(mat(3, 2, {1, 0, 0, 1, 0, 0}), vec({2, 3, 0})));
  CHECK_FALSE(in_column_span(mat(3, 2, {1, 0, 0, 1, 0, 0}), vec({0, 0, 1})));
}
