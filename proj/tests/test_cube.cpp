#include <npcgm/cube.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace npcgm;

namespace {

// One vertex, two loops a and b, one square reading the commutator: sides
// left=b, right=b, bottom=a, top=a, every facet aligned with its edge.
CubeComplex torus() {
  CubeComplex x;
  x.vertices = 1;
  std::size_t a = x.add_edge(0, 0);
  std::size_t b = x.add_edge(0, 0);
  x.add_square({b, b, a, a});
  return x;
}

// Same square with the right-hand copy of b glued backwards.
CubeComplex klein() {
  CubeComplex x;
  x.vertices = 1;
  std::size_t a = x.add_edge(0, 0);
  std::size_t b = x.add_edge(0, 0);
  x.add_square({b, b, a, a}, {false, true, false, false});
  return x;
}

// One vertex, loops a, b, c; the square runs a then c against c then b, so
// the a and b midcubes join into a single hyperplane.
CubeComplex doubled_loop() {
  CubeComplex x;
  x.vertices = 1;
  std::size_t a = x.add_edge(0, 0);
  std::size_t b = x.add_edge(0, 0);
  std::size_t c = x.add_edge(0, 0);
  x.add_square({c, c, a, b});
  return x;
}

// All four sides on one loop: the link acquires loop edges at two corners.
CubeComplex one_loop_square() {
  CubeComplex x;
  x.vertices = 1;
  std::size_t e = x.add_edge(0, 0);
  x.add_square({e, e, e, e});
  return x;
}

// The bottom edge runs between two vertices while the side loops sit at one
// of them, so two corner routes disagree.
CubeComplex bad_corner() {
  CubeComplex x;
  x.vertices = 2;
  std::size_t e = x.add_edge(0, 1);
  std::size_t f = x.add_edge(0, 0);
  x.add_square({f, f, e, e});
  return x;
}

CubeComplex wedge(std::size_t loops) {
  CubeComplex x;
  x.vertices = 1;
  for (std::size_t i = 0; i < loops; ++i) x.add_edge(0, 0);
  return x;
}

// Solid unit cubes with vertex ids the coordinate bitmasks, edges axis-major
// with the pinned coordinates enumerating within an axis, squares pair-major.
CubeComplex solid1() {
  CubeComplex x;
  x.vertices = 2;
  x.add_edge(0, 1);
  return x;
}

CubeComplex solid2() {
  CubeComplex x;
  x.vertices = 4;
  for (std::size_t m = 0; m < 2; ++m) x.add_edge(2 * m, 1 + 2 * m);  // axis 0
  for (std::size_t m = 0; m < 2; ++m) x.add_edge(m, 2 + m);          // axis 1
  x.add_square({2, 3, 0, 1});
  return x;
}

CubeComplex solid3() {
  CubeComplex x;
  x.vertices = 8;
  for (std::size_t m = 0; m < 4; ++m)
    x.add_edge(2 * (m & 1) + 4 * (m >> 1), 1 + 2 * (m & 1) + 4 * (m >> 1));  // axis 0
  for (std::size_t m = 0; m < 4; ++m)
    x.add_edge((m & 1) + 4 * (m >> 1), 2 + (m & 1) + 4 * (m >> 1));  // axis 1
  for (std::size_t m = 0; m < 4; ++m) x.add_edge(m, 4 + m);          // axis 2
  for (std::size_t t = 0; t < 2; ++t)  // axes 0,1 at height t
    x.add_square({4 + 2 * t, 5 + 2 * t, 2 * t, 1 + 2 * t});
  for (std::size_t t = 0; t < 2; ++t)  // axes 0,2
    x.add_square({8 + 2 * t, 9 + 2 * t, t, t + 2});
  for (std::size_t t = 0; t < 2; ++t)  // axes 1,2
    x.add_square({8 + t, 10 + t, 4 + t, 6 + t});
  x.add_cube({4, 5, 2, 3, 0, 1});
  return x;
}

CrossingGraph plain_graph(std::size_t nodes, std::vector<std::array<std::size_t, 2>> edges) {
  CrossingGraph g;
  g.nodes = nodes;
  std::sort(edges.begin(), edges.end());
  g.edges = std::move(edges);
  g.witness_square.assign(g.edges.size(), no_cell);
  return g;
}

std::size_t count_kind(const std::vector<Witness>& ws, Witness::Kind k) {
  std::size_t n = 0;
  for (const auto& w : ws)
    if (w.kind == k) ++n;
  return n;
}

bool mentions(const std::vector<Violation>& vs, const std::string& kind) {
  for (const auto& v : vs)
    if (v.kind == kind) return true;
  return false;
}

PermutationCover swap_on(const CubeComplex& x, std::initializer_list<std::size_t> edges) {
  PermutationCover pc = trivial_cover(x, 2);
  for (std::size_t e : edges) pc.edge_perm[e] = {1, 0};
  return pc;
}

// Every link of the total space must project bijectively, corners included,
// onto the link downstairs.
void check_link_projection(const CubeComplex& base, const Cover& cv) {
  auto base_links = all_links(base);
  for (const LinkComplex& lk : all_links(cv.total)) {
    const LinkComplex& blk = base_links[base_cell(lk.vertex, cv.degree)];
    std::vector<Dart> proj;
    for (Dart d : lk.darts)
      proj.push_back(make_dart(base_cell(dart_edge(d), cv.degree), dart_end(d)));
    std::sort(proj.begin(), proj.end());
    REQUIRE(proj == blk.darts);

    auto corner_multiset = [](const LinkComplex& l, auto dart_of) {
      std::multiset<std::array<Dart, 2>> out;
      for (const auto& e : l.edges) {
        Dart u = dart_of(l, e.v[0]), v = dart_of(l, e.v[1]);
        out.insert({std::min(u, v), std::max(u, v)});
      }
      return out;
    };
    auto project = [&](const LinkComplex& l, std::size_t i) {
      return make_dart(base_cell(dart_edge(l.darts[i]), cv.degree), dart_end(l.darts[i]));
    };
    auto identity = [](const LinkComplex& l, std::size_t i) { return l.darts[i]; };
    REQUIRE(corner_multiset(lk, project) == corner_multiset(blk, identity));
  }
}

std::size_t dual_edge_total(const Hyperplanes& hs) {
  std::size_t n = 0;
  for (const auto& h : hs.all) n += h.dual_edges.size();
  return n;
}

}  // namespace

TEST_CASE("cell bookkeeping and corners of solid cubes") {
  CubeComplex s1 = solid1(), s2 = solid2(), s3 = solid3();
  CHECK(s1.dimension() == 1);
  CHECK(s2.dimension() == 2);
  CHECK(s3.dimension() == 3);
  CHECK(s1.euler() == 1);
  CHECK(s2.euler() == 1);
  CHECK(s3.euler() == 1);
  CHECK(s3.cell_count(0) == 8);
  CHECK(s3.cell_count(1) == 12);
  CHECK(s3.cell_count(2) == 6);
  CHECK(s3.cell_count(3) == 1);

  // Vertex ids are coordinate masks, so corners recover themselves.
  for (int corner = 0; corner < 4; ++corner)
    CHECK(square_corner_vertex(s2, 0, corner) == static_cast<std::size_t>(corner));
  for (int corner = 0; corner < 8; ++corner)
    CHECK(cube_corner_vertex(s3, 0, corner) == static_cast<std::size_t>(corner));

  // Edges of the 3-cell: axis-major ids, never flipped in this chart.
  for (int axis = 0; axis < 3; ++axis)
    for (int pinned = 0; pinned < 4; ++pinned) {
      auto [e, flip] = cube_edge(s3, 0, axis, pinned);
      CHECK(e == static_cast<std::size_t>(4 * axis + pinned));
      CHECK_FALSE(flip);
    }
}

TEST_CASE("validation accepts the exact cases and reports the broken ones") {
  for (const CubeComplex& x : {torus(), klein(), doubled_loop(), solid1(), solid2(), solid3()}) {
    ValidationReport rep = validate(x);
    CHECK(rep.attachments_ok);
    CHECK(rep.simple);
    CHECK(rep.issues.empty());
  }

  ValidationReport bad = validate(bad_corner());
  CHECK_FALSE(bad.attachments_ok);
  CHECK(mentions(bad.issues, "BadAttachment"));

  // Out-of-range references come back as attachment errors, not crashes.
  CubeComplex loose = wedge(1);
  loose.add_square({0, 0, 0, 5});
  CHECK_FALSE(validate(loose).attachments_ok);

  // Twisting one facet symmetry of the solid cube breaks route agreement.
  CubeComplex warped = solid3();
  warped.cubes[0].map[0].flip[0] = true;
  ValidationReport rep = validate(warped);
  CHECK_FALSE(rep.attachments_ok);
  CHECK(mentions(rep.issues, "BadAttachment"));
}

TEST_CASE("links of the torus and of the solid cube") {
  CubeComplex t = torus();
  LinkComplex lk = link(t, 0);
  REQUIRE(lk.darts.size() == 4);
  REQUIRE(lk.edges.size() == 4);
  CHECK(lk.triangles.empty());
  // Four corners join b-darts to a-darts, one each: a 4-cycle.
  std::set<std::array<std::size_t, 2>> pairs;
  for (const auto& e : lk.edges) {
    CHECK(e.v[0] != e.v[1]);
    pairs.insert(e.v);
  }
  CHECK(pairs.size() == 4);

  CubeComplex s3 = solid3();
  auto links = all_links(s3);
  REQUIRE(links.size() == 8);
  for (const auto& l : links) {
    CHECK(l.darts.size() == 3);
    CHECK(l.edges.size() == 3);
    REQUIRE(l.triangles.size() == 1);
    CHECK(l.triangles[0].v == std::array<std::size_t, 3>{0, 1, 2});
  }
}

TEST_CASE("one loop filling a square is not simple") {
  CubeComplex x = one_loop_square();
  ValidationReport rep = validate(x);
  CHECK(rep.attachments_ok);
  CHECK_FALSE(rep.simple);
  CHECK(mentions(rep.issues, "NonSimplicialLink"));
  // Two corners close up into link loops, and the remaining two double one
  // edge: three findings.
  CHECK(rep.issues.size() == 3);

  CubeFlags f = flags(x);
  CHECK_FALSE(f.simple);
  CHECK_FALSE(f.flag);
}

TEST_CASE("flag condition on tori of each dimension") {
  CubeFlags t = flags(torus());
  CHECK(t.simple);
  CHECK(t.flag);

  // The 3-torus: one vertex whose link is the octahedron, which is flag.
  CubeComplex t3 = salvetti(plain_graph(3, {{0, 1}, {0, 2}, {1, 2}}), 3);
  CHECK(t3.cell_count(1) == 3);
  CHECK(t3.cell_count(2) == 3);
  CHECK(t3.cell_count(3) == 1);
  CHECK(t3.euler() == 0);
  LinkComplex lk = link(t3, 0);
  CHECK(lk.darts.size() == 6);
  CHECK(lk.edges.size() == 12);
  CHECK(lk.triangles.size() == 8);
  CubeFlags f3 = flags(t3);
  CHECK(f3.simple);
  CHECK(f3.flag);

  // Dropping the 3-cell leaves empty triangles at every joined triple.
  CubeComplex hollow = salvetti(plain_graph(3, {{0, 1}, {0, 2}, {1, 2}}), 2);
  CubeFlags fh = flags(hollow);
  CHECK(fh.simple);
  CHECK_FALSE(fh.flag);

  // Four pairwise commuting generators: triangles fill at the cap, but the
  // joined quadruple has no 3-simplex to span.
  CubeComplex k4 = salvetti(
      plain_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), 3);
  CHECK(k4.cell_count(3) == 4);
  CubeFlags f4 = flags(k4);
  CHECK(f4.simple);
  CHECK_FALSE(f4.flag);
  CHECK(specialness(k4).special);
}

TEST_CASE("hyperplanes of the basic squares") {
  CubeComplex t = torus();
  Hyperplanes ht = hyperplanes(t);
  REQUIRE(ht.all.size() == 2);
  CHECK(ht.of_edge == std::vector<std::size_t>{0, 1});
  for (const auto& h : ht.all) {
    CHECK(h.two_sided);
    CHECK(h.midcubes.size() == 2);
    CHECK(h.dual_edges.size() == 1);
  }
  // Opposite darts of a dual edge see opposite sides.
  CHECK(ht.all[0].side_of(make_dart(0, 0)) != ht.all[0].side_of(make_dart(0, 1)));

  Hyperplanes hk = hyperplanes(klein());
  REQUIRE(hk.all.size() == 2);
  CHECK(hk.all[hk.of_edge[0]].two_sided);
  CHECK_FALSE(hk.all[hk.of_edge[1]].two_sided);

  Hyperplanes hd = hyperplanes(doubled_loop());
  REQUIRE(hd.all.size() == 2);
  CHECK(hd.of_edge == std::vector<std::size_t>{0, 0, 1});
  CHECK(hd.all[0].dual_edges == std::vector<std::size_t>{0, 1});
  CHECK(hd.all[0].two_sided);

  Hyperplanes h1 = hyperplanes(one_loop_square());
  REQUIRE(h1.all.size() == 1);
  CHECK(h1.all[0].midcubes.size() == 3);
  CHECK(h1.all[0].dual_edges == std::vector<std::size_t>{0});
}

TEST_CASE("solid cubes have one hyperplane per axis") {
  for (int n = 1; n <= 3; ++n) {
    CubeComplex x = n == 1 ? solid1() : n == 2 ? solid2() : solid3();
    Hyperplanes hs = hyperplanes(x);
    REQUIRE(hs.all.size() == static_cast<std::size_t>(n));
    for (const auto& h : hs.all) {
      CHECK(h.two_sided);
      CHECK(h.dual_edges.size() == (std::size_t{1} << (n - 1)));
    }
    CHECK(dual_edge_total(hs) == x.edges.size());
  }
}

TEST_CASE("every edge is dual to exactly one hyperplane") {
  for (const CubeComplex& x : {torus(), klein(), doubled_loop(), solid3(),
                               salvetti(plain_graph(4, {{0, 1}, {1, 2}, {2, 3}}), 3)}) {
    Hyperplanes hs = hyperplanes(x);
    CHECK(dual_edge_total(hs) == x.edges.size());
    for (std::size_t e = 0; e < x.edges.size(); ++e) {
      const auto& dual = hs.all[hs.of_edge[e]].dual_edges;
      CHECK(std::count(dual.begin(), dual.end(), e) == 1);
    }
  }
}

TEST_CASE("torus and solid cubes are special") {
  for (const CubeComplex& x : {torus(), solid1(), solid2(), solid3(), wedge(2)}) {
    SpecialnessReport rep = specialness(x);
    CHECK(rep.special);
    CHECK(rep.witnesses.empty());
  }
}

TEST_CASE("a one-sided hyperplane is witnessed") {
  SpecialnessReport rep = specialness(klein());
  CHECK_FALSE(rep.special);
  REQUIRE(rep.witnesses.size() == 1);
  CHECK(rep.witnesses[0].kind == Witness::OneSided);
  CHECK(rep.witnesses[0].h1 == hyperplanes(klein()).of_edge[1]);
}

TEST_CASE("a square crossed twice by one hyperplane is witnessed") {
  SpecialnessReport rep = specialness(one_loop_square());
  CHECK_FALSE(rep.special);
  REQUIRE(rep.witnesses.size() == 1);
  CHECK(rep.witnesses[0].kind == Witness::SelfIntersection);
  CHECK(rep.witnesses[0].h1 == 0);
  CHECK(rep.witnesses[0].square == 0);
}

TEST_CASE("osculations of the doubled loop, with locations") {
  CubeComplex x = doubled_loop();
  SpecialnessReport rep = specialness(x);
  CHECK_FALSE(rep.special);
  REQUIRE(rep.witnesses.size() == 6);
  CHECK(count_kind(rep.witnesses, Witness::SelfOsculation) == 2);
  CHECK(count_kind(rep.witnesses, Witness::InterOsculation) == 4);
  CHECK(count_kind(rep.witnesses, Witness::OneSided) == 0);
  CHECK(count_kind(rep.witnesses, Witness::SelfIntersection) == 0);

  // The a and b loops cross one hyperplane in parallel: both positive darts
  // meet at the vertex off any corner, and likewise both negative ones.
  std::set<std::array<Dart, 2>> self_pairs, inter_pairs;
  for (const auto& w : rep.witnesses) {
    CHECK(w.vertex == 0);
    if (w.kind == Witness::SelfOsculation) {
      CHECK(w.h1 == 0);
      CHECK(w.h2 == 0);
      self_pairs.insert({w.d1, w.d2});
    } else if (w.kind == Witness::InterOsculation) {
      CHECK(w.h1 == 0);
      CHECK(w.h2 == 1);
      CHECK(w.square == 0);
      inter_pairs.insert({w.d1, w.d2});
    }
  }
  std::set<std::array<Dart, 2>> want_self{{make_dart(0, 0), make_dart(1, 0)},
                                          {make_dart(0, 1), make_dart(1, 1)}};
  std::set<std::array<Dart, 2>> want_inter{{make_dart(0, 0), make_dart(2, 1)},
                                           {make_dart(0, 1), make_dart(2, 1)},
                                           {make_dart(1, 0), make_dart(2, 0)},
                                           {make_dart(1, 1), make_dart(2, 0)}};
  CHECK(self_pairs == want_self);
  CHECK(inter_pairs == want_inter);
}

TEST_CASE("right-angled complexes of small graphs are special") {
  // Every graph on up to four nodes, by edge subset.
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::array<std::size_t, 2>> pairs;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) pairs.push_back({a, b});
    for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
      std::vector<std::array<std::size_t, 2>> chosen;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (mask & (std::size_t{1} << i)) chosen.push_back(pairs[i]);
      CrossingGraph g = plain_graph(n, chosen);
      CubeComplex s = salvetti(g, 2);

      CHECK(validate(s).attachments_ok);
      SpecialnessReport rep = specialness(s);
      CHECK(rep.special);

      // The crossing graph reads the input back off the complex.
      Hyperplanes hs = hyperplanes(s);
      REQUIRE(hs.all.size() == n);
      CHECK(dual_edge_total(hs) == s.edges.size());
      CrossingGraph back = crossing_graph(s, hs);
      CHECK(back.nodes == g.nodes);
      CHECK(back.edges == g.edges);
    }
  }
}

TEST_CASE("presentation text") {
  CHECK(raag_presentation(plain_graph(2, {})) == "<x0, x1>");
  CHECK(raag_presentation(plain_graph(2, {{0, 1}})) == "<x0, x1 | [x0,x1]>");
  CHECK(raag_presentation(plain_graph(3, {{0, 1}, {1, 2}})) ==
        "<x0, x1, x2 | [x0,x1], [x1,x2]>");
}

TEST_CASE("characteristic map of the torus") {
  CharMap cm = raag_and_char_map(torus());
  CHECK(cm.gamma.nodes == 2);
  REQUIRE(cm.gamma.edges.size() == 1);
  CHECK(cm.gamma.edges[0] == std::array<std::size_t, 2>{0, 1});
  CHECK(raag_presentation(cm.gamma) == "<x0, x1 | [x0,x1]>");
  CHECK(cm.edge_image == std::vector<std::size_t>{0, 1});
  CHECK(cm.edge_reversed == std::vector<bool>{false, false});
  CHECK(cm.square_image == std::vector<std::size_t>{0});
  CHECK(cm.target.cell_count(0) == 1);
  CHECK(cm.target.cell_count(1) == 2);
  CHECK(cm.target.cell_count(2) == 1);
  CHECK(cm.local_isometry);
  CHECK(cm.failures.empty());
}

TEST_CASE("characteristic map of a wedge is the free group's") {
  CharMap cm = raag_and_char_map(wedge(2));
  CHECK(cm.gamma.nodes == 2);
  CHECK(cm.gamma.edges.empty());
  CHECK(raag_presentation(cm.gamma) == "<x0, x1>");
  CHECK(cm.local_isometry);
}

TEST_CASE("characteristic map rejects non-special complexes") {
  CHECK_THROWS_MATCHES(raag_and_char_map(klein()), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.kind() == "NotSpecial"; }));
  CHECK_THROWS_MATCHES(raag_and_char_map(doubled_loop()), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.kind() == "NotSpecial"; }));
}

TEST_CASE("characteristic map round trip on a path complex") {
  CrossingGraph p3 = plain_graph(3, {{0, 1}, {1, 2}});
  CubeComplex s = salvetti(p3, 2);
  CharMap cm = raag_and_char_map(s, 2);
  CHECK(cm.gamma.nodes == p3.nodes);
  CHECK(cm.gamma.edges == p3.edges);
  CHECK(cm.local_isometry);
  CHECK(cm.edge_image == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("the completion cap limits cube images") {
  // The solid cube's three hyperplanes commute pairwise, so its 3-cell maps
  // onto the filled clique cell, but only once the cap admits it.
  CharMap capped = raag_and_char_map(solid3(), 2);
  REQUIRE(capped.cube_image.size() == 1);
  CHECK(capped.cube_image[0] == no_cell);
  CHECK_FALSE(capped.local_isometry);
  CHECK(mentions(capped.failures, "NoImageCell"));

  CharMap full = raag_and_char_map(solid3(), 3);
  CHECK(full.cube_image[0] == 0);
  CHECK(full.local_isometry);
}

TEST_CASE("trivial covers are disjoint copies") {
  CubeComplex w = wedge(2);
  Cover cv = cover(w, trivial_cover(w, 3));
  CHECK(cv.total.cell_count(0) == 3);
  CHECK(cv.total.cell_count(1) == 6);
  CHECK(cv.total.euler() == 3 * w.euler());

  auto pieces = components(cv.total);
  REQUIRE(pieces.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(pieces[k].complex.euler() == w.euler());
    CHECK(pieces[k].vertex_map == std::vector<std::size_t>{k});
    CHECK(pieces[k].edge_map == std::vector<std::size_t>{k, 3 + k});
  }
}

TEST_CASE("double cover of the torus along one loop") {
  CubeComplex t = torus();
  Cover cv = cover(t, swap_on(t, {0}));
  CHECK(cv.total.cell_count(0) == 2);
  CHECK(cv.total.cell_count(1) == 4);
  CHECK(cv.total.cell_count(2) == 2);
  CHECK(cv.total.euler() == 0);
  CHECK(validate(cv.total).attachments_ok);
  CHECK(validate(cv.total).simple);
  CHECK(components(cv.total).size() == 1);
  CHECK(flags(cv.total).flag);
  check_link_projection(t, cv);
}

TEST_CASE("double cover of the 3-torus lifts the 3-cell") {
  CubeComplex t3 = salvetti(plain_graph(3, {{0, 1}, {0, 2}, {1, 2}}), 3);
  Cover cv = cover(t3, swap_on(t3, {0}));
  CHECK(cv.total.cell_count(0) == 2);
  CHECK(cv.total.cell_count(1) == 6);
  CHECK(cv.total.cell_count(2) == 6);
  CHECK(cv.total.cell_count(3) == 2);
  CHECK(cv.total.euler() == 0);
  ValidationReport rep = validate(cv.total);
  CHECK(rep.attachments_ok);
  CHECK(rep.simple);
  CHECK(components(cv.total).size() == 1);
  CHECK(flags(cv.total).flag);
  CHECK(specialness(cv.total).special);
  check_link_projection(t3, cv);
}

TEST_CASE("holonomy that fails to close is rejected") {
  CubeComplex x = doubled_loop();
  // Only the bottom loop of the square swaps sheets, so the two routes to
  // the far corner land on different sheets.
  CHECK_THROWS_MATCHES(cover(x, swap_on(x, {0})), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.kind() == "RelatorViolation"; }));
}

TEST_CASE("malformed permutation data is rejected") {
  CubeComplex t = torus();
  PermutationCover short_list{2, {{0, 1}}};
  CHECK_THROWS_MATCHES(cover(t, short_list), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.kind() == "BadCover"; }));
  PermutationCover not_perm{2, {{0, 0}, {0, 1}}};
  CHECK_THROWS_MATCHES(cover(t, not_perm), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.kind() == "BadCover"; }));
}

TEST_CASE("specialness defects survive into covers and project back") {
  CubeComplex x = doubled_loop();
  // Swapping sheets along both loops of the joined hyperplane closes around
  // the square but keeps the parallel darts parallel upstairs.
  Cover cv = cover(x, swap_on(x, {0, 1}));
  CHECK(validate(cv.total).attachments_ok);
  CHECK(components(cv.total).size() == 1);
  CHECK(cv.total.euler() == 2 * x.euler());

  SpecialnessReport up = specialness(cv.total);
  CHECK_FALSE(up.special);
  SpecialnessReport down = specialness(x);

  for (const auto& w : up.witnesses) {
    bool found = false;
    for (const auto& b : down.witnesses) {
      if (b.kind != w.kind) continue;
      switch (w.kind) {
        case Witness::OneSided:
          found = true;
          break;
        case Witness::SelfIntersection:
          found = b.square == base_cell(w.square, cv.degree);
          break;
        default: {
          Dart p1 = make_dart(base_cell(dart_edge(w.d1), cv.degree), dart_end(w.d1));
          Dart p2 = make_dart(base_cell(dart_edge(w.d2), cv.degree), dart_end(w.d2));
          found = b.vertex == base_cell(w.vertex, cv.degree) &&
                  std::minmax(p1, p2) == std::minmax(b.d1, b.d2);
          break;
        }
      }
      if (found) break;
    }
    CHECK(found);
  }
}

TEST_CASE("a double cover can resolve an osculation") {
  CubeComplex x = doubled_loop();
  // Swapping sheets along the crossing loop separates the parallel a and b
  // darts onto different hyperplanes upstairs.
  Cover cv = cover(x, swap_on(x, {2}));
  CHECK(validate(cv.total).attachments_ok);
  CHECK(specialness(cv.total).special);
}

TEST_CASE("fiber products split by joint holonomy") {
  CubeComplex t = torus();
  PermutationCover a = swap_on(t, {0}), b = swap_on(t, {1});

  FiberProduct same = fiber_product(t, a, a);
  CHECK(same.product.degree == 4);
  REQUIRE(same.pieces.size() == 2);
  CHECK(same.piece_degree == std::vector<std::size_t>{2, 2});
  for (const auto& p : same.pieces) {
    CHECK(p.complex.euler() == 0);
    CHECK(validate(p.complex).attachments_ok);
  }

  FiberProduct mixed = fiber_product(t, a, b);
  REQUIRE(mixed.pieces.size() == 1);
  CHECK(mixed.piece_degree == std::vector<std::size_t>{4});
  CHECK(mixed.pieces[0].complex.euler() == 0);
}

TEST_CASE("complexes round trip through text") {
  std::vector<EdgeTag> tags{{0, {HyperplaneTag::Cut, -1}}, {1, {HyperplaneTag::Bind, 2}}};
  std::string text = cube_to_json(torus(), tags);
  CubeJson back = cube_from_json(text);
  CHECK(cube_to_json(back.complex, back.tags) == text);
  CHECK(back.complex.cell_count(2) == 1);
  REQUIRE(back.tags.size() == 2);
  CHECK(back.tags[1].tag.kind == HyperplaneTag::Bind);
  CHECK(back.tags[1].tag.index == 2);

  // With 3-cells in the picture.
  CubeComplex t3 = salvetti(plain_graph(3, {{0, 1}, {0, 2}, {1, 2}}), 3);
  std::string text3 = cube_to_json(t3);
  CubeJson back3 = cube_from_json(text3);
  CHECK(cube_to_json(back3.complex) == text3);
  CHECK(validate(back3.complex).attachments_ok);
  CHECK(back3.complex.cell_count(3) == 1);
}

TEST_CASE("bad input text is rejected") {
  for (const char* text : {"[", "{}", "{\"vertices\": 1, \"edges\": [[0]]}",
                           "{\"vertices\": 1, \"edges\": [], \"tags\": [{\"edge\": 0, "
                           "\"kind\": \"purple\"}]}"}) {
    CHECK_THROWS_MATCHES(cube_from_json(text), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.kind() == "BadInput"; }));
  }
}

TEST_CASE("tags land on hyperplanes and clash loudly") {
  CubeComplex t = torus();
  Hyperplanes hs = hyperplanes(t);
  apply_tags(hs, {{0, {HyperplaneTag::Cut, -1}}, {1, {HyperplaneTag::Bind, 2}}});
  CHECK(hs.all[hs.of_edge[0]].tag.kind == HyperplaneTag::Cut);
  CHECK(hs.all[hs.of_edge[1]].tag.kind == HyperplaneTag::Bind);
  CHECK(hs.all[hs.of_edge[1]].tag.index == 2);

  // Repeating the same stamp is fine.
  apply_tags(hs, {{0, {HyperplaneTag::Cut, -1}}});

  // The a and b loops of the doubled loop cross one hyperplane, which cannot
  // carry both stamps.
  Hyperplanes hd = hyperplanes(doubled_loop());
  CHECK_THROWS_MATCHES(
      apply_tags(hd, {{0, {HyperplaneTag::Cut, -1}}, {1, {HyperplaneTag::Bind, 0}}}), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.kind() == "TagConflict"; }));
}

TEST_CASE("crossing graphs export to graphviz") {
  CrossingGraph g = plain_graph(3, {{0, 1}, {1, 2}});
  std::string dot = to_dot(g, {"cut0", "bind0", "bind1"});
  CHECK(dot.find("graph crossings") != std::string::npos);
  CHECK(dot.find("0 [label=\"cut0\"]") != std::string::npos);
  CHECK(dot.find("0 -- 1;") != std::string::npos);
  CHECK(dot.find("1 -- 2;") != std::string::npos);

  std::string plain = to_dot(g);
  CHECK(plain.find("[label=\"H2\"]") != std::string::npos);
}
