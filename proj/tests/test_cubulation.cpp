#include <npcgm/cubulation.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <npcgm/cube.hpp>
#include <npcgm/cutbind.hpp>
#include <npcgm/surface_model.hpp>

#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace npcgm;

namespace {

bool is_error(const Error& e, const std::string& kind) { return e.kind() == kind; }

#define CHECK_KIND(expr, kind)                            \
  CHECK_THROWS_MATCHES(expr, Error,                       \
                       Catch::Matchers::Predicate<Error>( \
                           [](const Error& e) { return is_error(e, kind); }))

struct Assembled {
  ConfigGraph g;
  SurfaceModel m;
  CutBindSystem s;
  SurfaceComplex sc;
  std::vector<VoltageComplex> pieces;
};

Assembled assemble(ConfigGraph graph) {
  Assembled a{std::move(graph), {}, {}, {}, {}};
  a.m = build_model(a.g);
  PantsDecomposition d = pants_subordinate(a.m, a.g);
  XiData x = xi_select(a.m, a.g, d);
  a.s = assemble_cut_bind(a.m, a.g, std::move(d), std::move(x));
  a.sc = surface_square_complex(a.s);
  for (std::size_t v = 0; v < a.g.vertices.size(); ++v)
    a.pieces.push_back(build_piece(a.s, a.sc, v));
  return a;
}

Assembled pair_instance() { return assemble(fixtures::pants_pair()); }

// Crossing counts per curve for the pants pair; the invariant functional
// evaluates to (3, 2, 1) in absolute value and the fiber circles close after
// |b_e| * M_e = 6 steps on every gluing edge.
const std::size_t kPairM[3] = {3, 2, 1};
constexpr std::size_t kPairH = 6;

std::size_t count_kind(const GluedComplex& x, GluedComplex::EdgeKind k) {
  std::size_t n = 0;
  for (const auto& info : x.edge_info)
    if (info.kind == k) ++n;
  return n;
}

}  // namespace

TEST_CASE("pants pair pieces are finite with order-six fibers") {
  Assembled a = pair_instance();
  REQUIRE(a.s.xi.n == 0);
  std::vector<Int> abs_values;
  for (const Int& v : a.s.xi.value) abs_values.push_back(v < 0 ? -v : v);
  REQUIRE(abs_values == std::vector<Int>{Int(3), Int(2), Int(1)});

  REQUIRE(a.pieces.size() == 2);
  for (std::size_t v = 0; v < 2; ++v) {
    const VoltageComplex& pc = a.pieces[v];
    CHECK(pc.vertex == v);
    CHECK(pc.index == a.s.xi.index[v]);
    CHECK(pc.finite);
    CHECK(pc.order == Int(6));
    // One pants: two regions, three arcs, one transverse direction.
    CHECK(pc.base.cell_count(0) == 2);
    CHECK(pc.base.cell_count(1) == 5);   // 3 arcs + 2 fiber loops
    CHECK(pc.base.cell_count(2) == 3);   // one commutation square per arc
    CHECK(pc.base_region.size() == 2);
    std::size_t binds = 0, fibers = 0;
    for (const auto& o : pc.edge_origin) {
      if (o.kind == VoltageComplex::EdgeOrigin::Kind::Bind) ++binds;
      if (o.kind == VoltageComplex::EdgeOrigin::Kind::Fiber) ++fibers;
    }
    CHECK(binds == 3);
    CHECK(fibers == 2);
    for (const auto& volt : pc.voltage) CHECK(volt.size() == 1);
    REQUIRE(pc.level_divisor.size() == 3);
    for (std::size_t j = 1; j <= 2; ++j)
      CHECK(pc.level_divisor[j] == pants_divisibility(a.s, j, v));
  }
}

TEST_CASE("gluing the pants pair yields the height-six complex") {
  Assembled a = pair_instance();
  GluedComplex x = glue_canonical(a.s, a.sc, a.pieces);

  CHECK(x.materialized);
  CHECK(x.fiber_order == Int(kPairH));
  CHECK(x.stage == "base");
  CHECK(x.degree_over_base == 1);

  REQUIRE(x.complex.cell_count(0) == 24);
  REQUIRE(x.complex.cell_count(1) == 96);
  REQUIRE(x.complex.cell_count(2) == 108);
  REQUIRE(x.complex.cell_count(3) == 36);
  CHECK(x.complex.euler() == 0);

  ValidationReport report = validate(x.complex);
  CHECK(report.attachments_ok);
  CHECK(report.simple);
  CHECK(report.issues.empty());

  CHECK(count_kind(x, GluedComplex::EdgeKind::Fiber) == 24);
  CHECK(count_kind(x, GluedComplex::EdgeKind::Bind) == 36);
  CHECK(count_kind(x, GluedComplex::EdgeKind::Cut) == 36);

  // Vertices fiber over the four complementary regions, six heights each.
  std::map<std::size_t, std::size_t> per_region;
  for (const auto& info : x.vertex_info) {
    REQUIRE(info.region < a.sc.complex.cell_count(0));
    ++per_region[info.region];
    CHECK(info.height >= 0);
    CHECK(info.height < Int(kPairH));
  }
  REQUIRE(per_region.size() == 4);
  for (const auto& [region, n] : per_region) CHECK(n == kPairH);

  REQUIRE(x.anchor_edge.size() == 3);
  REQUIRE(x.tags.size() == x.complex.cell_count(1));

  // Every edge is tagged: cut edges by their curve, bind and fiber edges by
  // the level they wind, thirty apiece for the two levels.
  std::map<int, std::size_t> level_tag;
  for (const auto& tag : x.tags) {
    const auto& info = x.edge_info[tag.edge];
    if (info.kind == GluedComplex::EdgeKind::Cut) {
      CHECK(tag.tag.kind == HyperplaneTag::Kind::Cut);
      CHECK(tag.tag.index == static_cast<int>(info.index));
    } else {
      CHECK(tag.tag.kind == HyperplaneTag::Kind::Bind);
      ++level_tag[tag.tag.index];
    }
  }
  CHECK(level_tag[1] == 30);
  CHECK(level_tag[2] == 30);
}

TEST_CASE("hyperplanes of the glued complex are two-sided and tagged") {
  Assembled a = pair_instance();
  GluedComplex x = glue_canonical(a.s, a.sc, a.pieces);
  Hyperplanes hs = hyperplanes(x.complex);
  apply_tags(hs, x.tags);

  std::size_t cut = 0, bind = 0;
  std::multiset<std::size_t> cut_sizes;
  for (const auto& h : hs.all) {
    CHECK(h.two_sided);
    if (h.tag.kind == HyperplaneTag::Kind::Cut) {
      ++cut;
      cut_sizes.insert(h.dual_edges.size());
    } else if (h.tag.kind == HyperplaneTag::Kind::Bind) {
      ++bind;
      CHECK(h.dual_edges.size() == 30);
    }
  }
  CHECK(cut == 3);
  CHECK(bind == 2);
  CHECK(cut_sizes == std::multiset<std::size_t>{6, 12, 18});
}

TEST_CASE("hyperplane census matches the divisor formulas") {
  Assembled a = pair_instance();
  GluedComplex x = glue_canonical(a.s, a.sc, a.pieces);
  HyperplaneCensus census = hyperplane_census(x);

  REQUIRE(census.cut.size() == 3);
  std::set<std::size_t> cut_planes;
  for (std::size_t f = 0; f < 3; ++f) {
    CHECK(census.cut[f].curve == f);
    REQUIRE(census.cut[f].hyperplane != no_cell);
    cut_planes.insert(census.cut[f].hyperplane);
  }
  CHECK(cut_planes.size() == 3);

  REQUIRE(census.rows.size() == 4);
  for (const auto& row : census.rows) {
    std::size_t piece = a.s.decomp.pants[row.pants].vertex;
    bool vertical = a.s.xi.index[piece] == row.index;
    CHECK(row.vertical == vertical);
    CHECK(row.expected == row.found);
    if (vertical) {
      CHECK(row.found == Int(3));  // one local piece per arc
      CHECK(row.boundary.empty());
    } else {
      CHECK(row.found == pants_divisibility(a.s, row.index, row.pants));
      CHECK(row.found == Int(1));
      REQUIRE(row.boundary.size() == 3);
      std::map<std::size_t, Int> entries;
      for (const auto& [curve, mult] : row.boundary) {
        entries[curve] = mult;
        Int expected = curve_divisibility(a.g, a.s, row.index, curve) /
                       pants_divisibility(a.s, row.index, row.pants);
        CHECK(mult == expected);
      }
      CHECK(entries[0] == Int(3));
      CHECK(entries[1] == Int(2));
      CHECK(entries[2] == Int(1));
    }
  }

  CHECK(census.bind_components == 2);
  CHECK(census.duality_checked);
}

TEST_CASE("decomposition graphs classify the base maps") {
  Assembled a = pair_instance();
  GluedComplex x = glue_canonical(a.s, a.sc, a.pieces);
  DecompositionGraphMap dg = decomposition_graphs(x);

  REQUIRE(dg.upsilon.vertices == 2);
  CHECK(dg.upsilon.vertex_label == std::vector<std::size_t>{0, 1});
  REQUIRE(dg.upsilon.edges.size() == 3);
  for (std::size_t f = 0; f < 3; ++f) {
    CHECK(dg.upsilon.edges[f].label == f);
    CHECK(dg.upsilon.edges[f].ends[0] == a.s.decomp.curves[f].side[0].pants);
    CHECK(dg.upsilon.edges[f].ends[1] == a.s.decomp.curves[f].side[1].pants);
  }

  REQUIRE(dg.maps.size() == 2);
  std::set<std::size_t> indexes;
  for (const auto& m : dg.maps) {
    indexes.insert(m.index);
    REQUIRE(m.nodes.size() == 4);
    std::size_t vertical = 0;
    for (const auto& node : m.nodes)
      if (node.vertical) ++vertical;
    CHECK(vertical == 3);

    // Links per curve match the crossing counts, ends aligned with the
    // primary side of the underlying curve.
    std::map<std::size_t, std::size_t> per_curve;
    for (const auto& link : m.links) {
      REQUIRE(link.curve < 3);
      CHECK(link.upsilon_edge == link.curve);
      CHECK(link.count == Int(1));
      per_curve[link.curve] += 1;
      CHECK(m.nodes[link.ends[0]].pants == a.s.decomp.curves[link.curve].side[0].pants);
      CHECK(m.nodes[link.ends[1]].pants == a.s.decomp.curves[link.curve].side[1].pants);
    }
    CHECK(per_curve[0] == 3);
    CHECK(per_curve[1] == 2);
    CHECK(per_curve[2] == 1);

    // Both base maps pile several boundary circles onto one edge end, so
    // neither is an immersion yet.
    CHECK(m.cls == DecompositionGraphMap::Class::NotImmersion);
  }
  CHECK(indexes == std::set<std::size_t>{1, 2});
}

TEST_CASE("base pathologies concentrate at the central regions") {
  Assembled a = pair_instance();
  GluedComplex x = glue_canonical(a.s, a.sc, a.pieces);
  PathologyReport p = pathologies(x);

  CHECK_FALSE(p.per_orbit);
  CHECK(p.two_sided);
  CHECK(p.no_self_crossing);
  CHECK(p.no_mixed_bind_contact);

  // Cut self-osculation at every vertex over the two octagonal regions.
  REQUIRE(p.cut_self.size() == 12);
  std::map<std::size_t, std::size_t> per_pants;
  for (const auto& w : p.cut_self) {
    std::size_t region = x.vertex_info[w.vertex].region;
    CHECK(a.sc.vertex_region[region] == 0);
    ++per_pants[a.sc.vertex_pants[region]];
  }
  CHECK(per_pants[0] == 6);
  CHECK(per_pants[1] == 6);

  // Two same-side arc pairs per central vertex.
  CHECK(p.bind_self.size() == 24);
  for (const auto& w : p.bind_self)
    CHECK(a.sc.vertex_region[x.vertex_info[w.vertex].region] == 0);

  // Each central cut dart osculates the two arc ends it is not cornered
  // against: two witnesses per occurrence, eight per central region level.
  CHECK(p.inter.size() == 96);
  for (const auto& w : p.inter)
    CHECK(a.sc.vertex_region[x.vertex_info[w.vertex].region] == 0);
}

TEST_CASE("cyclic covers unwind the vertical levels") {
  Assembled a = pair_instance();
  GluedComplex x = glue_canonical(a.s, a.sc, a.pieces);

  for (std::size_t j = 1; j <= 2; ++j) {
    GluedComplex cc = cyclic_cover(x, j);
    Int expected = cover_level(a.g, a.s, j) / class_divisibility(a.s, j);
    CHECK(Int(cc.degree_over_base) == expected);
    CHECK(cc.degree_over_base == 6);
    CHECK(cc.stage == std::string("cyclic-") + std::to_string(j));
    CHECK(cc.complex.cell_count(0) == 144);
    CHECK(cc.complex.cell_count(1) == 576);
    CHECK(cc.complex.cell_count(2) == 648);
    CHECK(cc.complex.cell_count(3) == 216);
    CHECK(cc.complex.euler() == 0);
    CHECK(validate(cc.complex).attachments_ok);

    // The unwound level is clean: no cut self-osculation over its pants and
    // no failed immersion among its maps.
    PathologyReport p = pathologies(cc);
    for (const auto& w : p.cut_self) {
      std::size_t region = cc.vertex_info[w.vertex].region;
      std::size_t piece = a.s.decomp.pants[a.sc.vertex_pants[region]].vertex;
      CHECK(a.s.xi.index[piece] != j);
    }
    DecompositionGraphMap dg = decomposition_graphs(cc);
    CHECK(dg.upsilon.vertices == 2);
    REQUIRE(dg.upsilon.edges.size() == 6);
    std::map<std::size_t, std::size_t> lifts;
    for (const auto& e : dg.upsilon.edges) ++lifts[e.label];
    CHECK(lifts[0] == 3);
    CHECK(lifts[1] == 2);
    CHECK(lifts[2] == 1);
    for (const auto& m : dg.maps)
      if (m.index == j)
        CHECK(m.cls != DecompositionGraphMap::Class::NotImmersion);
  }
}

TEST_CASE("the tower certifies a special cover") {
  Assembled a = pair_instance();
  GluedComplex x = glue_canonical(a.s, a.sc, a.pieces);
  std::vector<GluedComplex> cyclic;
  cyclic.push_back(cyclic_cover(x, 1));
  cyclic.push_back(cyclic_cover(x, 2));

  Certificate cert = lerf_tower_and_certify(x, cyclic);

  CHECK(cert.special);
  CHECK(cert.final_special.special);
  CHECK(cert.final_special.witnesses.empty());
  CHECK(cert.final_pathologies.cut_self.empty());
  CHECK(cert.final_pathologies.bind_self.empty());
  CHECK(cert.final_pathologies.inter.empty());
  CHECK(cert.char_map.local_isometry);

  REQUIRE(cert.stages.size() >= 4);
  CHECK(cert.stages[0].name == "base");
  CHECK(cert.stages[0].degree == 1);
  CHECK(cert.stages[1].name == "cyclic-1");
  CHECK(cert.stages[1].degree == 6);
  CHECK(cert.stages[2].name == "cyclic-2");
  CHECK(cert.stages[2].degree == 6);
  CHECK(cert.stages.back().name == "product");
  CHECK(cert.stages.back().degree == cert.degree);
  CHECK(cert.degree % 36 == 0);
  CHECK(cert.stages.back().cut_self == 0);
  CHECK(cert.stages.back().bind_self == 0);
  CHECK(cert.stages.back().inter == 0);

  CHECK(cert.base_census.cut.size() == 3);
  CHECK_FALSE(cert.raag.empty());
  CHECK(cert.crossing_dot.find("graph") != std::string::npos);

  std::string json = certificate_to_json(cert);
  CHECK(json.find("special") != std::string::npos);
  CHECK(json.find("product") != std::string::npos);
}

TEST_CASE("gauge choices change nothing up to isomorphism") {
  Assembled a = pair_instance();
  GluedComplex base = glue_canonical(a.s, a.sc, a.pieces);

  GaugeChoice gauge;
  gauge.root = 1;
  gauge.anchor = {1, 0, 0};
  GluedComplex moved = glue_canonical(a.s, a.sc, a.pieces, &gauge);

  CHECK(moved.anchor_edge[0] != base.anchor_edge[0]);
  CHECK(moved.complex.cell_count(0) == base.complex.cell_count(0));
  CHECK(moved.complex.cell_count(3) == base.complex.cell_count(3));

  auto map = isomorphic(base, moved);
  REQUIRE(map.has_value());
  CHECK(map->size() == base.complex.cell_count(0));

  // The identity case degenerates to the identity relabelling.
  auto self = isomorphic(base, base);
  REQUIRE(self.has_value());
}

TEST_CASE("systems with extra levels stay symbolic") {
  Assembled a = assemble(fixtures::four_cycle());
  REQUIRE(a.s.xi.n == 2);
  for (const auto& pc : a.pieces) {
    CHECK_FALSE(pc.finite);
    CHECK(pc.level_divisor.size() == 5);
  }

  GluedComplex x = glue_canonical(a.s, a.sc, a.pieces);
  CHECK_FALSE(x.materialized);
  CHECK(x.complex.cell_count(0) == 0);

  HyperplaneCensus census = hyperplane_census(x);
  REQUIRE(census.rows.size() == a.s.decomp.pants.size() * 4);
  for (const auto& row : census.rows) {
    CHECK(row.expected == row.found);
    if (row.vertical) CHECK(row.boundary.empty());
  }
  for (const auto& cut : census.cut) CHECK(cut.hyperplane == no_cell);
  CHECK(census.bind_components == 0);
  CHECK_FALSE(census.duality_checked);

  DecompositionGraphMap dg = decomposition_graphs(x);
  CHECK(dg.upsilon.vertices == a.s.decomp.pants.size());
  CHECK(dg.upsilon.edges.size() == a.s.decomp.curves.size());
  REQUIRE_FALSE(dg.maps.empty());
  std::set<std::size_t> indexes;
  for (const auto& m : dg.maps) {
    indexes.insert(m.index);
    CHECK_FALSE(m.nodes.empty());
  }
  for (std::size_t j : indexes) CHECK((j >= 1 && j <= 4));

  PathologyReport p = pathologies(x);
  CHECK(p.per_orbit);
  CHECK(p.two_sided);
  CHECK(p.no_self_crossing);
  CHECK(p.no_mixed_bind_contact);

  // Independent recount of the symbolic cut self-osculations: same-side
  // occurrence pairs of a walk at one region, summed over curves and sides.
  std::size_t expected_pairs = 0;
  {
    std::vector<std::vector<std::size_t>> cuts(a.s.decomp.curves.size());
    for (std::size_t e = 0; e < a.sc.edge_kind.size(); ++e)
      if (a.sc.edge_kind[e] == SurfaceEdgeKind::Cut)
        cuts[a.sc.edge_curve[e]].push_back(e);
    for (const auto& edges : cuts) {
      for (int side = 0; side < 2; ++side) {
        std::map<std::size_t, std::size_t> at_region;
        for (std::size_t e : edges) {
          std::size_t v = a.sc.complex.edges[e].ends[side == 0 ? 0 : 1];
          ++at_region[v];
        }
        for (const auto& [region, n] : at_region) expected_pairs += n * (n - 1) / 2;
      }
    }
  }
  CHECK(p.cut_self.size() == expected_pairs);

  CHECK_KIND(cyclic_cover(x, 1), "NotMaterialized");
  CHECK_KIND(lerf_tower_and_certify(x, {}), "NotMaterialized");
}

TEST_CASE("index and argument guards") {
  Assembled a = pair_instance();
  GluedComplex x = glue_canonical(a.s, a.sc, a.pieces);

  CHECK_KIND(cyclic_cover(x, 0), "IndexOutOfRange");
  CHECK_KIND(cyclic_cover(x, 3), "IndexOutOfRange");

  GaugeChoice bad;
  bad.anchor = {0, 0};  // three curves here
  CHECK_KIND(glue_canonical(a.s, a.sc, a.pieces, &bad), "IndexOutOfRange");

  GluedComplex cc = cyclic_cover(x, 1);
  CHECK_FALSE(isomorphic(x, cc).has_value());

  std::vector<GluedComplex> one;
  one.push_back(std::move(cc));
  CHECK_KIND(lerf_tower_and_certify(x, one), "IndexOutOfRange");
}
