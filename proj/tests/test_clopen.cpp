#include <algorithm>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "cbrank/clopen.hpp"
#include "cbrank/ordinal.hpp"
#include "cbrank/space.hpp"
#include "support/rng.hpp"

using cbrank::ClopenSet;
using cbrank::Interval;
using cbrank::Ordinal;
using cbrank::Space;

namespace {

Ordinal ord(const char* lit) { return cbrank::parse_ordinal(lit); }

// Candidate endpoints inside [0, w^2*2]: all w^2*a + w*b + c with small
// coefficients.
std::vector<Ordinal> endpoint_pool(const Space& space) {
  std::vector<Ordinal> pool;
  for (std::uint64_t a = 0; a <= 2; ++a)
    for (std::uint64_t b = 0; b <= 2; ++b)
      for (std::uint64_t c = 0; c <= 2; ++c) {
        std::vector<Ordinal::Term> terms;
        if (a) terms.push_back({2, a});
        if (b) terms.push_back({1, b});
        if (c) terms.push_back({0, c});
        Ordinal p = Ordinal::from_terms(std::move(terms));
        if (cbrank::compare(p, space.top) != std::strong_ordering::greater)
          pool.push_back(std::move(p));
      }
  return pool;
}

ClopenSet random_clopen(testrng::Rng& rng, const Space& space,
                        const std::vector<Ordinal>& pool) {
  std::vector<Interval> parts;
  std::uint64_t k = rng.below(4);
  for (std::uint64_t n = 0; n < k; ++n) {
    const Ordinal& x = pool[rng.below(pool.size())];
    const Ordinal& y = pool[rng.below(pool.size())];
    if (rng.chance(0.25) || x == y) {
      parts.push_back(Interval{std::nullopt, y});
    } else {
      auto cmp = cbrank::compare(x, y);
      parts.push_back(cmp == std::strong_ordering::less ? Interval{x, y} : Interval{y, x});
    }
  }
  return ClopenSet::from_intervals(space, std::move(parts));
}

// Every Boolean combination of sets keeps its interval endpoints among the
// operands' endpoints plus the top, so two combinations are equal iff they
// agree on all those points and 0. This makes probe-point comparison an
// exact equality oracle.
std::vector<Ordinal> probes_for(const Space& space,
                                std::initializer_list<const ClopenSet*> sets) {
  std::set<Ordinal> ps{Ordinal(), space.top};
  for (const ClopenSet* s : sets)
    for (const Interval& iv : s->intervals()) {
      if (iv.low) ps.insert(*iv.low);
      ps.insert(iv.high);
    }
  return {ps.begin(), ps.end()};
}

bool probe_equal(const Space& space, const ClopenSet& u, const ClopenSet& v) {
  for (const Ordinal& p : probes_for(space, {&u, &v}))
    if (u.contains(p) != v.contains(p)) return false;
  return true;
}

}  // namespace

TEST_CASE("clopen complement, intersection, union on small examples") {
  Space x = cbrank::make_space("w");
  ClopenSet zero_one = ClopenSet::initial_segment(x, Ordinal::nat(1));
  CHECK(cbrank::to_string(~zero_one) == "(1, w]");
  CHECK(cbrank::to_string(zero_one & ClopenSet::interval(x, Ordinal(), Ordinal::nat(2))) ==
        "(0, 1]");
  CHECK(cbrank::to_string(zero_one | ClopenSet::interval(x, Ordinal::nat(1), Ordinal::nat(3))) ==
        "[0,3]");
  CHECK((zero_one & ClopenSet::interval(x, Ordinal::nat(2), Ordinal::nat(5))).empty());
}

TEST_CASE("clopen membership is exact at endpoints") {
  Space x = cbrank::make_space("w");
  ClopenSet s = ClopenSet::interval(x, Ordinal(), ord("w"));  // (0, w]
  CHECK(s.contains(ord("w")));
  CHECK(!s.contains(Ordinal()));
  CHECK(s.contains(Ordinal::nat(1)));
  ClopenSet b = ClopenSet::initial_segment(x, Ordinal::nat(2));  // [0,2]
  CHECK(b.contains(Ordinal()));
  CHECK(b.contains(Ordinal::nat(2)));
  CHECK(!b.contains(Ordinal::nat(3)));
}

TEST_CASE("from_intervals normalizes arbitrary input") {
  Space x = cbrank::make_space("w^2");
  // Unsorted, overlapping, adjacent pieces collapse to canonical components.
  ClopenSet s = ClopenSet::from_intervals(
      x, {Interval{ord("w"), ord("w*2")}, Interval{std::nullopt, Ordinal::nat(3)},
          Interval{Ordinal::nat(3), ord("w")}, Interval{ord("w*3"), ord("w*4")}});
  CHECK(cbrank::to_string(s) == "[0,w*2] , (w*3, w*4]");
  CHECK(s == cbrank::parse_clopen(x, "[0,w*2] , (w*3, w*4]"));
}

TEST_CASE("from_intervals validates endpoints") {
  Space x = cbrank::make_space("w^2");
  CHECK_THROWS_WITH(ClopenSet::interval(x, ord("w"), Ordinal::nat(1)),
                    Catch::Matchers::ContainsSubstring("interval_invalid"));
  CHECK_THROWS_WITH(ClopenSet::interval(x, Ordinal(), ord("w^3")),
                    Catch::Matchers::ContainsSubstring("interval_outside_space"));
}

TEST_CASE("clopen rendering round trips through the parser") {
  Space x = cbrank::make_space("w^2");
  for (const char* text :
       {"{}", "[0,w]", "(w, w*2]", "[0,1] , (w, w^2]", "(1, 3] , (w*2, w*2 + 5]"}) {
    INFO(text);
    ClopenSet s = cbrank::parse_clopen(x, text);
    CHECK(cbrank::parse_clopen(x, cbrank::to_string(s)) == s);
  }
  // Degenerate textual intervals fail interval validation, not parsing.
  CHECK_THROWS_WITH(cbrank::parse_clopen(x, "(w^2, w^2]"),
                    Catch::Matchers::ContainsSubstring("interval_invalid"));
  CHECK(cbrank::parse_clopen(x, "  ").empty());
  CHECK(cbrank::parse_clopen(x, "( w , w*2 ]") == ClopenSet::interval(x, ord("w"), ord("w*2")));
}

TEST_CASE("clopen parser reports positions") {
  Space x = cbrank::make_space("w^2");
  CHECK_THROWS_WITH(cbrank::parse_clopen(x, "[1,w]"),
                    Catch::Matchers::ContainsSubstring("closed lower endpoint"));
  CHECK_THROWS_WITH(cbrank::parse_clopen(x, "(w, w*2] ; (1,2]"),
                    Catch::Matchers::ContainsSubstring("expected ','"));
  CHECK_THROWS_AS(cbrank::parse_clopen(x, "(w w*2]"), cbrank::ParseError);
  CHECK_THROWS_AS(cbrank::parse_clopen(x, "(w, w^^2]"), cbrank::ParseError);
  try {
    cbrank::parse_clopen(x, "x");
  } catch (const cbrank::ParseError& e) {
    CHECK(e.position == 0);
  }
}

TEST_CASE("operations reject mismatched spaces") {
  ClopenSet a = ClopenSet::whole(cbrank::make_space("w"));
  ClopenSet b = ClopenSet::whole(cbrank::make_space("w^2"));
  CHECK_THROWS_WITH(a | b, Catch::Matchers::ContainsSubstring("space_mismatch"));
  CHECK_THROWS_WITH(a & b, Catch::Matchers::ContainsSubstring("space_mismatch"));
}

TEST_CASE("boolean algebra laws hold structurally and pointwise") {
  Space x = cbrank::make_space("w^2*2");
  std::vector<Ordinal> pool = endpoint_pool(x);
  testrng::Rng rng(0xB001u);
  for (int trial = 0; trial < 500; ++trial) {
    ClopenSet a = random_clopen(rng, x, pool);
    ClopenSet b = random_clopen(rng, x, pool);
    ClopenSet c = random_clopen(rng, x, pool);
    ClopenSet none = ClopenSet::empty_set(x);
    ClopenSet all = ClopenSet::whole(x);

    // Structural equality is canonical-form equality, so the laws must
    // produce bit-identical representations.
    CHECK((a | b) == (b | a));
    CHECK((a & b) == (b & a));
    CHECK(((a | b) | c) == (a | (b | c)));
    CHECK(((a & b) & c) == (a & (b & c)));
    CHECK((a & (b | c)) == ((a & b) | (a & c)));
    CHECK((a | (b & c)) == ((a | b) & (a | c)));
    CHECK(~(a | b) == (~a & ~b));
    CHECK(~(a & b) == (~a | ~b));
    CHECK(~~a == a);
    CHECK((a | none) == a);
    CHECK((a & all) == a);
    CHECK((a & ~a) == none);
    CHECK((a | ~a) == all);

    // And the semantics agree with pointwise membership on the probes.
    CHECK(probe_equal(x, a | b, b | a));
    for (const Ordinal& p : probes_for(x, {&a, &b})) {
      CHECK((a | b).contains(p) == (a.contains(p) || b.contains(p)));
      CHECK((a & b).contains(p) == (a.contains(p) && b.contains(p)));
      CHECK((~a).contains(p) == !a.contains(p));
    }
  }
}

TEST_CASE("normalized membership matches the raw interval list") {
  // The normalizer must preserve semantics: membership in the raw pieces
  // equals membership in the canonical form.
  Space x = cbrank::make_space("w^2*2");
  std::vector<Ordinal> pool = endpoint_pool(x);
  testrng::Rng rng(0x517Eu);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Interval> raw;
    std::uint64_t k = rng.below(5);
    for (std::uint64_t n = 0; n < k; ++n) {
      const Ordinal& u = pool[rng.below(pool.size())];
      const Ordinal& v = pool[rng.below(pool.size())];
      if (u == v)
        raw.push_back(Interval{std::nullopt, u});
      else
        raw.push_back(cbrank::compare(u, v) == std::strong_ordering::less ? Interval{u, v}
                                                                          : Interval{v, u});
    }
    ClopenSet s = ClopenSet::from_intervals(x, raw);
    auto raw_member = [&](const Ordinal& p) {
      for (const Interval& iv : raw) {
        bool above = !iv.low || cbrank::compare(*iv.low, p) == std::strong_ordering::less;
        if (above && cbrank::compare(p, iv.high) != std::strong_ordering::greater) return true;
      }
      return false;
    };
    for (const Ordinal& p : pool) CHECK(s.contains(p) == raw_member(p));
    // Canonical: re-normalizing the normalized parts is the identity.
    CHECK(ClopenSet::from_intervals(x, s.intervals()) == s);
  }
}

TEST_CASE("separating algebra of initial segments") {
  Space x = cbrank::make_space("w");
  auto alg = cbrank::separating_algebra(x, {Ordinal::nat(1), Ordinal::nat(3)});
  REQUIRE(alg.generators.size() == 2);
  CHECK(cbrank::to_string(alg.generators[0]) == "[0,1]");
  CHECK(cbrank::to_string(alg.generators[1]) == "[0,3]");
  CHECK(alg.generators[0].contains(Ordinal::nat(1)));
  CHECK(!alg.generators[0].contains(Ordinal::nat(3)));

  auto single = cbrank::separating_algebra(x, {Ordinal::nat(5)});
  CHECK(single.atoms.size() == 2);  // [0,5] and (5,w]: a 4-element algebra

  auto three = cbrank::separating_algebra(x, {Ordinal::nat(1), Ordinal::nat(3), Ordinal::nat(5)});
  REQUIRE(three.atoms.size() == 4);
  CHECK(cbrank::to_string(three.atoms[0]) == "[0,1]");
  CHECK(cbrank::to_string(three.atoms[1]) == "(1, 3]");
  CHECK(cbrank::to_string(three.atoms[2]) == "(3, 5]");
  CHECK(cbrank::to_string(three.atoms[3]) == "(5, w]");

  CHECK_THROWS_WITH(cbrank::separating_algebra(x, {}),
                    Catch::Matchers::ContainsSubstring("empty_point_set"));
  CHECK_THROWS_WITH(cbrank::separating_algebra(x, {ord("w^5")}),
                    Catch::Matchers::ContainsSubstring("point_outside_space"));
}

TEST_CASE("separating algebra separates every input pair") {
  Space x = cbrank::make_space("w^2*2");
  std::vector<Ordinal> pool = endpoint_pool(x);
  testrng::Rng rng(0x5EB1u);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<Ordinal> pts;
    std::uint64_t k = rng.range(1, 5);
    for (std::uint64_t n = 0; n < k; ++n) pts.insert(pool[rng.below(pool.size())]);
    std::vector<Ordinal> points(pts.begin(), pts.end());
    auto alg = cbrank::separating_algebra(x, points);
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        bool separated = false;
        for (const ClopenSet& g : alg.generators)
          separated = separated || (g.contains(points[i]) != g.contains(points[j]));
        CHECK(separated);
      }
  }
}

TEST_CASE("separating algebra matches generic atom refinement") {
  // The direct gap construction must agree, atom for atom, with running the
  // same initial segments through the general refinement pipeline.
  Space x = cbrank::make_space("w^2*2");
  std::vector<Ordinal> pool = endpoint_pool(x);
  testrng::Rng rng(0xD1EC7u);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<Ordinal> pts;
    std::uint64_t k = rng.range(1, 6);
    for (std::uint64_t n = 0; n < k; ++n) pts.insert(pool[rng.below(pool.size())]);
    std::vector<Ordinal> points(pts.begin(), pts.end());
    auto direct = cbrank::separating_algebra(x, points);
    std::vector<ClopenSet> gens;
    for (const Ordinal& p : points) gens.push_back(ClopenSet::initial_segment(x, p));
    auto refined = cbrank::algebra_from_generators(x, gens);
    REQUIRE(direct.atoms.size() == refined.atoms.size());
    for (std::size_t i = 0; i < direct.atoms.size(); ++i)
      CHECK(direct.atoms[i] == refined.atoms[i]);
    REQUIRE(direct.generators.size() == gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i)
      CHECK(direct.generators[i] == gens[i]);
  }
}

TEST_CASE("algebra atoms partition the space and rebuild the generators") {
  Space x = cbrank::make_space("w^2*2");
  std::vector<Ordinal> pool = endpoint_pool(x);
  testrng::Rng rng(0xA70Au);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<ClopenSet> gens;
    std::uint64_t k = rng.below(4);
    for (std::uint64_t n = 0; n < k; ++n) gens.push_back(random_clopen(rng, x, pool));
    auto alg = cbrank::algebra_from_generators(x, gens);

    ClopenSet cover = ClopenSet::empty_set(x);
    for (std::size_t i = 0; i < alg.atoms.size(); ++i) {
      CHECK(!alg.atoms[i].empty());
      for (std::size_t j = i + 1; j < alg.atoms.size(); ++j)
        CHECK((alg.atoms[i] & alg.atoms[j]).empty());
      cover = cover | alg.atoms[i];
    }
    CHECK(cover == ClopenSet::whole(x));

    for (const ClopenSet& g : alg.generators) {
      ClopenSet rebuilt = ClopenSet::empty_set(x);
      for (const ClopenSet& atom : alg.atoms)
        if ((atom & g) == atom) rebuilt = rebuilt | atom;
      CHECK(rebuilt == g);
    }
  }
}

TEST_CASE("trace restricts a clopen set to witness indices") {
  Space x = cbrank::make_space("w^2");
  std::vector<Ordinal> w4{Ordinal(), Ordinal::nat(1), Ordinal::nat(2), Ordinal::nat(3)};
  auto bits = cbrank::trace(ClopenSet::interval(x, Ordinal(), Ordinal::nat(2)), w4);
  REQUIRE(bits.size() == 4);
  CHECK((!bits[0] && bits[1] && bits[2] && !bits[3]));

  CHECK(cbrank::trace(ClopenSet::empty_set(x), w4).none());

  std::vector<Ordinal> w3{Ordinal::nat(1), ord("w"), ord("w + 1")};
  auto b3 = cbrank::trace(ClopenSet::initial_segment(x, ord("w")), w3);
  CHECK((b3[0] && b3[1] && !b3[2]));
}

TEST_CASE("trace is a boolean homomorphism") {
  Space x = cbrank::make_space("w^2*2");
  std::vector<Ordinal> pool = endpoint_pool(x);
  testrng::Rng rng(0x7124CEu);
  for (int trial = 0; trial < 200; ++trial) {
    ClopenSet a = random_clopen(rng, x, pool);
    ClopenSet b = random_clopen(rng, x, pool);
    std::vector<Ordinal> witness;
    std::uint64_t k = rng.range(1, 6);
    for (std::uint64_t n = 0; n < k; ++n) witness.push_back(pool[rng.below(pool.size())]);
    std::sort(witness.begin(), witness.end());
    witness.erase(std::unique(witness.begin(), witness.end()), witness.end());

    CHECK(cbrank::trace(a | b, witness) == (cbrank::trace(a, witness) | cbrank::trace(b, witness)));
    CHECK(cbrank::trace(a & b, witness) == (cbrank::trace(a, witness) & cbrank::trace(b, witness)));
    auto flipped = cbrank::trace(a, witness);
    flipped.flip();
    CHECK(cbrank::trace(~a, witness) == flipped);
  }
}

TEST_CASE("cell hitting check finds unwitnessed cells") {
  Space x = cbrank::make_space("w");
  auto alg = cbrank::algebra_from_generators(
      x, {ClopenSet::initial_segment(x, Ordinal::nat(1))});

  CHECK(cbrank::cell_hitting_check(x, {alg}, {Ordinal(), Ordinal::nat(5)}).ok);

  auto miss = cbrank::cell_hitting_check(x, {alg}, {Ordinal(), Ordinal::nat(1)});
  CHECK(!miss.ok);
  REQUIRE(miss.missed_cell.has_value());
  CHECK(cbrank::to_string(*miss.missed_cell) == "(1, w]");

  auto two = cbrank::algebra_from_generators(
      x, {ClopenSet::initial_segment(x, Ordinal::nat(1)),
          ClopenSet::initial_segment(x, Ordinal::nat(3))});
  CHECK(cbrank::cell_hitting_check(x, {two}, {Ordinal(), Ordinal::nat(2), Ordinal::nat(7)}).ok);
}

TEST_CASE("a passing hitting check makes trace injective on the algebra") {
  Space x = cbrank::make_space("w^2*2");
  std::vector<Ordinal> pool = endpoint_pool(x);
  testrng::Rng rng(0x1217u);
  int passing = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<ClopenSet> gens;
    std::uint64_t k = rng.range(1, 3);
    for (std::uint64_t n = 0; n < k; ++n) gens.push_back(random_clopen(rng, x, pool));
    auto alg = cbrank::algebra_from_generators(x, gens);
    if (alg.atoms.size() > 6) continue;

    std::vector<Ordinal> witness;
    for (const Ordinal& p : pool)
      if (rng.chance(0.5)) witness.push_back(p);
    auto hit = cbrank::cell_hitting_check(x, {alg}, witness);
    if (!hit.ok) continue;
    ++passing;

    // Enumerate the whole generated algebra as unions of atoms; distinct
    // members must have distinct traces.
    std::set<boost::dynamic_bitset<>> seen;
    std::size_t members = std::size_t{1} << alg.atoms.size();
    for (std::size_t mask = 0; mask < members; ++mask) {
      ClopenSet u = ClopenSet::empty_set(x);
      for (std::size_t i = 0; i < alg.atoms.size(); ++i)
        if (mask & (std::size_t{1} << i)) u = u | alg.atoms[i];
      CHECK(seen.insert(cbrank::trace(u, witness)).second);
    }
  }
  CHECK(passing >= 10);  // the property must actually have been exercised
}
