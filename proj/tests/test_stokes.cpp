#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "octlab/stokes.hpp"

using namespace octlab;
using O = Octonion<Rational>;
using F = LatticeFunction<Rational>;

namespace {

MultiIndex site(std::initializer_list<int> coords) {
  MultiIndex m;
  int i = 0;
  for (int c : coords) m.m[i++] = c;
  return m;
}

O all_units() {
  O o;
  for (int i = 0; i < 8; ++i) o.c[i] = Rational(1);
  return o;
}

// Thin slab over a few axes: small enough for the brute-force oracle,
// still exercising every octonion component.
void slab_box(const Region& region, int radius, MultiIndex& lo, MultiIndex& hi) {
  lo = MultiIndex{};
  hi = MultiIndex{};
  for (int a : {1, 2}) {
    lo.m[a] = -radius;
    hi.m[a] = radius;
  }
  switch (region.kind) {
    case Region::Kind::Whole:
      lo.m[7] = -radius;
      hi.m[7] = radius;
      break;
    case Region::Kind::Upper:
      lo.m[7] = 0;
      hi.m[7] = radius + 1;
      break;
    default:
      lo.m[7] = -radius - 1;
      hi.m[7] = 0;
      break;
  }
}

struct Case {
  F g;
  F f;
  Region region;
};

Case make_case(const Region& region, int radius, std::uint64_t seed, const Rational& h) {
  MultiIndex lo, hi;
  slab_box(region, radius, lo, hi);
  return {random_function<Rational>(lo, hi, seed * 2 + 1, h, region),
          random_function<Rational>(lo, hi, seed * 2 + 2, h, region), region};
}

}  // namespace

TEST_CASE("pairing of functions with disjoint stencils is zero") {
  F g = delta<Rational>(site({}), Rational(1));
  F f = delta<Rational>(site({5, 5}), Rational(1));
  for (PairingSign s : {PairingSign::Minus, PairingSign::Plus}) {
    CHECK(pairing(g, f, s, Region::whole()).is_zero());
    CHECK(correction_term(g, f, s, Region::whole()).is_zero());
  }
}

TEST_CASE("delta pairing: frozen values for both signs") {
  const F d = delta<Rational>(site({}), Rational(1));
  const O minus_expected = all_units().scaled(Rational(-2));

  CHECK(pairing(d, d, PairingSign::Minus, Region::whole()) == minus_expected);
  CHECK(correction_term(d, d, PairingSign::Minus, Region::whole()) == minus_expected);
  CHECK(brute_force_oracle(d, d, PairingSign::Minus, Region::whole()) == minus_expected);

  CHECK(pairing(d, d, PairingSign::Plus, Region::whole()).is_zero());
  CHECK(brute_force_oracle(d, d, PairingSign::Plus, Region::whole()).is_zero());
}

TEST_CASE("triple term structure") {
  // s = minus vanishes exactly on anti-associative triples, s = plus on
  // associative ones; plus is minus the associator of the units.
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        const TripleTerm tm = pairing_triple_term(PairingSign::Minus, i, j, k);
        const TripleTerm tp = pairing_triple_term(PairingSign::Plus, i, j, k);
        const int sign = triple_sign(i, j, k);
        CHECK((tm.coeff == 0) == (sign == -1));
        CHECK((tp.coeff == 0) == (sign == +1));
        O expected = O::zero();
        if (tp.coeff != 0) expected.c[tp.index] = Rational(tp.coeff);
        CHECK(-associator(O::unit(i), O::unit(j), O::unit(k)) == expected);
      }
}

TEST_CASE("DI-1: pairing equals correction on the whole space, both signs") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Case c = make_case(Region::whole(), 1, seed, Rational(1, 2));
    for (PairingSign s : {PairingSign::Minus, PairingSign::Plus}) {
      const O p = pairing(c.g, c.f, s, c.region);
      CHECK(p == correction_term(c.g, c.f, s, c.region));
      CHECK(p == brute_force_oracle(c.g, c.f, s, c.region));
    }
  }
}

TEST_CASE("DI-2: pairing equals correction plus boundary on half spaces") {
  for (const Region& region : {Region::upper(), Region::lower()}) {
    for (std::uint64_t seed : {10u, 11u, 12u}) {
      const Case c = make_case(region, 1, seed, Rational(1));
      for (PairingSign s : {PairingSign::Minus, PairingSign::Plus}) {
        const O p = pairing(c.g, c.f, s, c.region);
        const O derived =
            correction_term(c.g, c.f, s, c.region) + boundary_term_derived(c.g, c.f, c.region);
        CHECK(p == derived);
        CHECK(p == brute_force_oracle(c.g, c.f, s, c.region));
      }
    }
  }
}

TEST_CASE("boundary terms: single-site evaluation") {
  F g(Rational(1), Region::upper());
  g.set(site({0, 0, 0, 0, 0, 0, 0, 1}), O::unit(0));
  F f(Rational(1), Region::upper());
  f.set(site({0, 0, 0, 0, 0, 0, 0, 0}), O::unit(0));

  CHECK(boundary_term_claim(g, f, Region::upper(), 8) == O::unit(7));
  CHECK(boundary_term_claim(g, f, Region::upper(), 7) == O::unit(7));
  CHECK(boundary_term_derived(g, f, Region::upper()) == -O::unit(7));

  // g vanishing on layer 1 kills both terms
  F g0(Rational(1), Region::upper());
  g0.set(site({0, 0, 0, 0, 0, 0, 0, 0}), O::unit(0));
  CHECK(boundary_term_claim(g0, f, Region::upper(), 8).is_zero());
  CHECK(boundary_term_derived(g0, f, Region::upper()).is_zero());

  CHECK_THROWS_AS(boundary_term_claim(g, f, Region::whole(), 8), std::domain_error);
}

TEST_CASE("boundary h-power scales as declared") {
  F g(Rational(1, 2), Region::upper());
  g.set(site({0, 0, 0, 0, 0, 0, 0, 1}), O::unit(0));
  F f(Rational(1, 2), Region::upper());
  f.set(site({0, 0, 0, 0, 0, 0, 0, 0}), O::unit(0));
  const O p7 = boundary_term_claim(g, f, Region::upper(), 7);
  const O p8 = boundary_term_claim(g, f, Region::upper(), 8);
  CHECK(p8 == p7.scaled(Rational(1, 2)));
}

TEST_CASE("pairing is bilinear") {
  const Case a = make_case(Region::whole(), 1, 20, Rational(1));
  const Case b = make_case(Region::whole(), 1, 21, Rational(1));
  const Rational lambda(7, 3);
  for (PairingSign s : {PairingSign::Minus, PairingSign::Plus}) {
    CHECK(pairing(add(a.g, b.g), a.f, s, Region::whole()) ==
          pairing(a.g, a.f, s, Region::whole()) + pairing(b.g, a.f, s, Region::whole()));
    CHECK(pairing(a.g, add(a.f, b.f), s, Region::whole()) ==
          pairing(a.g, a.f, s, Region::whole()) + pairing(a.g, b.f, s, Region::whole()));
    CHECK(pairing(scaled(a.g, lambda), a.f, s, Region::whole()) ==
          pairing(a.g, a.f, s, Region::whole()).scaled(lambda));
  }
}

TEST_CASE("s = plus pairing is the associator volume sum") {
  const Case c = make_case(Region::whole(), 1, 30, Rational(1));
  // independent route: -sum_m sum_{i,j,k} g_i d-_j f_k [e_i, e_j, e_k]
  O acc;
  for (const auto& [m, gv] : c.g.support()) {
    for (int j = 0; j < 8; ++j) {
      const O d = c.f.at(m) - c.f.at(m.shifted(j, -1));
      for (int i = 0; i < 8; ++i)
        for (int k = 0; k < 8; ++k) {
          if (gv.c[i] == 0 || d.c[k] == 0) continue;
          acc -= associator(O::unit(i), O::unit(j), O::unit(k)).scaled(gv.c[i] * d.c[k]);
        }
    }
  }
  CHECK(pairing(c.g, c.f, PairingSign::Plus, Region::whole()) == acc);
}

TEST_CASE("s = plus with real-valued g has vanishing correction") {
  F g(Rational(1), Region::whole());
  g.set(site({0, 1}), O::unit(0).scaled(Rational(3)));
  g.set(site({1, 0}), O::unit(0).scaled(Rational(-2)));
  const F f = random_function<Rational>(site({-1, -1}), site({1, 1}), 40, Rational(1));
  CHECK(correction_term(g, f, PairingSign::Plus, Region::whole()).is_zero());
  CHECK(pairing(g, f, PairingSign::Plus, Region::whole()).is_zero());
}

TEST_CASE("theorem reports") {
  SUBCASE("T1 disjoint supports") {
    const F g = delta<Rational>(site({}), Rational(1));
    const F f = delta<Rational>(site({4}), Rational(1));
    const auto rep = theorem_report(g, f, Theorem::T1);
    CHECK(rep.claim_residual.is_zero());
    CHECK(rep.derived_residual.is_zero());
  }
  SUBCASE("T1 delta") {
    const F d = delta<Rational>(site({}), Rational(1));
    const auto rep = theorem_report(d, d, Theorem::T1);
    CHECK(rep.claim_residual == all_units().scaled(Rational(-2)));
    CHECK(rep.derived_residual.is_zero());
  }
  SUBCASE("T2 and T3 random slabs") {
    for (Theorem t : {Theorem::T2, Theorem::T3}) {
      const Case c = make_case(theorem_region(t), 1, 50, Rational(1));
      for (int h_power : {7, 8}) {
        const auto rep = theorem_report(c.g, c.f, t, h_power);
        CHECK(rep.derived_residual.is_zero());
        CHECK(rep.claim_lhs - rep.claim_rhs == rep.claim_residual);
      }
    }
  }
}

TEST_CASE("T1 claim residual equals the minus correction term") {
  const Case c = make_case(Region::whole(), 1, 60, Rational(1));
  const auto rep = theorem_report(c.g, c.f, Theorem::T1);
  CHECK(rep.claim_residual == correction_term(c.g, c.f, PairingSign::Minus, Region::whole()));
}

TEST_CASE("pairing argument validation") {
  const F g = delta<Rational>(site({}), Rational(1));
  const F f = delta<Rational>(site({}), Rational(1, 2));
  CHECK_THROWS_AS(pairing(g, f, PairingSign::Minus, Region::whole()), std::domain_error);
  CHECK_THROWS_AS(pairing(g, g, PairingSign::Minus, Region::upper()), std::domain_error);
}

TEST_CASE("oracle refuses oversized boxes") {
  F g(Rational(1), Region::whole());
  g.set(site({}), O::unit(0));
  g.set(site({30, 30, 30, 30, 5}), O::unit(1));
  CHECK_THROWS_WITH_AS(brute_force_oracle(g, g, PairingSign::Minus, Region::whole()),
                       doctest::Contains("refus"), std::runtime_error);
}

TEST_CASE("report JSON carries the schema fields") {
  const F d = delta<Rational>(site({}), Rational(1));
  const auto rep = theorem_report(d, d, Theorem::T1, 7, 99, "box 0..0");
  const nlohmann::json j = report_to_json(rep);
  for (const char* key : {"theorem", "region", "sign", "h", "h_power", "mode", "seed", "box",
                          "claim_lhs", "claim_rhs", "claim_residual", "derived_residual",
                          "site_count", "elapsed_ms"})
    CHECK(j.contains(key));
  CHECK(j["mode"] == "exact");
  CHECK(j["claim_residual"][0] == "-2");
}
