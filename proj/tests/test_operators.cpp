#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "octlab/operators.hpp"

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

MultiIndex corner(int r) {
  MultiIndex m;
  for (auto& v : m.m) v = r;
  return m;
}

F constant_on_box(const O& value, int radius, const Rational& h) {
  F f(h, Region::box(corner(-radius), corner(radius)));
  MultiIndex m = corner(-radius);
  for (;;) {
    f.set(m, value);
    int a = 7;
    while (a >= 0) {
      if (++m.m[a] <= radius) break;
      m.m[a] = -radius;
      --a;
    }
    if (a < 0) break;
  }
  return f;
}

// The paper-style counterexample pair on a box: f = x_1 - x_2 e_4.
F counterexample_f(int radius, const Rational& h) {
  const MultiIndex lo = corner(-radius), hi = corner(radius);
  return sub(linear<Rational>(1, O::unit(0), lo, hi, h),
             linear<Rational>(2, O::unit(4), lo, hi, h));
}

const OperatorVariant kLeftBackward{Direction::Backward, Side::Left, false};
const OperatorVariant kRightBackward{Direction::Backward, Side::Right, false};

}  // namespace

TEST_CASE("finite differences: constants and linear functions") {
  const F c = constant_on_box(O::unit(2) + O::unit(5), 2, Rational(1));
  CHECK(forward_diff(c, 3).is_zero());
  CHECK(backward_diff(c, 0).is_zero());

  const F l = linear<Rational>(1, O::unit(0), corner(-2), corner(2), Rational(1, 3));
  const F d = forward_diff(l, 1);
  for (const auto& [m, v] : d.support()) CHECK(v == O::unit(0));
  CHECK(d.at(site({})) == O::unit(0));
  CHECK(forward_diff(l, 1) == backward_diff(l, 1));
}

TEST_CASE("backward difference of delta") {
  const F d = delta<Rational>(site({}), Rational(1));
  const F bd = backward_diff(d, 3);
  CHECK(bd.at(site({})) == O::unit(0));
  CHECK(bd.at(site({0, 0, 0, 1})) == -O::unit(0));
  CHECK(bd.support_size() == 2);
}

TEST_CASE("operators are linear and commute across axes") {
  const MultiIndex lo = corner(-1), hi = corner(1);
  const F f = random_function<Rational>(lo, hi, 2, Rational(1, 2));
  const F g = random_function<Rational>(lo, hi, 3, Rational(1, 2));

  CHECK(forward_diff(add(f, g), 4) == add(forward_diff(f, 4), forward_diff(g, 4)));
  const Rational lambda(-5, 3);
  CHECK(backward_diff(scaled(f, lambda), 6) == scaled(backward_diff(f, 6), lambda));

  for (int i : {0, 2, 7})
    for (int j : {1, 5})
      CHECK(forward_diff(backward_diff(f, j), i) == backward_diff(forward_diff(f, i), j));
}

TEST_CASE("discrete counterexample: D- f = 0 but D- (f e3) = 2 e5") {
  const F f = counterexample_f(2, Rational(1));
  const F df = apply_cr(f, kLeftBackward);
  CHECK(df.is_zero());

  const F g = rmul_const(f, O::unit(3));
  const F dg = apply_cr(g, kLeftBackward);
  const O expected = O::unit(5).scaled(Rational(2));
  CHECK_FALSE(dg.is_zero());
  for (const auto& [m, v] : dg.support()) CHECK(v == expected);
  // every interior site carries the residual
  CHECK(dg.at(site({})) == expected);

  const auto rf = is_monogenic(f, kLeftBackward);
  CHECK(rf.monogenic);
  const auto rg = is_monogenic(g, kLeftBackward);
  CHECK_FALSE(rg.monogenic);
  CHECK(rg.worst_value == expected);
  CHECK(rg.max_abs_component == Rational(2));

  // h cancels on linear inputs
  const F fh = counterexample_f(2, Rational(1, 2));
  CHECK(apply_cr(fh, kLeftBackward).is_zero());
  const F gh = rmul_const(fh, O::unit(3));
  CHECK(apply_cr(gh, kLeftBackward).at(site({})) == expected);

  // right multiplication by e0 keeps monogenicity
  CHECK(is_monogenic(rmul_const(f, O::unit(0)), kLeftBackward).monogenic);

  CHECK_FALSE(is_monogenic(delta<Rational>(site({}), Rational(1)), kLeftBackward).monogenic);
}

TEST_CASE("left and right applications differ") {
  const F g = rmul_const(counterexample_f(2, Rational(1)), O::unit(3));
  CHECK(apply_cr(g, kLeftBackward) != apply_cr(g, kRightBackward));
}

TEST_CASE("tolerance is rejected in exact mode") {
  const F f = counterexample_f(1, Rational(1));
  CHECK_THROWS_AS(is_monogenic(f, kLeftBackward, Rational(1, 100)), std::domain_error);
}

TEST_CASE("star-Laplacian stencil on delta") {
  const F d = delta<Rational>(site({}), Rational(1));
  const F ld = star_laplacian(d);
  CHECK(ld.at(site({})) == O::unit(0).scaled(Rational(-16)));
  for (int j = 0; j < 8; ++j) {
    CHECK(ld.at(site({}).shifted(j, 1)) == O::unit(0));
    CHECK(ld.at(site({}).shifted(j, -1)) == O::unit(0));
  }
  CHECK(ld.support_size() == 17);
}

TEST_CASE("star-Laplacian annihilates linear functions on the interior") {
  const F l = linear<Rational>(5, O::unit(2) - O::unit(6), corner(-2), corner(2), Rational(1, 4));
  CHECK(star_laplacian(l).is_zero());
}

TEST_CASE("factorization residual vanishes exactly") {
  CHECK(factorization_residual(delta<Rational>(site({}), Rational(1))).is_zero());

  F zero(Rational(1), Region::whole());
  CHECK(factorization_residual(zero).is_zero());

  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const F f = random_function<Rational>(corner(-1), corner(1), seed, Rational(1, 2));
    CHECK(factorization_residual(f).is_zero());
  }
}

TEST_CASE("factorization residual vanishes for scattered supports") {
  F f(Rational(1, 3), Region::whole());
  f.set(site({}), O::unit(1) + O::unit(7).scaled(Rational(2)));
  f.set(site({0, 2, 0, -1, 0, 0, 1, 0}), O::unit(4) - O::unit(0));
  CHECK(factorization_residual(f).is_zero());
}

TEST_CASE("factorization residual in float mode stays below 1e-12") {
  using D = LatticeFunction<double>;
  const D f = random_function<double>(corner(-1), corner(1), 6, 1.0);
  const D res = factorization_residual(f);
  double worst = 0.0;
  for (const auto& [m, v] : res.support())
    worst = std::max(worst, v.max_abs_component());
  CHECK(worst < 1e-12);
}

TEST_CASE("half-space operators act on the interior only") {
  LatticeFunction<Rational> f(Rational(1), Region::upper());
  f.set(site({0, 0, 0, 0, 0, 0, 0, 0}), O::unit(1));
  f.set(site({0, 0, 0, 0, 0, 0, 0, 1}), O::unit(2));
  const F d = apply_cr(f, kLeftBackward);
  for (const auto& [m, v] : d.support()) CHECK(m.m[7] >= 1);

  // the interior stencil still reads the boundary layer
  LatticeFunction<Rational> interior_only(Rational(1), Region::upper());
  interior_only.set(site({0, 0, 0, 0, 0, 0, 0, 1}), O::unit(2));
  const MultiIndex probe = site({0, 0, 0, 0, 0, 0, 0, 1});
  CHECK(cr_at(f, probe, kLeftBackward) ==
        cr_at(interior_only, probe, kLeftBackward) - mul_basis_left(7, O::unit(1)));
}
