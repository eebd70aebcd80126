#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <vector>

#include "octlab/lattice.hpp"

namespace octlab {

enum class Direction { Forward, Backward };
enum class Side { Left, Right };

/// One of the eight discrete Cauchy-Riemann applications:
/// direction x side x conjugation.
struct OperatorVariant {
  Direction direction = Direction::Backward;
  Side side = Side::Left;
  bool conjugated = false;
};

namespace detail {

/// Sites at which a one-layer stencil centered on the support can be
/// nonzero, restricted to the operator-interior of the region.
template <class S>
std::vector<MultiIndex> stencil_sites(const LatticeFunction<S>& f) {
  std::vector<MultiIndex> sites;
  sites.reserve(f.support_size() * 17);
  for (const auto& [m, v] : f.support()) {
    if (f.region().operator_interior(m)) sites.push_back(m);
    for (int j = 0; j < 8; ++j)
      for (int step : {-1, 1}) {
        const MultiIndex n = m.shifted(j, step);
        if (f.region().operator_interior(n)) sites.push_back(n);
      }
  }
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

template <class S>
Octonion<S> diff_at(const LatticeFunction<S>& f, const MultiIndex& m, int axis,
                    Direction dir) {
  if (dir == Direction::Forward)
    return (f.at(m.shifted(axis, 1)) - f.at(m)).scaled(ScalarTraits<S>::from_int(1) / f.h());
  return (f.at(m) - f.at(m.shifted(axis, -1))).scaled(ScalarTraits<S>::from_int(1) / f.h());
}

}  // namespace detail

/// Forward difference along one axis: h^-1 (f(m + e_j h) - f(m)). Defined
/// on the operator-interior of f's region.
template <class S>
LatticeFunction<S> forward_diff(const LatticeFunction<S>& f, int axis) {
  if (axis < 0 || axis > 7) throw std::domain_error("axis out of range");
  LatticeFunction<S> r(f.h(), f.region());
  for (const auto& m : detail::stencil_sites(f))
    r.set(m, detail::diff_at(f, m, axis, Direction::Forward));
  return r;
}

/// Backward difference: h^-1 (f(m) - f(m - e_j h)).
template <class S>
LatticeFunction<S> backward_diff(const LatticeFunction<S>& f, int axis) {
  if (axis < 0 || axis > 7) throw std::domain_error("axis out of range");
  LatticeFunction<S> r(f.h(), f.region());
  for (const auto& m : detail::stencil_sites(f))
    r.set(m, detail::diff_at(f, m, axis, Direction::Backward));
  return r;
}

/// Discrete Cauchy-Riemann application at a single site. Left variants
/// compute sum_j e_j (d_j f), right variants sum_j (d_j f) e_j; conjugated
/// variants flip the sign of the imaginary terms (d_0 f - sum_{j>=1} ...).
/// No product is ever reassociated.
template <class S>
Octonion<S> cr_at(const LatticeFunction<S>& f, const MultiIndex& m, const OperatorVariant& v) {
  Octonion<S> acc;
  for (int j = 0; j < 8; ++j) {
    const Octonion<S> d = detail::diff_at(f, m, j, v.direction);
    Octonion<S> term;
    if (j == 0)
      term = d;  // e_0 is the identity on either side
    else if (v.side == Side::Left)
      term = mul_basis_left(j, d);
    else
      term = mul_basis_right(d, j);
    if (v.conjugated && j >= 1)
      acc -= term;
    else
      acc += term;
  }
  return acc;
}

template <class S>
LatticeFunction<S> apply_cr(const LatticeFunction<S>& f, const OperatorVariant& v) {
  LatticeFunction<S> r(f.h(), f.region());
  for (const auto& m : detail::stencil_sites(f)) r.set(m, cr_at(f, m, v));
  return r;
}

template <class S>
struct MonogenicityResult {
  bool monogenic = true;
  S max_abs_component{};
  MultiIndex worst_site{};
  Octonion<S> worst_value{};
};

/// True iff the chosen discrete Cauchy-Riemann application vanishes at
/// every operator-interior site. tol must be 0 in exact mode.
template <class S>
MonogenicityResult<S> is_monogenic(const LatticeFunction<S>& f, const OperatorVariant& v,
                                   const S& tol = ScalarTraits<S>::from_int(0)) {
  if (ScalarTraits<S>::exact && !(tol == ScalarTraits<S>::from_int(0)))
    throw std::domain_error("tolerance must be 0 in exact mode");
  MonogenicityResult<S> res;
  res.max_abs_component = ScalarTraits<S>::from_int(0);
  const LatticeFunction<S> d = apply_cr(f, v);
  for (const auto& [m, val] : d.support()) {
    const S a = val.max_abs_component();
    if (a > res.max_abs_component) {
      res.max_abs_component = a;
      res.worst_site = m;
      res.worst_value = val;
    }
  }
  res.monogenic = !(res.max_abs_component > tol);
  return res;
}

/// Star-Laplacian: the 17-point stencil
/// h^-2 sum_{j=0..7} (f(m+e_j) - 2 f(m) + f(m-e_j)).
template <class S>
LatticeFunction<S> star_laplacian(const LatticeFunction<S>& f) {
  const S inv_h2 = ScalarTraits<S>::from_int(1) / (f.h() * f.h());
  LatticeFunction<S> r(f.h(), f.region());
  for (const auto& m : detail::stencil_sites(f)) {
    Octonion<S> acc;
    const Octonion<S> center = f.at(m);
    for (int j = 0; j < 8; ++j)
      acc += f.at(m.shifted(j, 1)) - center - center + f.at(m.shifted(j, -1));
    r.set(m, acc.scaled(inv_h2));
  }
  return r;
}

namespace detail {

/// Dense scratch grid over a box, row-major with axis 7 fastest so that
/// linear order matches MultiIndex lexicographic order. W is the working
/// scalar of the computation, one octonion per cell.
template <class W>
struct DenseBox {
  std::array<int, 8> dim{};
  std::array<std::size_t, 8> stride{};
  std::vector<std::array<W, 8>> cell;
  std::vector<unsigned char> filled;

  void init(const std::array<int, 8>& dim_in) {
    dim = dim_in;
    std::size_t n = 1;
    for (int a = 7; a >= 0; --a) {
      stride[a] = n;
      n *= static_cast<std::size_t>(dim[a]);
    }
    cell.assign(n, {});
    filled.assign(n, 0);
  }

  std::size_t size() const { return cell.size(); }
};

/// Locates a coordinate offset against a grid: the linear index over the
/// in-range axes plus which axes (if any) fall outside.
struct BoxProbe {
  std::size_t base = 0;
  int violations = 0;
  int axis = -1;  // the violating axis when violations == 1
};

inline BoxProbe probe(const std::array<int, 8>& off, const std::array<int, 8>& dim,
                      const std::array<std::size_t, 8>& stride) {
  BoxProbe p;
  for (int a = 0; a < 8; ++a) {
    if (off[a] < 0 || off[a] >= dim[a]) {
      if (++p.violations > 1) return p;
      p.axis = a;
    } else {
      p.base += static_cast<std::size_t>(off[a]) * stride[a];
    }
  }
  return p;
}

inline void advance_odometer(std::array<int, 8>& c, const std::array<int, 8>& dim) {
  for (int a = 7; a >= 0; --a) {
    if (++c[a] < dim[a]) return;
    c[a] = 0;
  }
}

template <class W>
bool array_is_zero(const std::array<W, 8>& a) {
  for (const auto& x : a)
    if (!(x == 0)) return false;
  return true;
}

/// acc += e_j (x - y) when negate is false, acc -= e_j (x - y) otherwise;
/// nullptr stands for zero and j == 0 is the identity. Zero components are
/// skipped, no temporaries are formed.
template <class W>
void scatter_diff(std::array<W, 8>& acc, int j, const std::array<W, 8>* x,
                  const std::array<W, 8>* y, bool negate) {
  for (int k = 0; k < 8; ++k) {
    int t = k;
    int sgn = negate ? -1 : 1;
    if (j != 0) {
      const BasisProduct p = kBasisTable[j][k];
      t = p.index;
      sgn *= p.sign;
    }
    if (x && !((*x)[k] == 0)) {
      if (sgn > 0)
        acc[t] += (*x)[k];
      else
        acc[t] -= (*x)[k];
    }
    if (y && !((*y)[k] == 0)) {
      if (sgn > 0)
        acc[t] -= (*y)[k];
      else
        acc[t] += (*y)[k];
    }
  }
}

template <class W>
void add_array(std::array<W, 8>& acc, const std::array<W, 8>& x) {
  for (int k = 0; k < 8; ++k)
    if (!(x[k] == 0)) acc[k] += x[k];
}

/// Shared dense traversal for the factorization residual. First stage
/// builds u = conj(D-) f and v = conj(D+) f one layer out from the
/// support box (unscaled; scale_inner applies the 1/h factor). Second
/// stage streams every site two layers out, accumulating the unscaled
/// star-Laplacian of f and the unscaled D+ u + D- v, and hands both to
/// emit. The scatter structure mirrors cr_at exactly: the conjugated
/// inner operators negate the imaginary terms, nothing is reassociated.
template <class W, class ScaleInner, class Emit>
void factorization_dense_core(const DenseBox<W>& f0, ScaleInner&& scale_inner, Emit&& emit) {
  std::array<int, 8> dim1{};
  for (int a = 0; a < 8; ++a) dim1[a] = f0.dim[a] + 2;
  DenseBox<W> gu, gv;
  gu.init(dim1);
  gv.init(dim1);

  std::array<int, 8> c{};
  for (std::size_t i = 0; i < gu.size(); advance_odometer(c, dim1), ++i) {
    std::array<int, 8> off{};
    for (int a = 0; a < 8; ++a) off[a] = c[a] - 1;
    const BoxProbe p0 = probe(off, f0.dim, f0.stride);
    if (p0.violations >= 2) continue;

    std::array<W, 8> uv{}, vv{};
    if (p0.violations == 1) {
      // One layer outside the support box: a single one-sided difference
      // survives on the violating axis.
      const int j = p0.axis;
      if (off[j] == -1) {
        const std::size_t n = p0.base;  // d_f = f(m + e_j)
        if (f0.filled[n]) scatter_diff<W>(vv, j, &f0.cell[n], nullptr, j != 0);
      } else {
        const std::size_t n =
            p0.base + static_cast<std::size_t>(f0.dim[j] - 1) * f0.stride[j];
        if (f0.filled[n]) scatter_diff<W>(uv, j, nullptr, &f0.cell[n], j != 0);  // d_b = -f(m - e_j)
      }
    } else {
      const std::size_t b = p0.base;
      const auto* fc = f0.filled[b] ? &f0.cell[b] : nullptr;
      for (int j = 0; j < 8; ++j) {
        const std::size_t s = f0.stride[j];
        const auto* fp =
            off[j] + 1 < f0.dim[j] && f0.filled[b + s] ? &f0.cell[b + s] : nullptr;
        const auto* fm = off[j] - 1 >= 0 && f0.filled[b - s] ? &f0.cell[b - s] : nullptr;
        if (fc || fm) scatter_diff(uv, j, fc, fm, j != 0);  // backward diff feeds u
        if (fp || fc) scatter_diff(vv, j, fp, fc, j != 0);  // forward diff feeds v
      }
    }
    if (!array_is_zero(uv)) {
      scale_inner(uv);
      gu.cell[i] = std::move(uv);
      gu.filled[i] = 1;
    }
    if (!array_is_zero(vv)) {
      scale_inner(vv);
      gv.cell[i] = std::move(vv);
      gv.filled[i] = 1;
    }
  }

  std::array<int, 8> dim2{};
  std::size_t n2 = 1;
  for (int a = 0; a < 8; ++a) {
    dim2[a] = f0.dim[a] + 4;
    n2 *= static_cast<std::size_t>(dim2[a]);
  }

  std::array<int, 8> c2{};
  for (std::size_t i2 = 0; i2 < n2; advance_odometer(c2, dim2), ++i2) {
    std::array<int, 8> off1{};
    for (int a = 0; a < 8; ++a) off1[a] = c2[a] - 1;
    const BoxProbe p1 = probe(off1, gu.dim, gu.stride);
    if (p1.violations >= 2) continue;

    std::array<W, 8> acc{}, lap{};
    bool active = false;
    bool lap_active = false;

    if (p1.violations == 1) {
      const int j = p1.axis;
      if (off1[j] == -1) {
        const std::size_t n = p1.base;  // D+ u sees u(m + e_j)
        if (gu.filled[n]) {
          scatter_diff<W>(acc, j, &gu.cell[n], nullptr, false);
          active = true;
        }
      } else {
        const std::size_t n =
            p1.base + static_cast<std::size_t>(gu.dim[j] - 1) * gu.stride[j];
        if (gv.filled[n]) {  // D- v sees -v(m - e_j)
          scatter_diff<W>(acc, j, nullptr, &gv.cell[n], false);
          active = true;
        }
      }
    } else {
      const std::size_t b = p1.base;
      const auto* uc = gu.filled[b] ? &gu.cell[b] : nullptr;
      const auto* vc = gv.filled[b] ? &gv.cell[b] : nullptr;
      for (int j = 0; j < 8; ++j) {
        const std::size_t s = gu.stride[j];
        const auto* up =
            off1[j] + 1 < gu.dim[j] && gu.filled[b + s] ? &gu.cell[b + s] : nullptr;
        if (up || uc) {
          scatter_diff(acc, j, up, uc, false);  // forward diff of u
          active = true;
        }
        const auto* vm =
            off1[j] - 1 >= 0 && gv.filled[b - s] ? &gv.cell[b - s] : nullptr;
        if (vc || vm) {
          scatter_diff(acc, j, vc, vm, false);  // backward diff of v
          active = true;
        }
      }

      // Star-Laplacian of f, nonzero at most one layer around the
      // support box.
      std::array<int, 8> off0{};
      for (int a = 0; a < 8; ++a) off0[a] = c2[a] - 2;
      const BoxProbe p0 = probe(off0, f0.dim, f0.stride);
      if (p0.violations == 1) {
        const int j = p0.axis;
        std::size_t n = f0.size();
        if (off0[j] == -1)
          n = p0.base;
        else if (off0[j] == f0.dim[j])
          n = p0.base + static_cast<std::size_t>(f0.dim[j] - 1) * f0.stride[j];
        if (n < f0.size() && f0.filled[n]) {
          add_array(lap, f0.cell[n]);
          lap_active = true;
        }
      } else if (p0.violations == 0) {
        const std::size_t b0 = p0.base;
        for (int j = 0; j < 8; ++j) {
          const std::size_t s0 = f0.stride[j];
          if (off0[j] + 1 < f0.dim[j] && f0.filled[b0 + s0]) {
            add_array(lap, f0.cell[b0 + s0]);
            lap_active = true;
          }
          if (off0[j] - 1 >= 0 && f0.filled[b0 - s0]) {
            add_array(lap, f0.cell[b0 - s0]);
            lap_active = true;
          }
        }
        if (f0.filled[b0]) {
          for (int k = 0; k < 8; ++k)
            if (!(f0.cell[b0][k] == 0)) lap[k] -= f0.cell[b0][k] * 16;
          lap_active = true;
        }
      }
    }

    if (!active && !lap_active) continue;
    emit(c2, lap, lap_active, acc, active);
  }
}

/// Dense-grid evaluation of the factorization residual for whole-lattice
/// functions whose two-layer stencil neighborhood fits in memory: the
/// same operator compositions as the generic path, with array indexing in
/// place of map lookups. Integer-valued exact inputs with h = 1 run on
/// arbitrary-precision integers (the values are identical; the single
/// division by 2 is restored on emission). Returns nullopt when not
/// applicable.
template <class S>
std::optional<LatticeFunction<S>> factorization_residual_dense(const LatticeFunction<S>& f) {
  if (f.region().kind != Region::Kind::Whole) return std::nullopt;
  LatticeFunction<S> out(f.h(), f.region());
  if (f.is_zero()) return out;

  MultiIndex lo = f.support().begin()->first;
  MultiIndex hi = lo;
  for (const auto& [m, val] : f.support())
    for (int a = 0; a < 8; ++a) {
      lo.m[a] = std::min(lo.m[a], m.m[a]);
      hi.m[a] = std::max(hi.m[a], m.m[a]);
    }

  constexpr std::size_t kMaxOuterSites = 8'000'000;
  constexpr std::size_t kMaxInnerSites = 1'500'000;
  std::array<int, 8> dim0{};
  std::size_t outer_sites = 1, inner_sites = 1;
  for (int a = 0; a < 8; ++a) {
    dim0[a] = hi.m[a] - lo.m[a] + 1;
    const std::size_t extent = static_cast<std::size_t>(dim0[a]) + 4;
    if (outer_sites > kMaxOuterSites / extent) return std::nullopt;
    outer_sites *= extent;
    inner_sites *= extent - 2;
  }
  if (inner_sites > kMaxInnerSites) return std::nullopt;

  MultiIndex lo2 = lo;
  for (int a = 0; a < 8; ++a) lo2.m[a] -= 2;
  const auto fill = [&](auto& box, const auto& to_working) {
    box.init(dim0);
    for (const auto& [m, val] : f.support()) {
      std::size_t i = 0;
      for (int a = 0; a < 8; ++a)
        i += static_cast<std::size_t>(m.m[a] - lo.m[a]) * box.stride[a];
      for (int k = 0; k < 8; ++k) box.cell[i][k] = to_working(val.c[k]);
      box.filled[i] = 1;
    }
  };
  const auto emit_site = [&](const std::array<int, 8>& c2, Octonion<S> val) {
    if (val.is_zero()) return;
    MultiIndex site;
    for (int a = 0; a < 8; ++a) site.m[a] = lo2.m[a] + c2[a];
    out.set(site, std::move(val));
  };

  const S one = ScalarTraits<S>::from_int(1);
  const bool unit_h = f.h() == one;

  if constexpr (std::is_same_v<S, Rational>) {
    using Int = boost::multiprecision::cpp_int;
    bool integral = unit_h;
    for (const auto& [m, val] : f.support()) {
      for (int k = 0; k < 8 && integral; ++k)
        integral = denominator(val.c[k]) == 1;
      if (!integral) break;
    }
    if (integral) {
      DenseBox<Int> f0;
      fill(f0, [](const Rational& q) { return numerator(q); });
      factorization_dense_core(
          f0, [](std::array<Int, 8>&) {},
          [&](const std::array<int, 8>& c2, const std::array<Int, 8>& lap, bool lap_active,
              const std::array<Int, 8>& acc, bool active) {
            Octonion<Rational> val;
            for (int k = 0; k < 8; ++k) {
              Int num;
              if (lap_active) num = lap[k] * 2;
              if (active) num -= acc[k];
              val.c[k] = Rational(std::move(num), Int(2));
            }
            emit_site(c2, std::move(val));
          });
      return out;
    }
  }

  const S inv_h = one / f.h();
  const S inv_h2 = inv_h * inv_h;
  const S outer_scale = inv_h / ScalarTraits<S>::from_int(2);

  DenseBox<S> f0;
  fill(f0, [](const S& x) { return x; });
  factorization_dense_core(
      f0,
      [&](std::array<S, 8>& w) {
        if (unit_h) return;
        for (auto& x : w) x *= inv_h;
      },
      [&](const std::array<int, 8>& c2, const std::array<S, 8>& lap, bool lap_active,
          const std::array<S, 8>& acc, bool active) {
        Octonion<S> val;
        for (int k = 0; k < 8; ++k) {
          if (lap_active) val.c[k] = unit_h ? lap[k] : lap[k] * inv_h2;
          if (active) val.c[k] -= acc[k] * outer_scale;
        }
        emit_site(c2, std::move(val));
      });
  return out;
}

}  // namespace detail

/// Residual of the factorization
/// Delta_h f - 1/2 (D+ (conj(D-) f) + D- (conj(D+) f)), all applications
/// left-sided. Identically zero; the return value is the testable witness.
/// Whole-lattice inputs with a modest bounding box take a dense-grid path
/// with the same arithmetic; everything else composes the operators above.
template <class S>
LatticeFunction<S> factorization_residual(const LatticeFunction<S>& f) {
  if (auto dense = detail::factorization_residual_dense(f)) return *std::move(dense);

  const OperatorVariant fwd{Direction::Forward, Side::Left, false};
  const OperatorVariant bwd{Direction::Backward, Side::Left, false};
  const OperatorVariant conj_fwd{Direction::Forward, Side::Left, true};
  const OperatorVariant conj_bwd{Direction::Backward, Side::Left, true};

  const LatticeFunction<S> a = apply_cr(apply_cr(f, conj_bwd), fwd);
  const LatticeFunction<S> b = apply_cr(apply_cr(f, conj_fwd), bwd);
  const S half = ScalarTraits<S>::from_int(1) / ScalarTraits<S>::from_int(2);
  return sub(star_laplacian(f), scaled(add(a, b), half));
}

}  // namespace octlab
