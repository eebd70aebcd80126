#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "octlab/operators.hpp"

#include "json.hpp"

namespace octlab {

/// Sign of the second summand g (D- f) in the pairing. Minus reproduces
/// the whole-space Stokes claim; plus reproduces the discrete-Clifford
/// style pairing whose correction is the associator volume term.
enum class PairingSign : int { Plus = +1, Minus = -1 };

inline int sign_value(PairingSign s) { return static_cast<int>(s); }

inline std::string sign_name(PairingSign s) {
  return s == PairingSign::Plus ? "plus" : "minus";
}

inline PairingSign parse_sign(const std::string& s) {
  if (s == "plus") return PairingSign::Plus;
  if (s == "minus") return PairingSign::Minus;
  throw std::invalid_argument("sign must be plus|minus");
}

namespace detail {

template <class S>
void check_pairing_args(const LatticeFunction<S>& g, const LatticeFunction<S>& f,
                        const Region& region) {
  require_compatible(g, f);
  if (!(g.region() == region)) throw std::domain_error("function region does not match pairing region");
  if (region.kind == Region::Kind::Box)
    throw std::domain_error("pairing regions are whole|upper|lower");
}

}  // namespace detail

/// The bilinear Stokes sum
///   sum_m { [g D+](m) f(m) + s * g(m) [D- f](m) } h^8
/// over the region's operator-interior. [g D+] is the right-forward
/// application; every product keeps its written parenthesization.
template <class S>
Octonion<S> pairing(const LatticeFunction<S>& g, const LatticeFunction<S>& f, PairingSign s,
                    const Region& region) {
  detail::check_pairing_args(g, f, region);
  const OperatorVariant right_fwd{Direction::Forward, Side::Right, false};
  const OperatorVariant left_bwd{Direction::Backward, Side::Left, false};

  Octonion<S> acc;
  // First summand: [g D+](m) f(m). Nonzero only where f is.
  for (const auto& [m, fv] : f.support()) {
    if (!region.operator_interior(m)) continue;
    acc += mul(cr_at(g, m, right_fwd), fv);
  }
  // Second summand: s * g(m) [D- f](m). Nonzero only where g is.
  for (const auto& [m, gv] : g.support()) {
    if (!region.operator_interior(m)) continue;
    const Octonion<S> t = mul(gv, cr_at(f, m, left_bwd));
    if (s == PairingSign::Plus)
      acc += t;
    else
      acc -= t;
  }
  return acc.scaled(scalar_pow(g.h(), 8));
}

/// T_s(i,j,k) = s * e_i(e_j e_k) - (e_i e_j) e_k, always a multiple of a
/// single basis unit: coeff in {0, +-2} times e_index.
struct TripleTerm {
  int coeff;
  int index;
};

inline TripleTerm pairing_triple_term(PairingSign s, int i, int j, int k) {
  const BasisProduct ij = kBasisTable[i][j];
  const BasisProduct lhs = kBasisTable[ij.index][k];
  const BasisProduct jk = kBasisTable[j][k];
  const BasisProduct rhs = kBasisTable[i][jk.index];
  return {sign_value(s) * jk.sign * rhs.sign - ij.sign * lhs.sign, lhs.index};
}

/// The summation-by-parts value of the pairing:
///   sum_m sum_{i,j,k} g_i(m) (d-_j f_k)(m) T_s(i,j,k) h^8
/// over the operator-interior. For s = minus, T vanishes exactly on
/// anti-associative triples; for s = plus, T = -[e_i, e_j, e_k].
template <class S>
Octonion<S> correction_term(const LatticeFunction<S>& g, const LatticeFunction<S>& f,
                            PairingSign s, const Region& region) {
  detail::check_pairing_args(g, f, region);

  struct Entry {
    int i, j, k, coeff, index;
  };
  std::vector<Entry> entries;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        const TripleTerm t = pairing_triple_term(s, i, j, k);
        if (t.coeff != 0) entries.push_back({i, j, k, t.coeff, t.index});
      }

  const S inv_h = ScalarTraits<S>::from_int(1) / g.h();
  Octonion<S> acc;
  for (const auto& [m, gv] : g.support()) {
    if (!region.operator_interior(m)) continue;
    // Backward differences of every component of f at m.
    std::array<Octonion<S>, 8> d;
    const Octonion<S> center = f.at(m);
    for (int j = 0; j < 8; ++j) d[j] = (center - f.at(m.shifted(j, -1))).scaled(inv_h);
    for (const auto& e : entries) {
      const S term = gv.c[e.i] * d[e.j].c[e.k];
      switch (e.coeff) {
        case 2: acc.c[e.index] += term + term; break;
        case -2: acc.c[e.index] -= term + term; break;
        default: acc.c[e.index] += term * ScalarTraits<S>::from_int(e.coeff); break;
      }
    }
  }
  return acc.scaled(scalar_pow(g.h(), 8));
}

/// The boundary expression exactly as the half-lattice theorems print it:
/// upper:  sum_{m_} e_7 (g(m_,1) f(m_,0)) h^p
/// lower: -sum_{m_} e_7 (g(m_,0) f(m_,-1)) h^p
/// with p selectable in {7, 8}.
template <class S>
Octonion<S> boundary_term_claim(const LatticeFunction<S>& g, const LatticeFunction<S>& f,
                                const Region& region, int h_power) {
  detail::check_pairing_args(g, f, region);
  if (region.kind == Region::Kind::Whole)
    throw std::domain_error("boundary term requires a half-space region");
  if (h_power != 7 && h_power != 8) throw std::domain_error("h_power must be 7 or 8");

  const bool upper = region.kind == Region::Kind::Upper;
  const int g_layer = upper ? 1 : 0;
  const int f_layer = upper ? 0 : -1;

  Octonion<S> acc;
  for (const auto& [m, gv] : g.support()) {
    if (m.m[7] != g_layer) continue;
    const Octonion<S> fv = f.at(m.shifted(7, f_layer - g_layer));
    if (fv.is_zero()) continue;
    acc += mul_basis_left(7, mul(gv, fv));
  }
  if (!upper) acc = -acc;
  return acc.scaled(scalar_pow(g.h(), h_power));
}

/// The interface term the layer-split summation by parts actually
/// produces:
/// upper: -sum_{m_} sum_{i,k} g_i(m_,1) f_k(m_,0) (e_i e_7) e_k h^7
/// lower: +sum_{m_} sum_{i,k} g_i(m_,0) f_k(m_,-1) (e_i e_7) e_k h^7
/// This is the unique term closing the half-space identity; the
/// brute-force oracle certifies it.
template <class S>
Octonion<S> boundary_term_derived(const LatticeFunction<S>& g, const LatticeFunction<S>& f,
                                  const Region& region) {
  detail::check_pairing_args(g, f, region);
  if (region.kind == Region::Kind::Whole)
    throw std::domain_error("boundary term requires a half-space region");

  const bool upper = region.kind == Region::Kind::Upper;
  const int g_layer = upper ? 1 : 0;
  const int f_layer = upper ? 0 : -1;

  Octonion<S> acc;
  for (const auto& [m, gv] : g.support()) {
    if (m.m[7] != g_layer) continue;
    const Octonion<S> fv = f.at(m.shifted(7, f_layer - g_layer));
    if (fv.is_zero()) continue;
    for (int i = 0; i < 8; ++i)
      for (int k = 0; k < 8; ++k) {
        const BasisProduct i7 = kBasisTable[i][7];
        const BasisProduct p = kBasisTable[i7.index][k];
        const S term = gv.c[i] * fv.c[k];
        if (i7.sign * p.sign > 0)
          acc.c[p.index] += term;
        else
          acc.c[p.index] -= term;
      }
  }
  if (upper) acc = -acc;
  return acc.scaled(scalar_pow(g.h(), 7));
}

/// Naive full expansion of the pairing: every site of the padded bounding
/// box, every (i,j,k) component triple, basis_mul only. No summation by
/// parts, no sparsity shortcuts, no shared code with pairing(). Certifies
/// every derived identity.
template <class S>
Octonion<S> brute_force_oracle(const LatticeFunction<S>& g, const LatticeFunction<S>& f,
                               PairingSign s, const Region& region) {
  detail::check_pairing_args(g, f, region);

  MultiIndex lo, hi;
  bool first = true;
  for (const auto* fn : {&g, &f})
    for (const auto& [m, v] : fn->support()) {
      for (int a = 0; a < 8; ++a) {
        if (first || m.m[a] < lo.m[a]) lo.m[a] = m.m[a];
        if (first || m.m[a] > hi.m[a]) hi.m[a] = m.m[a];
      }
      first = false;
    }
  if (first) return Octonion<S>::zero();
  long long sites = 1;
  for (int a = 0; a < 8; ++a) {
    lo.m[a] -= 1;
    hi.m[a] += 1;
    sites *= hi.m[a] - lo.m[a] + 1;
    if (sites > 10'000'000)
      throw std::runtime_error(
          "brute_force_oracle: padded bounding box exceeds 10^7 sites; refusing");
  }

  const S inv_h = ScalarTraits<S>::from_int(1) / g.h();
  const S zero = ScalarTraits<S>::from_int(0);
  Octonion<S> acc;
  MultiIndex m = lo;
  for (;;) {
    if (region.operator_interior(m)) {
      const Octonion<S> gm = g.at(m);
      const Octonion<S> fm = f.at(m);
      for (int j = 0; j < 8; ++j) {
        const Octonion<S> gp = g.at(m.shifted(j, 1));
        const Octonion<S> fb = f.at(m.shifted(j, -1));
        for (int i = 0; i < 8; ++i) {
          // [d+_j g_i e_i e_j] f_k e_k, parenthesized (e_i e_j) e_k
          const S dg = (gp.c[i] - gm.c[i]) * inv_h;
          const S gi = gm.c[i];
          if (dg == zero && gi == zero) continue;
          for (int k = 0; k < 8; ++k) {
            if (dg != zero && fm.c[k] != zero) {
              const BasisProduct ij = basis_mul(i, j);
              const BasisProduct u = basis_mul(ij.index, k);
              const S term = dg * fm.c[k];
              if (ij.sign * u.sign > 0)
                acc.c[u.index] += term;
              else
                acc.c[u.index] -= term;
            }
            // s * g_i e_i (e_j d-_j f_k e_k), parenthesized e_i (e_j e_k)
            const S df = (fm.c[k] - fb.c[k]) * inv_h;
            if (gi != zero && df != zero) {
              const BasisProduct jk = basis_mul(j, k);
              const BasisProduct u = basis_mul(i, jk.index);
              const S term = gi * df;
              if (sign_value(s) * jk.sign * u.sign > 0)
                acc.c[u.index] += term;
              else
                acc.c[u.index] -= term;
            }
          }
        }
      }
    }
    int a = 7;
    while (a >= 0) {
      if (++m.m[a] <= hi.m[a]) break;
      m.m[a] = lo.m[a];
      --a;
    }
    if (a < 0) break;
  }
  return acc.scaled(scalar_pow(g.h(), 8));
}

enum class Theorem { T1, T2, T3 };

inline std::string theorem_name(Theorem t) {
  switch (t) {
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    case Theorem::T3: return "T3";
  }
  return "T1";
}

inline Theorem parse_theorem(const std::string& s) {
  if (s == "T1") return Theorem::T1;
  if (s == "T2") return Theorem::T2;
  if (s == "T3") return Theorem::T3;
  throw std::invalid_argument("theorem must be T1|T2|T3");
}

inline Region theorem_region(Theorem t) {
  switch (t) {
    case Theorem::T1: return Region::whole();
    case Theorem::T2: return Region::upper();
    case Theorem::T3: return Region::lower();
  }
  return Region::whole();
}

/// Structured record of one claim-vs-derived comparison. claim_residual is
/// reported, never asserted; derived_residual checks a provable identity
/// and must be exactly zero in rational mode.
template <class S>
struct IdentityReport {
  Theorem theorem = Theorem::T1;
  Region region = Region::whole();
  PairingSign sign = PairingSign::Minus;
  S h{};
  int h_power = 7;
  std::uint64_t seed = 0;
  std::string box;
  Octonion<S> claim_lhs;
  Octonion<S> claim_rhs;
  Octonion<S> claim_residual;
  Octonion<S> derived_value;
  Octonion<S> derived_residual;
  std::size_t site_count = 0;
  double elapsed_ms = 0.0;
};

template <class S>
IdentityReport<S> theorem_report(const LatticeFunction<S>& g, const LatticeFunction<S>& f,
                                 Theorem t, int h_power = 7, std::uint64_t seed = 0,
                                 std::string box_desc = {}) {
  const auto start = std::chrono::steady_clock::now();
  const Region region = theorem_region(t);

  IdentityReport<S> rep;
  rep.theorem = t;
  rep.region = region;
  rep.sign = PairingSign::Minus;
  rep.h = g.h();
  rep.h_power = h_power;
  rep.seed = seed;
  rep.box = std::move(box_desc);
  rep.site_count = g.support_size() + f.support_size();

  rep.claim_lhs = pairing(g, f, PairingSign::Minus, region);
  rep.claim_rhs = t == Theorem::T1 ? Octonion<S>::zero()
                                   : boundary_term_claim(g, f, region, h_power);
  rep.claim_residual = rep.claim_lhs - rep.claim_rhs;

  rep.derived_value = correction_term(g, f, PairingSign::Minus, region);
  if (t != Theorem::T1) rep.derived_value += boundary_term_derived(g, f, region);
  rep.derived_residual = rep.claim_lhs - rep.derived_value;

  rep.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return rep;
}

template <class S>
nlohmann::json octonion_to_json(const Octonion<S>& o) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < 8; ++i) arr.push_back(ScalarTraits<S>::format(o.c[i]));
  return arr;
}

template <class S>
nlohmann::json report_to_json(const IdentityReport<S>& rep) {
  return nlohmann::json{
      {"theorem", theorem_name(rep.theorem)},
      {"region", rep.region.to_string()},
      {"sign", sign_name(rep.sign)},
      {"h", ScalarTraits<S>::format(rep.h)},
      {"h_power", rep.h_power},
      {"mode", ScalarTraits<S>::mode_name()},
      {"seed", rep.seed},
      {"box", rep.box},
      {"claim_lhs", octonion_to_json(rep.claim_lhs)},
      {"claim_rhs", octonion_to_json(rep.claim_rhs)},
      {"claim_residual", octonion_to_json(rep.claim_residual)},
      {"derived_residual", octonion_to_json(rep.derived_residual)},
      {"site_count", rep.site_count},
      {"elapsed_ms", rep.elapsed_ms},
  };
}

}  // namespace octlab
