#pragma once

#include <array>
#include <sstream>
#include <stdexcept>
#include <string>

#include "octlab/scalar.hpp"

namespace octlab {

/// Signed basis unit: sign * e_index. Every product of two basis units is
/// of this form (octonions have no zero divisors).
struct BasisProduct {
  int sign;
  int index;

  bool operator==(const BasisProduct&) const = default;
};

/// The full 8x8 basis multiplication table. Entry [i][j] is e_i * e_j.
/// e_0 is the real unit; e_i^2 = -e_0 for i >= 1.
inline constexpr std::array<std::array<BasisProduct, 8>, 8> kBasisTable{{
    // row e_0
    {{{+1, 0}, {+1, 1}, {+1, 2}, {+1, 3}, {+1, 4}, {+1, 5}, {+1, 6}, {+1, 7}}},
    // row e_1
    {{{+1, 1}, {-1, 0}, {+1, 4}, {+1, 5}, {-1, 2}, {-1, 3}, {-1, 7}, {+1, 6}}},
    // row e_2
    {{{+1, 2}, {-1, 4}, {-1, 0}, {+1, 6}, {+1, 1}, {+1, 7}, {-1, 3}, {-1, 5}}},
    // row e_3
    {{{+1, 3}, {-1, 5}, {-1, 6}, {-1, 0}, {-1, 7}, {+1, 1}, {+1, 2}, {+1, 4}}},
    // row e_4
    {{{+1, 4}, {+1, 2}, {-1, 1}, {+1, 7}, {-1, 0}, {-1, 6}, {+1, 5}, {-1, 3}}},
    // row e_5
    {{{+1, 5}, {+1, 3}, {-1, 7}, {-1, 1}, {+1, 6}, {-1, 0}, {-1, 4}, {+1, 2}}},
    // row e_6
    {{{+1, 6}, {+1, 7}, {+1, 3}, {-1, 2}, {-1, 5}, {+1, 4}, {-1, 0}, {-1, 1}}},
    // row e_7
    {{{+1, 7}, {-1, 6}, {+1, 5}, {-1, 4}, {+1, 3}, {-1, 2}, {+1, 1}, {-1, 0}}},
}};

inline BasisProduct basis_mul(int i, int j) {
  if (i < 0 || i > 7 || j < 0 || j > 7)
    throw std::domain_error("basis index out of range: (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
  return kBasisTable[i][j];
}

/// Independent reconstruction of the table from the seven oriented
/// quaternionic lines (e_a e_b = e_c cyclically). Used as the reference in
/// table-fidelity checks; intentionally a separate code path from
/// kBasisTable.
inline std::array<std::array<BasisProduct, 8>, 8> reference_table_from_lines() {
  constexpr std::array<std::array<int, 3>, 7> lines{{
      {1, 2, 4}, {1, 3, 5}, {2, 3, 6}, {4, 3, 7}, {1, 7, 6}, {2, 5, 7}, {5, 4, 6}}};
  std::array<std::array<BasisProduct, 8>, 8> t{};
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      if (i == 0) { t[i][j] = {+1, j}; continue; }
      if (j == 0) { t[i][j] = {+1, i}; continue; }
      if (i == j) { t[i][j] = {-1, 0}; continue; }
      BasisProduct p{0, 0};
      for (const auto& ln : lines) {
        const int a = ln[0], b = ln[1], c = ln[2];
        if (i == a && j == b) p = {+1, c};
        else if (i == b && j == c) p = {+1, a};
        else if (i == c && j == a) p = {+1, b};
        else if (i == b && j == a) p = {-1, c};
        else if (i == c && j == b) p = {-1, a};
        else if (i == a && j == c) p = {-1, b};
        else continue;
        break;
      }
      t[i][j] = p;
    }
  return t;
}

template <class S>
struct Octonion {
  using Traits = ScalarTraits<S>;

  std::array<S, 8> c{};

  static Octonion zero() { return Octonion{}; }

  static Octonion unit(int i) {
    if (i < 0 || i > 7) throw std::domain_error("basis index out of range");
    Octonion o;
    o.c[i] = Traits::from_int(1);
    return o;
  }

  bool is_zero() const {
    for (const auto& v : c)
      if (!(v == Traits::from_int(0))) return false;
    return true;
  }

  bool operator==(const Octonion&) const = default;

  Octonion operator+(const Octonion& o) const {
    Octonion r;
    for (int i = 0; i < 8; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }

  Octonion operator-(const Octonion& o) const {
    Octonion r;
    for (int i = 0; i < 8; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }

  Octonion operator-() const {
    Octonion r;
    for (int i = 0; i < 8; ++i) r.c[i] = -c[i];
    return r;
  }

  Octonion& operator+=(const Octonion& o) {
    for (int i = 0; i < 8; ++i) c[i] += o.c[i];
    return *this;
  }

  Octonion& operator-=(const Octonion& o) {
    for (int i = 0; i < 8; ++i) c[i] -= o.c[i];
    return *this;
  }

  Octonion scaled(const S& s) const {
    Octonion r;
    for (int i = 0; i < 8; ++i) r.c[i] = c[i] * s;
    return r;
  }

  S max_abs_component() const {
    S m = Traits::from_int(0);
    for (const auto& v : c) {
      S a = Traits::abs(v);
      if (a > m) m = a;
    }
    return m;
  }
};

/// Bilinear extension of the basis table; the written operand order is
/// preserved (octonion multiplication is neither commutative nor
/// associative).
template <class S>
Octonion<S> mul(const Octonion<S>& a, const Octonion<S>& b) {
  Octonion<S> r;
  for (int i = 0; i < 8; ++i) {
    if (a.c[i] == ScalarTraits<S>::from_int(0)) continue;
    for (int j = 0; j < 8; ++j) {
      if (b.c[j] == ScalarTraits<S>::from_int(0)) continue;
      const BasisProduct p = kBasisTable[i][j];
      const S term = a.c[i] * b.c[j];
      if (p.sign > 0)
        r.c[p.index] += term;
      else
        r.c[p.index] -= term;
    }
  }
  return r;
}

template <class S>
Octonion<S> operator*(const Octonion<S>& a, const Octonion<S>& b) {
  return mul(a, b);
}

/// a * e_j with the basis unit on the right.
template <class S>
Octonion<S> mul_basis_right(const Octonion<S>& a, int j) {
  Octonion<S> r;
  for (int i = 0; i < 8; ++i) {
    const BasisProduct p = kBasisTable[i][j];
    if (p.sign > 0)
      r.c[p.index] += a.c[i];
    else
      r.c[p.index] -= a.c[i];
  }
  return r;
}

/// e_j * a with the basis unit on the left.
template <class S>
Octonion<S> mul_basis_left(int j, const Octonion<S>& a) {
  Octonion<S> r;
  for (int i = 0; i < 8; ++i) {
    const BasisProduct p = kBasisTable[j][i];
    if (p.sign > 0)
      r.c[p.index] += a.c[i];
    else
      r.c[p.index] -= a.c[i];
  }
  return r;
}

template <class S>
Octonion<S> conj(const Octonion<S>& a) {
  Octonion<S> r = a;
  for (int i = 1; i < 8; ++i) r.c[i] = -r.c[i];
  return r;
}

template <class S>
S norm_sq(const Octonion<S>& a) {
  S r = ScalarTraits<S>::from_int(0);
  for (const auto& v : a.c) r += v * v;
  return r;
}

/// [a,b,c] = (ab)c - a(bc). Trilinear and alternating.
template <class S>
Octonion<S> associator(const Octonion<S>& a, const Octonion<S>& b, const Octonion<S>& c) {
  return mul(mul(a, b), c) - mul(a, mul(b, c));
}

/// Sign sigma with (e_i e_j) e_k = sigma * e_i (e_j e_k). Well defined
/// because both parenthesizations are signed units with the same index.
inline int triple_sign(int i, int j, int k) {
  const BasisProduct ij = basis_mul(i, j);
  const BasisProduct lhs = basis_mul(ij.index, k);
  const BasisProduct jk = basis_mul(j, k);
  const BasisProduct rhs = basis_mul(i, jk.index);
  // lhs.index == rhs.index always holds; keep the guard as a tripwire.
  if (lhs.index != rhs.index)
    throw std::logic_error("basis triple with mismatched product index");
  return (ij.sign * lhs.sign) * (jk.sign * rhs.sign);
}

struct TripleCensus {
  int associative = 0;
  int anti_associative = 0;

  bool operator==(const TripleCensus&) const = default;
};

/// Classifies all 512 ordered basis triples by associativity of the two
/// parenthesizations.
inline TripleCensus triple_census() {
  TripleCensus census;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        if (triple_sign(i, j, k) > 0)
          ++census.associative;
        else
          ++census.anti_associative;
      }
  return census;
}

/// Report form: `c0 c1 c2 c3 c4 c5 c6 c7`, rationals as p/q, floats with
/// 17 significant digits.
template <class S>
std::string format_octonion(const Octonion<S>& o) {
  std::ostringstream out;
  for (int i = 0; i < 8; ++i) {
    if (i) out << ' ';
    out << ScalarTraits<S>::format(o.c[i]);
  }
  return out.str();
}

}  // namespace octlab
