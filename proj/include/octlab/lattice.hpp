#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "octlab/algebra.hpp"

namespace octlab {

/// Lattice site m; the physical point is (m[0]h, ..., m[7]h). Axis j pairs
/// with basis unit e_j.
struct MultiIndex {
  std::array<int, 8> m{};

  auto operator<=>(const MultiIndex&) const = default;

  MultiIndex shifted(int axis, int step) const {
    MultiIndex r = *this;
    r.m[axis] += step;
    return r;
  }

  std::string to_string() const {
    std::ostringstream out;
    for (int i = 0; i < 8; ++i) {
      if (i) out << ' ';
      out << m[i];
    }
    return out.str();
  }
};

struct Region {
  enum class Kind { Whole, Upper, Lower, Box };

  Kind kind = Kind::Whole;
  MultiIndex lo{};  // box only
  MultiIndex hi{};  // box only

  static Region whole() { return Region{}; }

  static Region upper() {
    Region r;
    r.kind = Kind::Upper;
    return r;
  }

  static Region lower() {
    Region r;
    r.kind = Kind::Lower;
    return r;
  }

  static Region box(const MultiIndex& lo, const MultiIndex& hi) {
    for (int i = 0; i < 8; ++i)
      if (lo.m[i] > hi.m[i]) throw std::domain_error("empty box region");
    Region r;
    r.kind = Kind::Box;
    r.lo = lo;
    r.hi = hi;
    return r;
  }

  /// Sites admitted as data. UpperHalf includes the boundary layer m7 = 0,
  /// LowerHalf symmetrically.
  bool contains(const MultiIndex& p) const {
    switch (kind) {
      case Kind::Whole: return true;
      case Kind::Upper: return p.m[7] >= 0;
      case Kind::Lower: return p.m[7] <= 0;
      case Kind::Box:
        for (int i = 0; i < 8; ++i)
          if (p.m[i] < lo.m[i] || p.m[i] > hi.m[i]) return false;
        return true;
    }
    return false;
  }

  /// Sites where finite-difference operators act. Half-space interiors are
  /// m7 >= 1 (upper) and m7 <= -1 (lower); a box shrinks by one layer on
  /// every face so that all stencil neighbors stay inside.
  bool operator_interior(const MultiIndex& p) const {
    switch (kind) {
      case Kind::Whole: return true;
      case Kind::Upper: return p.m[7] >= 1;
      case Kind::Lower: return p.m[7] <= -1;
      case Kind::Box:
        for (int i = 0; i < 8; ++i)
          if (p.m[i] < lo.m[i] + 1 || p.m[i] > hi.m[i] - 1) return false;
        return true;
    }
    return false;
  }

  bool operator==(const Region&) const = default;

  std::string to_string() const {
    switch (kind) {
      case Kind::Whole: return "whole";
      case Kind::Upper: return "upper";
      case Kind::Lower: return "lower";
      case Kind::Box: {
        std::ostringstream out;
        out << "box ";
        for (int i = 0; i < 8; ++i) out << (i ? "," : "") << lo.m[i];
        out << "..";
        for (int i = 0; i < 8; ++i) out << (i ? "," : "") << hi.m[i];
        return out.str();
      }
    }
    return "whole";
  }

  static Region parse(const std::string& s);
};

inline MultiIndex parse_corner(const std::string& s) {
  MultiIndex r;
  std::string tok;
  std::istringstream in(s);
  int i = 0;
  while (std::getline(in, tok, ',')) {
    if (i >= 8) throw std::invalid_argument("corner has more than 8 coordinates");
    r.m[i++] = std::stoi(tok);
  }
  if (i != 8) throw std::invalid_argument("corner needs 8 coordinates");
  return r;
}

inline Region Region::parse(const std::string& s) {
  if (s == "whole") return whole();
  if (s == "upper") return upper();
  if (s == "lower") return lower();
  if (s.rfind("box ", 0) == 0) {
    const std::string rest = s.substr(4);
    const auto sep = rest.find("..");
    if (sep == std::string::npos) throw std::invalid_argument("box region needs lo..hi");
    return box(parse_corner(rest.substr(0, sep)), parse_corner(rest.substr(sep + 2)));
  }
  throw std::invalid_argument("unknown region: '" + s + "'");
}

/// Finitely-supported octonion-valued function on the lattice h*Z^8 (or a
/// half-space / box restriction). Sparse canonical form: zero values are
/// never stored; iteration over support is lexicographic.
template <class S>
class LatticeFunction {
 public:
  using Support = std::map<MultiIndex, Octonion<S>>;

  LatticeFunction(S h, Region region) : h_(std::move(h)), region_(region) {
    if (!(h_ > ScalarTraits<S>::from_int(0)))
      throw std::domain_error("lattice constant h must be positive");
  }

  const S& h() const { return h_; }
  const Region& region() const { return region_; }
  const Support& support() const { return values_; }
  std::size_t support_size() const { return values_.size(); }

  /// Zero outside the stored support.
  Octonion<S> at(const MultiIndex& site) const {
    const auto it = values_.find(site);
    return it == values_.end() ? Octonion<S>::zero() : it->second;
  }

  void set(const MultiIndex& site, Octonion<S> value) {
    if (!region_.contains(site))
      throw std::domain_error("site outside region: " + site.to_string());
    if (value.is_zero())
      values_.erase(site);
    else
      values_[site] = std::move(value);
  }

  void add_at(const MultiIndex& site, const Octonion<S>& value) {
    set(site, at(site) + value);
  }

  bool is_zero() const { return values_.empty(); }

  bool operator==(const LatticeFunction&) const = default;

 private:
  S h_;
  Region region_;
  Support values_;
};

template <class S>
void require_compatible(const LatticeFunction<S>& a, const LatticeFunction<S>& b) {
  if (!(a.h() == b.h())) throw std::domain_error("lattice constants differ");
  if (!(a.region() == b.region())) throw std::domain_error("regions differ");
}

template <class S>
LatticeFunction<S> add(const LatticeFunction<S>& a, const LatticeFunction<S>& b) {
  require_compatible(a, b);
  LatticeFunction<S> r = a;
  for (const auto& [site, v] : b.support()) r.add_at(site, v);
  return r;
}

template <class S>
LatticeFunction<S> sub(const LatticeFunction<S>& a, const LatticeFunction<S>& b) {
  require_compatible(a, b);
  LatticeFunction<S> r = a;
  for (const auto& [site, v] : b.support()) r.add_at(site, -v);
  return r;
}

template <class S>
LatticeFunction<S> scaled(const LatticeFunction<S>& f, const S& s) {
  LatticeFunction<S> r(f.h(), f.region());
  for (const auto& [site, v] : f.support()) r.set(site, v.scaled(s));
  return r;
}

/// Sitewise right multiplication by a constant octonion (the paper-style
/// g = f * e_3 construction).
template <class S>
LatticeFunction<S> rmul_const(const LatticeFunction<S>& f, const Octonion<S>& c) {
  LatticeFunction<S> r(f.h(), f.region());
  for (const auto& [site, v] : f.support()) r.set(site, mul(v, c));
  return r;
}

// ---- deterministic generators ------------------------------------------

template <class S>
LatticeFunction<S> delta(const MultiIndex& site, const S& h, Region region = Region::whole()) {
  LatticeFunction<S> f(h, region);
  f.set(site, Octonion<S>::unit(0));
  return f;
}

/// f(m) = (m[axis] * h) * coeff on the box, zero outside. Sums of these
/// express the linear counterexample family x_1 - x_2 e_4.
template <class S>
LatticeFunction<S> linear(int axis, const Octonion<S>& coeff, const MultiIndex& lo,
                          const MultiIndex& hi, const S& h) {
  if (axis < 0 || axis > 7) throw std::domain_error("axis out of range");
  LatticeFunction<S> f(h, Region::box(lo, hi));
  MultiIndex m = lo;
  for (;;) {
    if (m.m[axis] != 0 && !coeff.is_zero())
      f.set(m, coeff.scaled(ScalarTraits<S>::from_int(m.m[axis]) * h));
    int a = 7;
    while (a >= 0) {
      if (++m.m[a] <= hi.m[a]) break;
      m.m[a] = lo.m[a];
      --a;
    }
    if (a < 0) break;
  }
  return f;
}

namespace detail {

inline int small_int(std::mt19937_64& rng) {
  // [-9, 9]; avoids uniform_int_distribution (implementation-defined).
  return static_cast<int>(rng() % 19) - 9;
}

inline double unit_double(std::mt19937_64& rng) {
  // [-1, 1)
  return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

template <class S>
S random_coeff(std::mt19937_64& rng) {
  if constexpr (ScalarTraits<S>::exact)
    return ScalarTraits<S>::from_int(small_int(rng));
  else
    return unit_double(rng);
}

}  // namespace detail

/// Deterministic pseudo-random function: small-integer coefficients in
/// rational mode, uniform [-1,1) in float mode, at every box site admitted
/// by `region`. Same seed, same function, on every platform.
template <class S>
LatticeFunction<S> random_function(const MultiIndex& lo, const MultiIndex& hi,
                                   std::uint64_t seed, const S& h,
                                   Region region = Region::whole()) {
  Region::box(lo, hi);  // validates non-emptiness
  LatticeFunction<S> f(h, region);
  std::mt19937_64 rng(seed);
  MultiIndex m = lo;
  for (;;) {
    Octonion<S> v;
    for (int i = 0; i < 8; ++i) v.c[i] = detail::random_coeff<S>(rng);
    if (region.contains(m)) f.set(m, v);
    int a = 7;
    while (a >= 0) {
      if (++m.m[a] <= hi.m[a]) break;
      m.m[a] = lo.m[a];
      --a;
    }
    if (a < 0) break;
  }
  return f;
}

// ---- text serialization -------------------------------------------------

struct ParseError : std::runtime_error {
  int line;

  ParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

template <class S>
void write_function(std::ostream& out, const LatticeFunction<S>& f) {
  out << "h=" << ScalarTraits<S>::format(f.h()) << " region=" << f.region().to_string()
      << " mode=" << ScalarTraits<S>::mode_name() << "\n";
  for (const auto& [site, v] : f.support())
    out << site.to_string() << " : " << format_octonion(v) << "\n";
}

template <class S>
void write_function(const std::string& path, const LatticeFunction<S>& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_function(out, f);
}

template <class S>
LatticeFunction<S> read_function(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError(1, "missing header");

  // Positional: `h=<scalar> region=<...> mode=<exact|float>`; the region
  // field may itself contain a space (box lo..hi).
  if (header.rfind("h=", 0) != 0) throw ParseError(1, "header must start with 'h='");
  const auto region_pos = header.find(" region=");
  const auto mode_pos = header.rfind(" mode=");
  if (region_pos == std::string::npos || mode_pos == std::string::npos ||
      mode_pos <= region_pos)
    throw ParseError(1, "header must be 'h=<scalar> region=<region> mode=<mode>'");
  const std::string h_str = header.substr(2, region_pos - 2);
  const std::string region_str =
      header.substr(region_pos + 8, mode_pos - (region_pos + 8));
  const std::string mode_str = header.substr(mode_pos + 6);
  if (mode_str != ScalarTraits<S>::mode_name())
    throw ParseError(1, "mode '" + mode_str + "' does not match requested scalar mode '" +
                            ScalarTraits<S>::mode_name() + "'");

  S h;
  Region region = Region::whole();
  try {
    h = ScalarTraits<S>::parse_canonical(h_str);
    region = Region::parse(region_str);
  } catch (const std::exception& e) {
    throw ParseError(1, e.what());
  }

  LatticeFunction<S> f(h, region);
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    MultiIndex site;
    std::string tok;
    try {
      for (int i = 0; i < 8; ++i) {
        if (!(ls >> tok)) throw std::invalid_argument("expected 8 site coordinates");
        site.m[i] = std::stoi(tok);
      }
      if (!(ls >> tok) || tok != ":") throw std::invalid_argument("expected ':' separator");
      Octonion<S> v;
      for (int i = 0; i < 8; ++i) {
        if (!(ls >> tok)) throw std::invalid_argument("expected 8 coefficients");
        v.c[i] = ScalarTraits<S>::parse_canonical(tok);
      }
      if (ls >> tok) throw std::invalid_argument("trailing tokens");
      if (f.support().count(site))
        throw std::invalid_argument("duplicate site " + site.to_string());
      f.set(site, v);
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return f;
}

template <class S>
LatticeFunction<S> read_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_function<S>(in);
}

}  // namespace octlab
