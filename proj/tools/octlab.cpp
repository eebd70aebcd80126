// octlab command-line front end: seeded verification suites over the
// octonion algebra, the discrete Cauchy-Riemann operators, and the
// discrete Stokes identities. Exit codes: 0 success, 1 identity-suite
// failure, 2 usage/config error, 3 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "octlab/stokes.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using namespace octlab;
using nlohmann::json;

constexpr int kExitIdentityFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct RunConfig {
  std::string mode = "exact";
  std::string h = "1";
  int radius = 1;
  std::uint64_t seed = 1;
  int seeds = 1;
  std::string theorem = "T1";
  std::string sign = "minus";
  int h_power = 7;
  std::optional<double> tol;
  std::string out;
  std::string csv;
  std::vector<std::string> function_files;
  bool force = false;
  int samples = 100;
};

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  out << report.dump(2) << "\n";
}

int check_config(const RunConfig& cfg) {
  if (cfg.mode != "exact" && cfg.mode != "float") {
    std::cerr << "error: --mode must be exact|float\n";
    return kExitUsage;
  }
  if (cfg.mode == "exact" && cfg.tol) {
    std::cerr << "error: --tol is forbidden in exact mode\n";
    return kExitUsage;
  }
  if (cfg.mode == "float" && !cfg.tol) {
    std::cerr << "error: float mode requires an explicit --tol\n";
    return kExitUsage;
  }
  if (cfg.radius > 3 && !cfg.force) {
    std::cerr << "error: --radius > 3 needs --force (site count exceeds 7^8)\n";
    return kExitUsage;
  }
  if (cfg.radius < 0) {
    std::cerr << "error: --radius must be non-negative\n";
    return kExitUsage;
  }
  return 0;
}

template <class S>
S parse_h(const std::string& s) {
  return ScalarTraits<S>::parse(s);
}

MultiIndex uniform_corner(int radius, int sign) {
  MultiIndex c;
  for (int i = 0; i < 8; ++i) c.m[i] = sign * radius;
  return c;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Box for one Stokes case. T1 uses the full radius-r box; half-space
/// theorems use a slab covering the boundary layer plus radius+1 interior
/// layers along axis 7.
void stokes_box(Theorem t, int radius, MultiIndex& lo, MultiIndex& hi) {
  lo = uniform_corner(radius, -1);
  hi = uniform_corner(radius, +1);
  if (t == Theorem::T2) {
    lo.m[7] = 0;
    hi.m[7] = radius + 1;
  } else if (t == Theorem::T3) {
    lo.m[7] = -radius - 1;
    hi.m[7] = 0;
  }
}

// ---- verify-algebra -----------------------------------------------------

using Table = std::array<std::array<BasisProduct, 8>, 8>;

std::optional<std::pair<int, int>> find_table_defect(const Table& table) {
  const Table ref = reference_table_from_lines();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (!(table[i][j] == ref[i][j])) return std::make_pair(i, j);
  return std::nullopt;
}

Octonion<Rational> random_octonion(std::mt19937_64& rng) {
  Octonion<Rational> o;
  for (int i = 0; i < 8; ++i) o.c[i] = Rational(detail::small_int(rng));
  return o;
}

int cmd_verify_algebra(const RunConfig& cfg, const std::optional<std::pair<int, int>>& corrupt) {
  using O = Octonion<Rational>;
  json report;
  bool ok = true;

  Table table = kBasisTable;
  if (corrupt) table[corrupt->first][corrupt->second].sign *= -1;
  if (const auto defect = find_table_defect(table)) {
    ok = false;
    report["table"] = {{"ok", false},
                       {"offending_pair", {defect->first, defect->second}}};
  } else {
    report["table"] = {{"ok", true}};
  }

  bool anticommute = true;
  for (int i = 1; i < 8 && anticommute; ++i)
    for (int j = 1; j < 8 && anticommute; ++j) {
      if (i == j) continue;
      const auto ij = basis_mul(i, j);
      const auto ji = basis_mul(j, i);
      anticommute = ij.index == ji.index && ij.sign == -ji.sign;
    }
  report["anticommutativity"] = anticommute;
  ok = ok && anticommute;

  bool alternative = true;
  bool moufang = true;
  bool norm_mult = true;
  bool assoc_alt = true;
  bool no_zero_divisors = true;
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < 8 && alternative; ++i)
    for (int j = 0; j < 8 && alternative; ++j) {
      const O a = O::unit(i), b = O::unit(j);
      alternative = mul(a, mul(a, b)) == mul(mul(a, a), b) &&
                    mul(mul(a, b), b) == mul(a, mul(b, b));
    }
  for (int n = 0; n < cfg.samples; ++n) {
    const O a = random_octonion(rng), b = random_octonion(rng), c = random_octonion(rng);
    alternative = alternative && mul(a, mul(a, b)) == mul(mul(a, a), b) &&
                  mul(mul(a, b), b) == mul(a, mul(b, b));
    moufang = moufang && mul(mul(mul(a, b), c), b) == mul(a, mul(b, mul(c, b)));
    assoc_alt = assoc_alt && associator(a, b, c) == -associator(b, a, c) &&
                associator(a, b, c) == -associator(a, c, b);
    norm_mult = norm_mult && norm_sq(mul(a, b)) == norm_sq(a) * norm_sq(b);
    no_zero_divisors =
        no_zero_divisors && (mul(a, b).is_zero() ? (a.is_zero() || b.is_zero()) : true);
  }
  report["alternativity"] = alternative;
  report["moufang"] = moufang;
  report["associator_alternating"] = assoc_alt;
  report["norm_multiplicativity"] = norm_mult;
  report["no_zero_divisors"] = no_zero_divisors;
  ok = ok && alternative && moufang && assoc_alt && norm_mult && no_zero_divisors;

  const TripleCensus census = triple_census();
  report["census"] = {{"associative", census.associative},
                      {"anti_associative", census.anti_associative}};
  const bool census_ok = census.associative + census.anti_associative == 512;
  report["census"]["ok"] = census_ok;
  ok = ok && census_ok;

  report["ok"] = ok;
  report["samples"] = cfg.samples;
  report["seed"] = cfg.seed;
  emit(report, cfg.out);
  return ok ? 0 : kExitIdentityFailure;
}

// ---- census -------------------------------------------------------------

int cmd_census(const RunConfig& cfg) {
  const TripleCensus census = triple_census();
  emit(json{{"associative", census.associative},
            {"anti_associative", census.anti_associative},
            {"total", census.associative + census.anti_associative}},
       cfg.out);
  return 0;
}

// ---- verify-factorization ----------------------------------------------

template <class S>
int run_factorization(const RunConfig& cfg) {
  const S h = parse_h<S>(cfg.h);
  const MultiIndex lo = uniform_corner(cfg.radius, -1);
  const MultiIndex hi = uniform_corner(cfg.radius, +1);
  const S tol = cfg.tol ? S(*cfg.tol) : ScalarTraits<S>::from_int(0);

  json seeds = json::array();
  bool ok = true;
  S max_res = ScalarTraits<S>::from_int(0);
  for (int n = 0; n < cfg.seeds; ++n) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(n);
    const auto f = random_function<S>(lo, hi, seed, h);
    const auto res = factorization_residual(f);
    S worst = ScalarTraits<S>::from_int(0);
    for (const auto& [site, v] : res.support()) {
      const S a = v.max_abs_component();
      if (a > worst) worst = a;
    }
    const bool pass = !(worst > tol);
    ok = ok && pass;
    if (worst > max_res) max_res = worst;
    seeds.push_back({{"seed", seed},
                     {"max_residual", ScalarTraits<S>::format(worst)},
                     {"ok", pass}});
  }
  emit(json{{"mode", ScalarTraits<S>::mode_name()},
            {"h", ScalarTraits<S>::format(h)},
            {"radius", cfg.radius},
            {"max_residual", ScalarTraits<S>::format(max_res)},
            {"runs", seeds},
            {"ok", ok}},
       cfg.out);
  return ok ? 0 : kExitIdentityFailure;
}

// ---- stokes -------------------------------------------------------------

template <class S>
int run_stokes(const RunConfig& cfg) {
  const S h = parse_h<S>(cfg.h);
  const Theorem t = parse_theorem(cfg.theorem);
  const Region region = theorem_region(t);
  const S tol = cfg.tol ? S(*cfg.tol) : ScalarTraits<S>::from_int(0);

  MultiIndex lo, hi;
  stokes_box(t, cfg.radius, lo, hi);
  std::ostringstream box_desc;
  box_desc << "box ";
  for (int i = 0; i < 8; ++i) box_desc << (i ? "," : "") << lo.m[i];
  box_desc << "..";
  for (int i = 0; i < 8; ++i) box_desc << (i ? "," : "") << hi.m[i];

  std::optional<LatticeFunction<S>> loaded_g, loaded_f;
  if (!cfg.function_files.empty()) {
    loaded_g = read_function<S>(cfg.function_files.front());
    loaded_f = read_function<S>(cfg.function_files.back());
    if (!(loaded_g->region() == region) || !(loaded_f->region() == region)) {
      std::cerr << "error: loaded function region does not match theorem region\n";
      return kExitUsage;
    }
  }

  json reports = json::array();
  std::ostringstream csv;
  csv << "seed,site_count,derived_residual_zero,claim_residual,elapsed_ms\n";
  bool ok = true;
  for (int n = 0; n < cfg.seeds; ++n) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(n);
    const LatticeFunction<S> g =
        loaded_g ? *loaded_g
                 : random_function<S>(lo, hi, mix_seed(seed, 0), h, region);
    const LatticeFunction<S> f =
        loaded_f ? *loaded_f
                 : random_function<S>(lo, hi, mix_seed(seed, 1), h, region);
    IdentityReport<S> rep = theorem_report(g, f, t, cfg.h_power, seed, box_desc.str());
    const bool pass = !(rep.derived_residual.max_abs_component() > tol);
    ok = ok && pass;
    json j = report_to_json(rep);
    j["derived_ok"] = pass;
    if (t != Theorem::T1) {
      // Record the claim residual against the other h-power reading too.
      const int other = cfg.h_power == 7 ? 8 : 7;
      j["claim_residual_h_power_" + std::to_string(other)] = octonion_to_json(
          rep.claim_lhs - boundary_term_claim(g, f, region, other));
    }
    reports.push_back(std::move(j));
    csv << seed << ',' << rep.site_count << ',' << (pass ? 1 : 0) << ",\""
        << format_octonion(rep.claim_residual) << "\"," << rep.elapsed_ms << "\n";
  }

  if (!cfg.csv.empty()) {
    std::ofstream out(cfg.csv);
    if (!out) throw std::runtime_error("cannot open for writing: " + cfg.csv);
    out << csv.str();
  }
  emit(json{{"theorem", cfg.theorem},
            {"mode", ScalarTraits<S>::mode_name()},
            {"reports", reports},
            {"ok", ok}},
       cfg.out);
  return ok ? 0 : kExitIdentityFailure;
}

// ---- monogenic-demo -----------------------------------------------------

template <class S>
int run_monogenic_demo(const RunConfig& cfg, const std::string& multiplier) {
  using O = Octonion<S>;
  const S h = parse_h<S>(cfg.h);
  const MultiIndex lo = uniform_corner(cfg.radius, -1);
  const MultiIndex hi = uniform_corner(cfg.radius, +1);

  // The linear counterexample family: f = x_1 - x_2 e_4, then f * e_m.
  const LatticeFunction<S> f =
      sub(linear<S>(1, O::unit(0), lo, hi, h), linear<S>(2, O::unit(4), lo, hi, h));
  int mult_index = 3;
  if (!multiplier.empty()) {
    mult_index = std::stoi(multiplier);
    if (mult_index < 0 || mult_index > 7) {
      std::cerr << "error: --multiplier must be a basis index 0..7\n";
      return kExitUsage;
    }
  }
  const LatticeFunction<S> g = rmul_const(f, O::unit(mult_index));

  const OperatorVariant left_bwd{Direction::Backward, Side::Left, false};
  const S tol = cfg.tol ? S(*cfg.tol) : ScalarTraits<S>::from_int(0);
  const auto rf = is_monogenic(f, left_bwd, tol);
  const auto rg = is_monogenic(g, left_bwd, tol);

  emit(json{{"mode", ScalarTraits<S>::mode_name()},
            {"h", ScalarTraits<S>::format(h)},
            {"radius", cfg.radius},
            {"multiplier", mult_index},
            {"f_monogenic", rf.monogenic},
            {"f_max_residual", ScalarTraits<S>::format(rf.max_abs_component)},
            {"g_monogenic", rg.monogenic},
            {"g_max_residual", ScalarTraits<S>::format(rg.max_abs_component)},
            {"g_residual_value", octonion_to_json(rg.worst_value)}},
       cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"octlab: verification laboratory for discrete octonionic analysis"};
  app.require_subcommand(1);
  // --h is the lattice constant, so help is long-form only
  app.set_help_flag("--help", "print help");

  RunConfig cfg;
  std::optional<std::pair<int, int>> corrupt;
  std::string multiplier;

  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--mode", cfg.mode, "exact|float");
    sub->add_option("--h", cfg.h, "lattice constant (rational in exact mode)");
    sub->add_option("--radius", cfg.radius, "box radius");
    sub->add_option("--seed", cfg.seed, "base seed");
    sub->add_option("--seeds", cfg.seeds, "number of seeds");
    sub->add_option("--tol", cfg.tol, "tolerance (float mode only)");
    sub->add_option("--out", cfg.out, "write JSON report here instead of stdout");
    sub->add_flag("--force", cfg.force, "lift the radius <= 3 guard");
  };

  auto* verify_algebra = app.add_subcommand("verify-algebra", "exhaustive algebra checks");
  verify_algebra->add_option("--samples", cfg.samples, "random samples per property");
  verify_algebra->add_option("--seed", cfg.seed, "sampling seed");
  verify_algebra->add_option("--out", cfg.out, "report path");
  std::vector<int> corrupt_pair;
  verify_algebra
      ->add_option("--corrupt-entry", corrupt_pair, "self-test: flip the sign of table entry i j")
      ->expected(2);

  auto* census = app.add_subcommand("census", "ordered basis-triple associativity census");
  census->add_option("--out", cfg.out, "report path");

  auto* factorization =
      app.add_subcommand("verify-factorization", "star-Laplacian factorization residuals");
  add_common(factorization);

  auto* stokes = app.add_subcommand("stokes", "discrete Stokes claim/derived reports");
  add_common(stokes);
  stokes->add_option("--theorem", cfg.theorem, "T1|T2|T3");
  stokes->add_option("--sign", cfg.sign, "plus|minus (reserved for pairing sweeps)");
  stokes->add_option("--h-power", cfg.h_power, "boundary h power, 7|8")
      ->check(CLI::IsMember({7, 8}));
  stokes->add_option("--function", cfg.function_files,
                     "load g (and f, if given twice) from file instead of generating");
  stokes->add_option("--csv", cfg.csv, "CSV summary path (one row per seed)");

  auto* monogenic = app.add_subcommand("monogenic-demo", "the linear counterexample pair");
  add_common(monogenic);
  monogenic->add_option("--multiplier", multiplier, "right-multiplier basis index (default 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (!corrupt_pair.empty()) corrupt = std::make_pair(corrupt_pair[0], corrupt_pair[1]);

  try {
    if (verify_algebra->parsed()) return cmd_verify_algebra(cfg, corrupt);
    if (census->parsed()) return cmd_census(cfg);

    if (const int rc = check_config(cfg)) return rc;
    if (factorization->parsed())
      return cfg.mode == "exact" ? run_factorization<Rational>(cfg)
                                 : run_factorization<double>(cfg);
    if (stokes->parsed())
      return cfg.mode == "exact" ? run_stokes<Rational>(cfg) : run_stokes<double>(cfg);
    if (monogenic->parsed())
      return cfg.mode == "exact" ? run_monogenic_demo<Rational>(cfg, multiplier)
                                 : run_monogenic_demo<double>(cfg, multiplier);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
