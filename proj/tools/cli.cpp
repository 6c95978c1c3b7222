#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "primestrings/error.hpp"
#include "primestrings/maier_lab.hpp"
#include "primestrings/parallel.hpp"
#include "primestrings/prime_table.hpp"
#include "primestrings/records.hpp"
#include "primestrings/special_sets.hpp"
#include "primestrings/string_search.hpp"

namespace primestrings::cli {
namespace {

using Clock = std::chrono::steady_clock;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

// Flags shared by every subcommand.
struct Common {
  std::string threads;
  bool no_cache = false;
  bool progress = false;
  std::string manifest;

  unsigned workers() const {
    if (threads.empty()) return resolve_workers(0);
    const auto n = parse_count("--threads", threads);
    if (n == 0 || n > 1024) throw UsageError{"--threads must be in 1..1024"};
    return static_cast<unsigned>(n);
  }

  PrimeCache cache() const { return no_cache ? PrimeCache() : PrimeCache(PrimeCache::default_directory()); }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--threads", common.threads, "worker threads (default: machine parallelism)");
  cmd->add_flag("--no-cache", common.no_cache, "disable prime-table cache reads and writes");
  cmd->add_flag("--progress", common.progress, "report scan progress on stderr");
  cmd->add_option("--manifest", common.manifest, "write a run manifest JSON to this path");
}

// What a subcommand produced: the text for stdout, the canonical form used for
// the manifest digest (timing removed), and the exit code.
struct Outcome {
  std::string text;
  std::string canonical;
  int exit_code = kExitOk;
};

std::string dump(const Json& j) { return j.dump() + "\n"; }

std::string format_choice(std::string_view flag, const std::string& value, std::initializer_list<std::string_view> ok) {
  if (std::find(ok.begin(), ok.end(), value) == ok.end()) {
    throw UsageError{std::string(flag) + ": unsupported value '" + value + "'"};
  }
  return value;
}

SpecialSetSpec parse_set(const std::string& text) {
  try {
    return SpecialSetSpec::parse(text);
  } catch (const Error& e) {
    throw UsageError{std::string("--set: ") + e.what()};
  }
}

std::optional<std::uint64_t> optional_count(std::string_view flag, const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_count(flag, text);
}

double parse_positive_real(std::string_view flag, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !(v > 0) || !std::isfinite(v)) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw UsageError{std::string(flag) + ": expected a positive number, got '" + text + "'"};
  }
}

// ---------------------------------------------------------------------------
// strings

struct StringsArgs {
  std::string set = "all", k, mod, res, limit, format = "json";
};

Outcome cmd_strings(const StringsArgs& args, const Common& common, std::ostream& err) {
  StringQuery query;
  query.spec = parse_set(args.set);
  query.k = parse_count("--k", args.k);
  query.q = parse_count("--mod", args.mod);
  query.a = parse_count("--res", args.res);
  query.limit = parse_count("--limit", args.limit);
  const auto format = format_choice("--format", args.format, {"json", "csv"});
  if (query.limit < 2) throw UsageError{"--limit must be >= 2"};
  try {
    query.validate();
  } catch (const Error& e) {
    throw UsageError{std::string("--mod/--res/--k: ") + e.what()};
  }

  const auto started = Clock::now();
  SearchOptions options;
  options.workers = common.workers();
  if (common.progress) {
    options.progress = [&err](std::uint64_t scanned) { err << "[progress] scanned " << scanned << '\n'; };
  }
  const PrimeTable table = common.cache().obtain(query.limit, SieveOptions{.workers = options.workers});
  const SearchResult result = find_first_string(query, table, options);
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();

  Outcome outcome;
  outcome.exit_code = result.hit ? kExitOk : kExitNotFound;
  outcome.canonical = dump(string_record(query, result, 0));
  if (format == "json") {
    outcome.text = dump(string_record(query, result, elapsed));
  } else {
    std::ostringstream csv;
    csv << "ordinal,prime\n";
    if (result.hit) {
      for (std::size_t i = 0; i < result.hit->primes.size(); ++i) {
        csv << result.hit->start_index + 1 + i << ',' << result.hit->primes[i] << '\n';
      }
    }
    outcome.text = csv.str();
    outcome.canonical = outcome.text;
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// census

struct CensusArgs {
  std::string set = "all", mod, limit, format = "csv";
};

Outcome cmd_census(const CensusArgs& args, const Common& common) {
  const auto spec = parse_set(args.set);
  const auto q = parse_count("--mod", args.mod);
  const auto X = parse_count("--limit", args.limit);
  const auto format = format_choice("--format", args.format, {"json", "csv"});
  if (q == 0) throw UsageError{"--mod must be >= 1"};
  if (X < 2) throw UsageError{"--limit must be >= 2"};

  const unsigned workers = common.workers();
  const PrimeTable table = common.cache().obtain(X + 1, SieveOptions{.workers = workers});
  const auto census = residue_census(spec, X, q, table, SearchOptions{.workers = workers, .segment_span = kDefaultSegmentSpan, .progress = {}});
  Outcome outcome;
  outcome.text = format == "csv" ? census_csv(census) : dump(census_record(spec, census));
  outcome.canonical = outcome.text;
  return outcome;
}

// ---------------------------------------------------------------------------
// maier

struct MaierArgs {
  std::string q, a, y, p0, yz, rows = "1000", set = "all";
  std::string X = "1e12";
  std::string D = "2";
  std::string D_loglog;
  std::string E = "primes";
  bool record_primes = false;
};

Outcome cmd_maier(const MaierArgs& args, const Common& common) {
  MaierRequest request;
  request.q = parse_count("--q", args.q);
  request.a = parse_count("--a", args.a);
  request.y = optional_count("--y", args.y);
  request.p0 = optional_count("--p0", args.p0);
  request.yz = optional_count("--yz", args.yz);
  request.rows = parse_count("--rows", args.rows);
  request.spec = parse_set(args.set);
  request.census = CensusOptions{common.workers(), args.record_primes};
  if (request.q < 2) throw UsageError{"--q must be >= 2"};
  if (request.rows == 0) throw UsageError{"--rows must be >= 1"};
  if (std::gcd(request.a % request.q, request.q) != 1) throw UsageError{"--a must be coprime to --q"};

  request.X = ScaleX{std::log(parse_positive_real("--X", args.X))};
  if (!args.D_loglog.empty()) {
    request.model.D = DModel{DModel::Kind::loglog, parse_positive_real("--D-loglog", args.D_loglog)};
  } else {
    request.model.D = DModel{DModel::Kind::constant, parse_positive_real("--D", args.D)};
  }
  if (args.E != "primes") {
    if (!args.E.starts_with("leitmann:")) throw UsageError{"--E: expected primes | leitmann:<family>"};
    const auto fp = parse_set("floorprod:" + args.E.substr(9));
    request.model.E.inverse_of = std::get<FloorProduct>(fp.variant()).g;
  }

  // Row values beyond the table fall back to Miller-Rabin.
  const PrimeTable table = common.cache().obtain(std::uint64_t{1} << 22, SieveOptions{.workers = common.workers()});
  const MaierRun run = run_maier(request, table);
  Outcome outcome;
  outcome.text = dump(maier_record(run, request));
  outcome.canonical = outcome.text;
  return outcome;
}

// ---------------------------------------------------------------------------
// counts / small utilities

Outcome json_outcome(const Json& j) {
  Outcome o;
  o.text = dump(j);
  o.canonical = o.text;
  return o;
}

Outcome cmd_counts_sq(const std::string& q_text, const std::string& z_text) {
  const auto q = parse_count("--q", q_text);
  const auto z = parse_count("--z", z_text);
  if (q < 2) throw UsageError{"--q must be >= 2"};
  return json_outcome(Json{{"function", "S_q"}, {"q", q}, {"z", z}, {"count", count_S_q(q, z)}});
}

Outcome cmd_counts_psi(const std::string& x_text, const std::string& t_text) {
  const auto x = parse_count("--x", x_text);
  const auto t = parse_count("--t", t_text);
  if (t < 2) throw UsageError{"--t must be >= 2"};
  return json_outcome(Json{{"function", "psi"},
                           {"x", x},
                           {"t", t},
                           {"convention", "prime factors strictly less than t"},
                           {"count", count_psi(x, t)}});
}

Outcome cmd_isprime(const std::string& n_text) {
  const auto n = parse_count("n", n_text);
  return json_outcome(Json{{"n", n}, {"prime", is_prime(n)}, {"method", "deterministic Miller-Rabin (64-bit)"}});
}

Outcome cmd_sieve(const std::string& lo_text, const std::string& hi_text, const Common& common) {
  const auto lo = parse_count("--lo", lo_text);
  const auto hi = parse_count("--hi", hi_text);
  if (lo > hi) throw UsageError{"--lo must not exceed --hi"};
  const auto primes = sieve_range(lo, hi, SieveOptions{.workers = common.workers()});
  return json_outcome(Json{{"lo", lo}, {"hi", hi}, {"count", primes.size()}, {"primes", primes}});
}

Outcome cmd_special(const std::string& set, const std::string& lo_text, const std::string& hi_text) {
  const auto spec = parse_set(set);
  const auto lo = parse_count("--lo", lo_text);
  const auto hi = parse_count("--hi", hi_text);
  if (lo > hi) throw UsageError{"--lo must not exceed --hi"};
  const PrimeTable table = PrimeTable::build(std::max<std::uint64_t>(hi, 2));
  return json_outcome(Json{{"set", spec.label()}, {"lo", lo}, {"hi", hi}, {"primes", special_primes(spec, lo, hi, table)}});
}

Outcome cmd_validate_g(const std::string& family, const std::string& grid_text) {
  const auto spec = parse_set("floorprod:" + family);
  const auto& g = std::get<FloorProduct>(spec.variant()).g;
  std::vector<double> grid;
  std::stringstream ss(grid_text);
  for (std::string item; std::getline(ss, item, ',');) grid.push_back(parse_positive_real("--grid", item));

  const AlphaReport report = validate_g(g, grid);
  auto fit_json = [](const AlphaFit& fit) {
    const auto& f = fit.flags;
    return Json{{"raw", fit.raw.value},
                {"limit", fit.limit.value},
                {"flags",
                 {{"alpha1_positive", f.alpha1_positive},
                  {"alpha2_nonnegative", f.alpha2_nonnegative},
                  {"alpha1_ne_alpha2", f.alpha1_ne_alpha2},
                  {"alpha3_ne_3alpha1", f.alpha3_ne_3alpha1},
                  {"2alpha1_plus_alpha3_ne_3alpha2", f.combo_ne}}}};
  };
  return json_outcome(Json{{"family", report.family},
                           {"grid", report.grid},
                           {"tolerance", report.tolerance},
                           {"relative_to_g", fit_json(report.relative_to_g)},
                           {"relative_to_f", fit_json(report.relative_to_f)},
                           {"increasing_unbounded", report.increasing_unbounded},
                           {"2g'+xg''>0", report.convexity},
                           {"log_growth_evaluable", report.log_growth_evaluable},
                           {"log_growth", report.log_growth},
                           {"note", "evidence only; membership in the class is not asserted"}});
}

Outcome cmd_cache(const std::string& action, const std::string& limit_text, const Common& common) {
  const PrimeCache cache = common.cache();
  if (!cache.enabled()) throw UsageError{"cache commands need the cache enabled (drop --no-cache)"};
  if (action == "path") return json_outcome(Json{{"directory", PrimeCache::default_directory().string()}});
  const auto limit = parse_count("--limit", limit_text);
  if (limit < 2) throw UsageError{"--limit must be >= 2"};
  const auto table = cache.obtain(limit, SieveOptions{.workers = common.workers()});
  return json_outcome(Json{{"file", cache.file_for(limit).string()}, {"limit", table.limit()},
                           {"bytes", table.memory_bytes()}});
}

void write_manifest(const Common& common, const std::vector<std::string>& args, const Outcome& outcome,
                    std::int64_t wall_ms) {
  // The config hash covers every argument that can change a result.
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--threads" || a == "--manifest") {
      ++i;
      continue;
    }
    if (a.starts_with("--threads=") || a.starts_with("--manifest=") || a == "--progress" || a == "--no-cache") {
      continue;
    }
    config += a;
    config.push_back('\0');
  }
  Json manifest{{"command_line", args},
                {"config_hash", sha256_hex(config)},
                {"tool_version", kToolVersion},
                {"wall_time_ms", wall_ms},
                {"workers", common.workers()},
                {"result_digest", sha256_hex(outcome.canonical)}};
  std::ofstream out(common.manifest);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write manifest " + common.manifest);
  out << manifest.dump(2) << '\n';
}

}  // namespace

std::uint64_t parse_count(std::string_view flag, std::string_view text) {
  static const std::regex pattern(R"(^\s*([0-9]+)(?:\.([0-9]*))?(?:[eE]\+?([0-9]+))?\s*$)");
  std::cmatch m;
  if (!std::regex_match(text.begin(), text.end(), m, pattern)) {
    throw UsageError{std::string(flag) + ": expected a non-negative integer, got '" + std::string(text) + "'"};
  }
  std::string digits = m[1].str();
  std::string fraction = m[2].matched ? m[2].str() : "";
  while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
  const std::size_t exponent = m[3].matched ? std::stoul(m[3].str()) : 0;
  if (fraction.size() > exponent) {
    throw UsageError{std::string(flag) + ": fractional value '" + std::string(text) + "' is not an integer"};
  }
  digits += fraction;
  digits.append(exponent - fraction.size(), '0');
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  if (digits.size() > 20 || (digits.size() == 20 && digits > "18446744073709551615")) {
    throw UsageError{std::string(flag) + ": value '" + std::string(text) + "' exceeds 64 bits"};
  }
  return std::stoull(digits);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strings of consecutive special primes in residue classes, and Maier-matrix experiments",
               "primestrings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Common common;

  StringsArgs strings;
  auto* c_strings = app.add_subcommand("strings", "first string of k consecutive set-primes = a (mod q)");
  c_strings->add_option("--set", strings.set, "all | beatty:<const> | floorprod:<family>");
  c_strings->add_option("--k", strings.k, "string length")->required();
  c_strings->add_option("--mod", strings.mod, "modulus q")->required();
  c_strings->add_option("--res", strings.res, "residue a, gcd(a, q) = 1")->required();
  c_strings->add_option("--limit", strings.limit, "search primes below this bound")->required();
  c_strings->add_option("--format", strings.format, "json | csv");
  add_common(c_strings, common);

  CensusArgs census;
  auto* c_census = app.add_subcommand("census", "per-residue counts of set-primes <= limit");
  c_census->add_option("--set", census.set, "all | beatty:<const> | floorprod:<family>");
  c_census->add_option("--mod", census.mod, "modulus q")->required();
  c_census->add_option("--limit", census.limit, "count primes up to and including this bound")->required();
  c_census->add_option("--format", census.format, "csv | json");
  add_common(c_census, common);

  MaierArgs maier;
  auto* c_maier = app.add_subcommand("maier", "build Q, the interval I and a row census of the Maier matrix");
  c_maier->add_option("--q", maier.q, "modulus q >= 2")->required();
  c_maier->add_option("--a", maier.a, "residue a, gcd(a, q) = 1")->required();
  c_maier->add_option("--y", maier.y, "prime cutoff y (default ceil(log X / D(X)))");
  c_maier->add_option("--p0", maier.p0, "excluded prime (default smallest prime > log y not dividing q)");
  c_maier->add_option("--yz", maier.yz, "row length (default y*z)");
  c_maier->add_option("--rows", maier.rows, "rows sampled, r = 1..R");
  c_maier->add_option("--set", maier.set, "set whose primes are counted");
  c_maier->add_option("--X", maier.X, "scale X for the parameter choice and bounds");
  c_maier->add_option("--D", maier.D, "constant D(X)");
  c_maier->add_option("--D-loglog", maier.D_loglog, "D(X) = c log log X with this c");
  c_maier->add_option("--E", maier.E, "primes (E = X/log X) | leitmann:<family>");
  c_maier->add_flag("--record-primes", maier.record_primes, "list good/bad primes per row");
  add_common(c_maier, common);

  auto* c_counts = app.add_subcommand("counts", "counting functions");
  c_counts->require_subcommand(1);
  std::string sq_q, sq_z, psi_x, psi_t;
  auto* c_sq = c_counts->add_subcommand("sq", "#{n <= z : all prime factors = 1 mod q}, n = 1 included");
  c_sq->add_option("--q", sq_q)->required();
  c_sq->add_option("--z", sq_z)->required();
  add_common(c_sq, common);
  auto* c_psi = c_counts->add_subcommand("psi", "#{n <= x : all prime factors < t} (strict), n = 1 included");
  c_psi->add_option("--x", psi_x)->required();
  c_psi->add_option("--t", psi_t)->required();
  add_common(c_psi, common);

  std::string n_text;
  auto* c_isprime = app.add_subcommand("isprime", "deterministic 64-bit primality");
  c_isprime->add_option("n", n_text)->required();
  add_common(c_isprime, common);

  std::string lo_text = "0", hi_text;
  auto* c_sieve = app.add_subcommand("sieve", "primes in [lo, hi)");
  c_sieve->add_option("--lo", lo_text);
  c_sieve->add_option("--hi", hi_text)->required();
  add_common(c_sieve, common);

  std::string special_set = "all", special_lo = "0", special_hi;
  auto* c_special = app.add_subcommand("special", "primes of a special set in [lo, hi)");
  c_special->add_option("--set", special_set);
  c_special->add_option("--lo", special_lo);
  c_special->add_option("--hi", special_hi)->required();
  add_common(c_special, common);

  std::string family = "loglog", grid = "1e4,1e5,1e6,1e7,1e8,1e9";
  auto* c_validate = app.add_subcommand("validate-g", "numeric evidence for the growth conditions on g");
  c_validate->add_option("--family", family, "loglog | loglog^B | log^B");
  c_validate->add_option("--grid", grid, "comma-separated evaluation points");
  add_common(c_validate, common);

  std::string cache_action, cache_limit;
  auto* c_cache = app.add_subcommand("cache", "prime-table cache management");
  c_cache->add_option("action", cache_action, "build | path")->required()->check(CLI::IsMember({"build", "path"}));
  c_cache->add_option("--limit", cache_limit, "table limit for build");
  add_common(c_cache, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto started = Clock::now();
  try {
    Outcome outcome;
    if (c_strings->parsed()) {
      outcome = cmd_strings(strings, common, err);
    } else if (c_census->parsed()) {
      outcome = cmd_census(census, common);
    } else if (c_maier->parsed()) {
      outcome = cmd_maier(maier, common);
    } else if (c_sq->parsed()) {
      outcome = cmd_counts_sq(sq_q, sq_z);
    } else if (c_psi->parsed()) {
      outcome = cmd_counts_psi(psi_x, psi_t);
    } else if (c_isprime->parsed()) {
      outcome = cmd_isprime(n_text);
    } else if (c_sieve->parsed()) {
      outcome = cmd_sieve(lo_text, hi_text, common);
    } else if (c_special->parsed()) {
      outcome = cmd_special(special_set, special_lo, special_hi);
    } else if (c_validate->parsed()) {
      outcome = cmd_validate_g(family, grid);
    } else if (c_cache->parsed()) {
      outcome = cmd_cache(cache_action, cache_limit, common);
    }
    out << outcome.text;
    out.flush();
    if (!common.manifest.empty()) {
      const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
      write_manifest(common, args, outcome, wall);
    }
    return outcome.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.message << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace primestrings::cli
