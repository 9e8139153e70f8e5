#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "densecode/errors.hpp"
#include "densecode/residual.hpp"
#include "densecode/scheme_io.hpp"
#include "densecode/search.hpp"

#ifndef DENSECODE_VERSION
#define DENSECODE_VERSION "0.0.0"
#endif

namespace densecode::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// Raised for bad user input; maps to exit code 2.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string scheme_file;
  int d = 0;
  std::string lambda;
  int n = 0;
  int restarts = 50;
  std::uint64_t seed = 0;
  int max_iters = 5000;
  double tol = 1e-8;
  std::string out;
  std::string grid;
};

std::vector<double> parse_lambda(const std::string& text, int d, std::ostream& err) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse lambda entry '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v)) throw InvalidInput("cannot parse lambda entry '" + item + "'");
    if (v < 0.0) throw InvalidInput("lambda entries must be non-negative");
    values.push_back(v);
  }
  if (values.empty()) throw InvalidInput("--lambda is empty");
  if (d != 0 && static_cast<int>(values.size()) != d) {
    throw InvalidInput("--lambda has " + std::to_string(values.size()) + " entries but --d is " + std::to_string(d));
  }
  double sum = 0.0;
  for (const double v : values) sum += v;
  if (!(sum > 0.0)) throw InvalidInput("lambda entries sum to zero");
  if (std::abs(sum - 1.0) > 1e-6) {
    err << "warning: lambda sums to " << std::setprecision(17) << sum << "; normalizing\n";
  }
  for (double& v : values) v /= sum;
  return values;
}

SchmidtSpectrum make_spectrum(const std::vector<double>& values) {
  // Division by the sum leaves an error of a few ulps; fold it into the
  // largest entry so the spectrum invariant holds exactly.
  std::vector<double> v = values;
  double sum = 0.0;
  for (const double x : v) sum += x;
  auto largest = std::max_element(v.begin(), v.end());
  *largest += 1.0 - sum;
  return SchmidtSpectrum(std::move(v));
}

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write " + path);
  f << content;
}

json config_json(const SearchConfig& c) {
  return {{"n_letters", c.n_letters},     {"restarts", c.restarts},       {"max_iters", c.max_iters},
          {"success_tol", c.success_tol}, {"failure_tol", c.failure_tol}, {"base_seed", c.base_seed},
          {"step_init", c.step_init},     {"step_shrink", c.step_shrink}, {"min_step", c.min_step},
          {"stop_objective", c.stop_objective}, {"stop_on_success", c.stop_on_success},
          {"init", "uniform [-pi, pi) per coordinate, mt19937_64 seeded with base_seed + restart"},
          {"gauge", "first unitary fixed to identity"}};
}

void write_manifest(const std::string& out, const std::string& command, const std::vector<std::string>& args,
                    json config, std::uint64_t seed, double seconds) {
  json m;
  m["command"] = command;
  m["argv"] = args;
  m["config"] = std::move(config);
  m["version"] = DENSECODE_VERSION;
  m["base_seed"] = seed;
  m["duration_seconds"] = seconds;
  m["outputs"] = json::array({out});
  write_file(out + ".manifest.json", m.dump(2) + "\n");
}

SearchConfig search_config(const Options& o, int d) {
  SearchConfig c;
  c.n_letters = o.n;
  c.restarts = o.restarts;
  c.max_iters = o.max_iters;
  c.success_tol = o.tol;
  c.failure_tol = std::max(c.failure_tol, o.tol);
  c.base_seed = o.seed;
  c.threads = thread_cap();
  try {
    c.validate(d);
  } catch (const Error& e) {
    throw InvalidInput(e.what());
  }
  return c;
}

json search_json(const SearchResult& r, const SearchConfig& c, const SchmidtSpectrum& lambda) {
  json j = scheme_to_json(r.best_scheme, lambda);
  json runs = json::array();
  for (const auto& rec : r.restarts) {
    runs.push_back({{"restart", rec.restart}, {"seed", rec.seed}, {"final_objective", rec.final_objective},
                    {"iterations", rec.iterations}});
  }
  j["search"] = {{"n_letters", c.n_letters},
                 {"best_objective", r.best_objective},
                 {"succeeded", r.succeeded},
                 {"ambiguous", r.ambiguous},
                 {"restarts_used", r.restarts_used},
                 {"iterations_total", r.iterations_total},
                 {"seed_of_best", r.seed_of_best},
                 {"base_seed", c.base_seed},
                 {"restarts", std::move(runs)}};
  return j;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  if (!(o.tol > 0.0)) throw InvalidInput("--tol must be positive");
  std::optional<SchemeFile> file;
  try {
    file.emplace(read_scheme_file(o.scheme_file));
  } catch (const Error& e) {
    err << "invalid scheme file: " << e.what() << "\n";
    return kExitInvalid;
  }
  const VerifyReport report = verify_scheme(file->scheme, file->spectrum, o.tol);
  out << "max_deviation " << fmt17(report.max_deviation) << "\n" << (report.ok ? "ok" : "fail") << "\n";
  return report.ok ? kExitOk : kExitFailure;
}

int cmd_search(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const SchmidtSpectrum lambda = make_spectrum(parse_lambda(o.lambda, o.d, err));
  if (!lambda.strictly_positive()) throw InvalidInput("search needs strictly positive lambda");
  const SearchConfig config = search_config(o, lambda.dim());
  const auto start = Clock::now();
  const SearchResult r = optimize(lambda, config, [&](const RestartRecord& rec) {
    err << "restart " << rec.restart << " objective " << fmt17(rec.final_objective) << " iterations "
        << rec.iterations << "\n";
  });
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.out.empty()) {
    write_file(o.out, search_json(r, config, lambda).dump(2) + "\n");
    json cfg = config_json(config);
    cfg["lambda"] = std::vector<double>(lambda.values().begin(), lambda.values().end());
    write_manifest(o.out, "search", args, std::move(cfg), config.base_seed, seconds);
  }
  out << "search d=" << lambda.dim() << " N=" << config.n_letters << " best_objective=" << fmt17(r.best_objective)
      << " succeeded=" << (r.succeeded ? "true" : "false") << (r.ambiguous ? " ambiguous=true" : "")
      << " restarts_used=" << r.restarts_used << " seed_of_best=" << r.seed_of_best << "\n";
  return r.succeeded ? kExitOk : kExitFailure;
}

int cmd_certify(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const SchmidtSpectrum lambda = make_spectrum(parse_lambda(o.lambda, o.d, err));
  const auto start = Clock::now();
  std::optional<ImpossibilityCertificate> cert;
  try {
    cert.emplace(certify_impossibility(lambda));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotPartialEntanglement) {
      err << "certify requires a partially entangled spectrum: " << e.what() << "\n";
      return kExitInvalid;
    }
    throw;
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const json j = certificate_to_json(*cert);
  if (!o.out.empty()) {
    write_file(o.out, j.dump(2) + "\n");
    write_manifest(o.out, "certify", args, {{"lambda", j["lambda"]}, {"degeneracy_tol", cert->degeneracy_tol}}, 0,
                   seconds);
  }
  out << "certify d=" << lambda.dim() << " route=" << to_string(cert->route) << " t=" << cert->t
      << " subalgebra_dim=" << cert->subalgebra_dim << " target_n=" << cert->target_n << " verdict=Impossible\n";
  return kExitOk;
}

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  std::vector<double> points() const {
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> pts;
    for (long long i = 0; i < count; ++i) pts.push_back(lo + static_cast<double>(i) * step);
    return pts;
  }
};

Grid parse_grid(const std::string& text) {
  Grid g;
  char c1 = 0;
  char c2 = 0;
  std::istringstream is(text);
  if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':' || !is.eof()) {
    throw InvalidInput("--grid must look like lo:hi:step, got '" + text + "'");
  }
  if (!(g.step > 0.0) || !(g.lo > 0.0) || !(g.hi < 1.0) || g.lo > g.hi) {
    throw InvalidInput("--grid needs 0 < lo <= hi < 1 and step > 0");
  }
  if ((g.hi - g.lo) / g.step > 1e5) throw InvalidInput("--grid has too many points");
  return g;
}

int cmd_sweep(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (o.d < 2) throw InvalidInput("--d must be at least 2");
  const Grid grid = parse_grid(o.grid);
  std::vector<SchmidtSpectrum> spectra;
  for (const double top : grid.points()) {
    std::vector<double> v(static_cast<std::size_t>(o.d), (1.0 - top) / (o.d - 1));
    v[0] = top;
    SchmidtSpectrum s = make_spectrum(v);
    if (!s.strictly_positive()) throw InvalidInput("grid point " + fmt17(top) + " gives a zero coefficient");
    spectra.push_back(std::move(s));
  }
  const SearchConfig config = search_config(o, o.d);

  std::ostringstream csv;
  for (int j = 0; j < o.d; ++j) csv << "lambda_" << j << ",";
  csv << "N,best_objective,succeeded,restarts_used,seconds\n";
  const auto start = Clock::now();
  int succeeded = 0;
  for (const auto& s : spectra) {
    const auto row_start = Clock::now();
    const SearchResult r = optimize(s, config);
    const double seconds = std::chrono::duration<double>(Clock::now() - row_start).count();
    for (const double v : s.values()) csv << fmt17(v) << ",";
    csv << config.n_letters << "," << fmt17(r.best_objective) << "," << (r.succeeded ? "true" : "false") << ","
        << r.restarts_used << "," << fmt17(seconds) << "\n";
    succeeded += r.succeeded ? 1 : 0;
    err << "lambda_0 " << fmt17(s[0]) << " best_objective " << fmt17(r.best_objective) << "\n";
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.out.empty()) {
    write_file(o.out, csv.str());
    json cfg = config_json(config);
    cfg["d"] = o.d;
    cfg["grid"] = {{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}};
    cfg["grid_rule"] = "lambda_0 swept over lo + k*step; remaining mass split uniformly over the other d-1 coefficients, then sorted";
    write_manifest(o.out, "sweep", args, std::move(cfg), config.base_seed, seconds);
  } else {
    out << csv.str();
  }
  out << "sweep d=" << o.d << " N=" << config.n_letters << " rows=" << spectra.size() << " succeeded=" << succeeded
      << "\n";
  return kExitOk;
}

}  // namespace

int thread_cap() {
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DENSECODE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 1024));
  }
  return static_cast<int>(hw);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic dense coding: verify, search and certify isometric encoding schemes", "densecode"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DENSECODE_VERSION);
  Options o;

  auto* verify = app.add_subcommand("verify", "Check a scheme file for Gram orthonormality");
  verify->add_option("scheme_file", o.scheme_file, "Scheme JSON file")->required();
  verify->add_option("--tol", o.tol, "Largest allowed |G - I| entry")->capture_default_str();

  auto add_spectrum = [&](CLI::App* sub) {
    sub->add_option("--d", o.d, "Local dimension")->required();
    sub->add_option("--lambda", o.lambda, "Comma-separated Schmidt coefficients (normalized)")->required();
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "Alphabet size N")->required();
    sub->add_option("--restarts", o.restarts, "Independent restarts")->capture_default_str();
    sub->add_option("--seed", o.seed, "Base seed; restart k uses seed + k")->capture_default_str();
    sub->add_option("--max-iters", o.max_iters, "Iterations per restart")->capture_default_str();
    sub->add_option("--tol", o.tol, "Objective threshold for success")->capture_default_str();
  };

  auto* search = app.add_subcommand("search", "Search for an N-letter scheme");
  add_spectrum(search);
  add_search(search);
  search->add_option("--out", o.out, "Result JSON (the scheme plus search metadata)");

  auto* certify = app.add_subcommand("certify", "Emit a d^2-1 impossibility certificate");
  add_spectrum(certify);
  certify->add_option("--out", o.out, "Certificate JSON");

  auto* sweep = app.add_subcommand("sweep", "Search over a grid of spectra and tabulate");
  sweep->add_option("--d", o.d, "Local dimension")->required();
  sweep->add_option("--grid", o.grid, "lambda_0 range lo:hi:step")->required();
  add_search(sweep);
  sweep->add_option("--out", o.out, "CSV output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (search->parsed()) return cmd_search(o, args, out, err);
    if (certify->parsed()) return cmd_certify(o, args, out, err);
    if (sweep->parsed()) return cmd_sweep(o, args, out, err);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
  }
  return kExitInvalid;
}

}  // namespace densecode::cli
