// Command-line front end: ray enumeration, bound tables, moment tables,
// rho sweeps and full table reproduction.
//
// Exit codes: 0 success, 1 internal error, 2 infeasible or invalid input,
// 3 reproduction mismatch.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#if __has_include("CLI11.hpp")
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif
#include "exchrays/exchrays.hpp"
#include "exchrays/report.hpp"

namespace fs = std::filesystem;
using namespace exchrays;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitMismatch = 3;

struct Options {
  int d = report::kDefaultPortfolioSize;
  std::string p;
  std::string scenario;
  std::string rho;
  std::string alpha;
  std::string format = "csv";
  std::string out;
  std::string cache;
  std::string expected;
  std::string pmf_file;
  int grid = report::kDefaultSweepGrid;
  unsigned jobs = 0;
};

double resolve_p(const Options& o) {
  if (!o.scenario.empty()) {
    if (!o.p.empty()) throw Error(ErrorKind::InvalidArgument, "give either --p or --scenario, not both");
    auto p = report::scenario_probability(o.scenario);
    if (!p) throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + o.scenario + "' (A, BBB or B)");
    return *p;
  }
  if (o.p.empty()) throw Error(ErrorKind::InvalidArgument, "--p or --scenario is required");
  return report::parse_fraction(o.p);
}

std::optional<double> resolve_rho(const Options& o) {
  if (o.rho.empty()) return std::nullopt;
  return report::parse_fraction(o.rho);
}

std::vector<double> resolve_alphas(const Options& o) {
  if (o.alpha.empty()) return {report::kDefaultAlphas.begin(), report::kDefaultAlphas.end()};
  std::vector<double> out;
  for (auto item : io::split(o.alpha, ',')) {
    const double a = report::parse_fraction(item);
    check_alpha(a);
    out.push_back(a);
  }
  return out;
}

report::RayProvider make_provider(const Options& o) {
  std::optional<fs::path> cache;
  if (!o.cache.empty()) cache = fs::path(o.cache);
  return report::RayProvider(cache, o.jobs, &std::cerr);
}

void emit(const Options& o, const std::string& name, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(o.out);
  const fs::path path = fs::path(o.out) / name;
  std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
  std::cout << path.generic_string() << '\n';
}

void emit_table(const Options& o, const report::Table& t) {
  if (o.format == "json") {
    emit(o, t.id + ".json", report::to_json(t).dump(2) + "\n");
  } else {
    emit(o, t.id + ".csv", report::to_csv(t));
  }
}

int cmd_rays(const Options& o) {
  const ClassSpec spec = ClassSpec::make(o.d, resolve_p(o), resolve_rho(o));
  const auto rays = make_provider(o).rays(spec);
  std::ostringstream os;
  if (o.format == "json") {
    os << io::ray_set_to_json(spec, rays).dump() << '\n';
  } else {
    io::write_ray_set(os, spec, rays);
  }
  if (o.out.empty()) {
    std::cout << os.str();
    std::cerr << "count=" << rays.size() << '\n';
  } else {
    emit(o, std::string("rays.") + (o.format == "json" ? "json" : "txt"), os.str());
    std::cout << "count=" << rays.size() << '\n';
  }
  return kExitOk;
}

int cmd_bounds(const Options& o) {
  const ClassSpec spec = ClassSpec::make(o.d, resolve_p(o), resolve_rho(o));
  const auto alphas = resolve_alphas(o);
  emit_table(o, report::bounds_table(spec, alphas, make_provider(o)));
  return kExitOk;
}

int cmd_moments(const Options& o) {
  if (!o.rho.empty()) throw Error(ErrorKind::InvalidArgument, "moments takes no --rho");
  const ClassSpec spec = ClassSpec::make(o.d, resolve_p(o));
  emit_table(o, report::moments_table(spec, make_provider(o)));
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const double p = resolve_p(o);
  ClassSpec::make(o.d, p);
  const auto alphas = resolve_alphas(o);
  const auto rhos = report::sweep_grid(o.grid);
  emit_table(o, report::sweep_table(o.d, p, rhos, alphas, make_provider(o)));
  return kExitOk;
}

int cmd_reproduce(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path out = o.out.empty() ? fs::path("reproduce_out") : fs::path(o.out);
  auto refs = report::reference_tables();
  if (!o.expected.empty()) {
    std::ifstream in(o.expected);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + o.expected);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::ParseError, e.what());
    }
    report::apply_reference_values(refs, j);
  }
  const report::RayProvider provider = make_provider(o);
  const auto result = report::reproduce(out, std::move(refs), provider, o.grid, &std::cerr);
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "reproduce: " << result.tables << " tables, " << result.cells << " cells, " << result.diffs.size()
            << " mismatches, cache hits=" << provider.cache_hits() << " misses=" << provider.cache_misses()
            << ", " << report::fixed(secs, 2) << " s\n";
  for (const auto& d : result.diffs) {
    std::cout << "MISMATCH " << d.table << " row=" << d.row << " col=" << d.column << " expected=" << d.expected
              << " actual=" << d.actual << '\n';
  }
  std::cout << "tables=" << result.tables << " cells=" << result.cells << " mismatches=" << result.diffs.size()
            << " out=" << out.generic_string() << '\n';
  return result.diffs.empty() ? kExitOk : kExitMismatch;
}

int cmd_decompose(const Options& o) {
  const ClassSpec spec = ClassSpec::make(o.d, resolve_p(o));
  std::ifstream in(o.pmf_file);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + o.pmf_file);
  const DefaultCountPmf pmf = io::read_pmf(in, o.d);
  const auto parts = mean_rays::decompose(pmf, spec);
  std::cout << "weight,ray\n";
  for (const auto& [ray, w] : parts) std::cout << io::format_real(w) << ',' << ray.to_sparse_string() << '\n';
  return kExitOk;
}

void add_class_flags(CLI::App* sub, Options& o, bool with_rho) {
  sub->add_option("--d", o.d, "portfolio size")->check(CLI::PositiveNumber);
  sub->add_option("--p", o.p, "marginal default probability (decimal or fraction)");
  sub->add_option("--scenario", o.scenario, "rating scenario: A (0.3%), BBB (1.7%), B (26.6%)");
  if (with_rho) sub->add_option("--rho", o.rho, "equicorrelation, decimal or fraction such as 1/6");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremal rays and VaR/ES bounds for exchangeable Bernoulli default models"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;

  auto* rays = app.add_subcommand("rays", "enumerate the ray densities of a class");
  add_class_flags(rays, o, true);

  auto* bounds = app.add_subcommand("bounds", "VaR/ES bounds per alpha (and beta-mixing VaR when --rho is set)");
  add_class_flags(bounds, o, true);
  bounds->add_option("--alpha", o.alpha, "comma-separated confidence levels");

  auto* moments = app.add_subcommand("moments", "cross-moment and correlation bounds of a mean-only class");
  add_class_flags(moments, o, false);

  auto* sweep = app.add_subcommand("sweep", "VaR bounds and beta-mixing VaR over an equispaced rho grid");
  add_class_flags(sweep, o, false);
  sweep->add_option("--alpha", o.alpha, "comma-separated confidence levels");
  sweep->add_option("--grid", o.grid, "number of grid points k/N, k = 0..N-1")->check(CLI::PositiveNumber);

  auto* repro = app.add_subcommand("reproduce", "regenerate all reference tables and sweep datasets");
  repro->add_option("--grid", o.grid, "rho grid size for the sweeps")->check(CLI::PositiveNumber);
  repro->add_option("--expected", o.expected, "JSON file overriding the expected table values");

  auto* decompose = app.add_subcommand("decompose", "write a pmf of S(p) as a convex combination of rays");
  add_class_flags(decompose, o, false);
  decompose->add_option("--pmf", o.pmf_file, "pmf file: CSV 'j,prob', sparse 'j:prob;...' or JSON")->required();

  for (auto* sub : {rays, bounds, moments, sweep, repro, decompose}) {
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--cache", o.cache, "ray-set cache directory");
    sub->add_option("--jobs", o.jobs, "worker threads for enumeration (0 = all cores)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (rays->parsed()) return cmd_rays(o);
    if (bounds->parsed()) return cmd_bounds(o);
    if (moments->parsed()) return cmd_moments(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (repro->parsed()) return cmd_reproduce(o);
    if (decompose->parsed()) return cmd_decompose(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Internal || e.kind() == ErrorKind::Overflow ? kExitInternal : kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
