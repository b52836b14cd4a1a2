#pragma once

// Tables and datasets behind the command-line front end. Every numeric cell
// comes from one library call; this layer only rounds for display.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "exchrays/beta_mix.hpp"
#include "exchrays/class_spec.hpp"
#include "exchrays/errors.hpp"
#include "exchrays/pmf.hpp"
#include "exchrays/ray_cache.hpp"
#include "exchrays/rays_corr.hpp"
#include "exchrays/rays_mean.hpp"
#include "exchrays/risk_bounds.hpp"
#include "exchrays/serialization.hpp"

namespace exchrays::report {

struct Scenario {
  std::string_view name;
  double p;
};

/// One-year marginal default probabilities of the three rating classes.
inline constexpr std::array<Scenario, 3> kScenarios{{{"A", 0.003}, {"BBB", 0.017}, {"B", 0.266}}};

inline constexpr int kDefaultPortfolioSize = 100;
inline constexpr std::array<double, 3> kDefaultAlphas{0.90, 0.95, 0.99};
inline constexpr int kDefaultSweepGrid = 12;

inline std::optional<double> scenario_probability(std::string_view name) {
  for (const auto& s : kScenarios)
    if (s.name == name) return s.p;
  return std::nullopt;
}

/// "1/6" is evaluated as 1.0 / 6.0 (one rounding); anything else is a decimal.
inline double parse_fraction(std::string_view text) {
  text = io::trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return io::parse_real(text);
  const double num = io::parse_real(io::trim(text.substr(0, slash)));
  const double den = io::parse_real(io::trim(text.substr(slash + 1)));
  if (den == 0.0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

inline std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  std::string s = buf;
  // "-0.000" -> "0.000"
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline std::string short_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// --- tables ----------------------------------------------------------------

struct Cell {
  std::string text;
  std::optional<double> number;

  static Cell integer(int v) { return {std::to_string(v), static_cast<double>(v)}; }
  static Cell real(double v, int decimals) { return {fixed(v, decimals), v}; }
  static Cell label(std::string s) { return {std::move(s), std::nullopt}; }
  static Cell empty() { return {"", std::nullopt}; }
};

struct Table {
  std::string id;
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c].text;
    out += '\n';
  }
  return out;
}

inline nlohmann::json to_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const Cell& cell = row[c];
      if (cell.text.empty()) {
        obj[t.columns[c]] = nullptr;
      } else if (cell.number) {
        // Round-trip the displayed text so JSON and CSV agree.
        obj[t.columns[c]] = io::parse_real(cell.text);
      } else {
        obj[t.columns[c]] = cell.text;
      }
    }
    rows.push_back(std::move(obj));
  }
  return {{"id", t.id}, {"title", t.title}, {"columns", t.columns}, {"rows", std::move(rows)}};
}

// --- ray provisioning --------------------------------------------------------

/// Enumerates rays, optionally through an on-disk cache, and keeps hit/miss
/// counts and timing for logging.
class RayProvider {
 public:
  explicit RayProvider(std::optional<std::filesystem::path> cache_dir = std::nullopt, unsigned jobs = 0,
                       std::ostream* log = nullptr)
      : jobs_(jobs), log_(log) {
    if (cache_dir) cache_.emplace(*cache_dir);
  }

  std::vector<RayDensity> rays(const ClassSpec& spec) const {
    const auto start = std::chrono::steady_clock::now();
    bool hit = false;
    std::vector<RayDensity> out;
    if (cache_) {
      out = cache_->get_or_compute(spec, jobs_, &hit);
    } else {
      out = enumerate_class_rays(spec, jobs_);
    }
    (hit ? hits_ : misses_) += 1;
    if (log_) {
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      *log_ << "rays d=" << spec.d() << " p=" << short_real(spec.p())
            << " rho=" << (spec.rho() ? short_real(*spec.rho()) : std::string("none")) << " count=" << out.size()
            << (cache_ ? (hit ? " cache=hit" : " cache=miss") : "") << " time_ms=" << fixed(ms, 1) << '\n';
    }
    return out;
  }

  unsigned jobs() const noexcept { return jobs_; }
  std::size_t cache_hits() const noexcept { return hits_; }
  std::size_t cache_misses() const noexcept { return misses_; }

 private:
  std::optional<RayCache> cache_;
  unsigned jobs_;
  std::ostream* log_;
  mutable std::size_t hits_ = 0;
  mutable std::size_t misses_ = 0;
};

inline std::string class_label(const ClassSpec& spec) {
  std::string s = "d=" + std::to_string(spec.d()) + " p=" + short_real(spec.p());
  if (spec.rho()) s += " rho=" + short_real(*spec.rho());
  return s;
}

/// Per-alpha VaR bounds, ray-scan ES extrema, the proved ES envelope and,
/// when rho is given, the moment-matched beta-mixing VaR and ES (blank when
/// rho is not in (0,1)).
inline Table bounds_table(const ClassSpec& spec, std::span<const double> alphas, const RayProvider& provider) {
  const std::vector<RayDensity> rays = provider.rays(spec);
  Table t;
  t.id = "bounds";
  t.title = "VaR/ES bounds " + class_label(spec);
  t.columns = {"alpha", "var_min", "var_max", "es_min", "es_max", "es_env_lower", "es_env_upper", "es_upper_attained"};
  std::optional<beta_mix::BetaMixParams> beta;
  if (spec.rho()) {
    t.columns.push_back("beta_var");
    t.columns.push_back("beta_es");
    if (*spec.rho() > 0.0 && *spec.rho() < 1.0) beta = beta_mix::calibrate(spec.p(), *spec.rho());
  }
  for (double alpha : alphas) {
    const RiskBounds b = scan_bounds(rays, alpha);
    const EsEnvelope env = es_envelope(spec, rays, alpha);
    std::vector<Cell> row{Cell{short_real(alpha), alpha},
                          Cell::integer(b.var_min),
                          Cell::integer(b.var_max),
                          Cell::real(b.es_min, 1),
                          Cell::real(b.es_max, 1),
                          Cell::integer(static_cast<int>(env.lower)),
                          Cell::integer(static_cast<int>(env.upper)),
                          Cell::label(env.upper_attained ? "true" : "false")};
    if (spec.rho()) {
      if (beta) {
        const DefaultCountPmf bp = beta_mix::pmf(*beta, spec.d());
        row.push_back(Cell::integer(value_at_risk(bp, alpha)));
        row.push_back(Cell::real(expected_shortfall(bp, alpha), 1));
      } else {
        row.push_back(Cell::empty());
        row.push_back(Cell::empty());
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Cross-moment bounds for orders 1..min(4, d) and the correlation range of S(p).
inline Table moments_table(const ClassSpec& spec, const RayProvider& provider) {
  if (spec.has_rho()) throw Error(ErrorKind::InvalidArgument, "moment tables are for mean-only classes");
  Table t;
  t.id = "moments";
  t.title = "Moment bounds " + class_label(spec);
  t.columns = {"order", "min", "max"};
  const std::vector<RayDensity> rays = provider.rays(spec);
  const auto first = mean_rays::moment_range_scan(rays, 1);
  t.rows.push_back({Cell::label("1"), Cell::real(first.min, 3), Cell::real(first.max, 3)});
  for (int order = 2; order <= std::min(4, spec.d()); ++order) {
    const auto m = mean_rays::moment_bounds(spec, order);
    t.rows.push_back({Cell::label(std::to_string(order)), Cell::real(m.min, 3), Cell::real(m.max, 3)});
  }
  if (spec.d() >= 2) {
    const auto c = mean_rays::correlation_bounds(spec);
    t.rows.push_back({Cell::label("rho"), Cell::real(c.min, 3), Cell::real(c.max, 3)});
  }
  return t;
}

/// rho_k = k / grid for k = 0..grid-1 (step 1/grid, last point (grid-1)/grid).
inline std::vector<double> sweep_grid(int grid) {
  if (grid < 1) throw Error(ErrorKind::InvalidArgument, "grid must be >= 1");
  std::vector<double> out;
  for (int k = 0; k < grid; ++k) out.push_back(static_cast<double>(k) / grid);
  return out;
}

/// Long-format VaR bounds and beta-mixing VaR over a rho grid. Infeasible
/// grid points become rows with status "infeasible" and blank values.
inline Table sweep_table(int d, double p, std::span<const double> rhos, std::span<const double> alphas,
                         const RayProvider& provider) {
  Table t;
  t.id = "sweep";
  t.title = "VaR bounds over rho, d=" + std::to_string(d) + " p=" + short_real(p);
  t.columns = {"rho", "alpha", "status", "var_min", "var_max", "beta_var"};
  for (double rho : rhos) {
    std::optional<std::vector<RayDensity>> rays;
    std::optional<ClassSpec> spec;
    std::string status = "ok";
    try {
      spec = ClassSpec::make(d, p, rho);
      rays = provider.rays(*spec);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InfeasibleMoment && e.kind() != ErrorKind::InvalidArgument) throw;
      status = "infeasible";
    }
    std::optional<DefaultCountPmf> beta_pmf;
    if (rays && rho > 0.0 && rho < 1.0) beta_pmf = beta_mix::pmf(beta_mix::calibrate(p, rho), d);
    for (double alpha : alphas) {
      std::vector<Cell> row{Cell{short_real(rho), rho}, Cell{short_real(alpha), alpha}, Cell::label(status)};
      if (rays) {
        const RiskBounds b = var_bounds_scan(*rays, alpha);
        row.push_back(Cell::integer(b.var_min));
        row.push_back(Cell::integer(b.var_max));
        row.push_back(beta_pmf ? Cell::integer(value_at_risk(*beta_pmf, alpha)) : Cell::empty());
      } else {
        row.push_back(Cell::empty());
        row.push_back(Cell::empty());
        row.push_back(Cell::empty());
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

// --- reference tables --------------------------------------------------------

enum class TableKind { Moments, MeanVar, MeanEs, CorrVar };

/// Expected contents of one reference table. `values[r]` holds the numeric
/// cells of row r (without the label column); `decimals[c]` is the display
/// precision used for comparison.
struct ReferenceTable {
  std::string id;
  std::string title;
  TableKind kind;
  std::string_view scenario;
  std::optional<std::string> rho;  // as a fraction, e.g. "1/6"
  std::vector<std::string> columns;
  std::vector<std::string> labels;
  std::vector<int> decimals;
  std::vector<std::vector<double>> values;
};

inline std::vector<ReferenceTable> reference_tables() {
  using V = std::vector<std::vector<double>>;
  const std::vector<std::string> quantiles{"0.9", "0.95", "0.99"};
  const std::vector<std::string> orders{"1", "2", "3", "4", "rho"};
  std::vector<ReferenceTable> out;

  auto moments = [&](std::string_view s, V v) {
    out.push_back({"moments_" + std::string(s), "Moments E(" + std::string(s) + ")", TableKind::Moments, s,
                   std::nullopt, {"order", "min_moment", "max_moment"}, orders, {3, 3}, std::move(v)});
  };
  auto mean_var = [&](std::string_view s, V v) {
    out.push_back({"var_" + std::string(s), "VaR bounds E(" + std::string(s) + ")", TableKind::MeanVar, s,
                   std::nullopt, {"quantile", "min_var", "max_var"}, quantiles, {0, 0}, std::move(v)});
  };
  auto mean_es = [&](std::string_view s, V v) {
    out.push_back({"es_" + std::string(s), "ES ray-scan bounds E(" + std::string(s) + ")", TableKind::MeanEs, s,
                   std::nullopt, {"quantile", "min_es", "max_es"}, quantiles, {1, 1}, std::move(v)});
  };
  auto corr_var = [&](std::string_view s, std::string rho, V v) {
    std::string tag = rho;
    for (char& c : tag)
      if (c == '/') c = '_';
    out.push_back({"var_" + std::string(s) + "_rho_" + tag, "VaR bounds E(" + std::string(s) + ", " + rho + ")",
                   TableKind::CorrVar, s, rho, {"quantile", "min_var", "max_var", "beta_var"}, quantiles, {0, 0, 0},
                   std::move(v)});
  };

  moments("A", {{0.003, 0.003}, {0, 0.003}, {0, 0.003}, {0, 0.003}, {-0.003, 1}});
  mean_var("A", {{0, 2}, {0, 5}, {0, 29}});
  mean_es("A", {{0.3, 2}, {0.3, 5}, {0.3, 29}});
  moments("BBB", {{0.017, 0.017}, {0, 0.017}, {0, 0.017}, {0, 0.017}, {-0.009, 1}});
  mean_var("BBB", {{0, 16}, {0, 33}, {1, 100}});
  mean_es("BBB", {{1.7, 16}, {1.7, 33}, {1.7, 100}});
  moments("B", {{0.266, 0.266}, {0.069, 0.266}, {0.017, 0.266}, {0.004, 0.266}, {-0.01, 1}});
  mean_var("B", {{19, 100}, {23, 100}, {26, 100}});
  mean_es("B", {{26.6, 100}, {26.6, 100}, {26.6, 100}});

  corr_var("A", "1/6", {{0, 2, 0}, {0, 5, 0}, {1, 22, 9}});
  corr_var("A", "1/2", {{0, 1, 0}, {0, 3, 0}, {0, 21, 4}});
  corr_var("A", "5/6", {{0, 0, 0}, {0, 1, 0}, {0, 7, 0}});
  corr_var("BBB", "1/6", {{0, 16, 5}, {1, 25, 11}, {2, 55, 29}});
  corr_var("BBB", "1/2", {{0, 9, 0}, {0, 25, 5}, {1, 93, 57}});
  corr_var("BBB", "5/6", {{0, 3, 0}, {0, 8, 0}, {61, 100, 94}});
  corr_var("B", "1/6", {{21, 82, 53}, {26, 100, 62}, {38, 100, 76}});
  corr_var("B", "1/2", {{42, 100, 82}, {56, 100, 93}, {63, 100, 100}});
  corr_var("B", "5/6", {{81, 100, 100}, {86, 100, 100}, {88, 100, 100}});
  return out;
}

/// {"tables": {id: [[row values], ...]}}
inline nlohmann::json reference_values_json(const std::vector<ReferenceTable>& tables) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& t : tables) j[t.id] = t.values;
  return {{"tables", std::move(j)}};
}

/// Replaces the values of `tables` with those in `j` (same schema as
/// reference_values_json); ids missing from `j` keep their values.
inline void apply_reference_values(std::vector<ReferenceTable>& tables, const nlohmann::json& j) {
  try {
    const auto& obj = j.at("tables");
    for (auto& t : tables) {
      if (!obj.contains(t.id)) continue;
      auto v = obj.at(t.id).get<std::vector<std::vector<double>>>();
      if (v.size() != t.values.size()) throw Error(ErrorKind::ParseError, "row count mismatch for " + t.id);
      for (std::size_t r = 0; r < v.size(); ++r)
        if (v[r].size() != t.values[r].size()) throw Error(ErrorKind::ParseError, "column count mismatch for " + t.id);
      t.values = std::move(v);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

/// Computes the numeric cells of a reference table from the library.
inline std::vector<std::vector<double>> compute_table(const ReferenceTable& ref, const RayProvider& provider,
                                                      int d = kDefaultPortfolioSize) {
  const double p = *scenario_probability(ref.scenario);
  std::vector<std::vector<double>> out;
  switch (ref.kind) {
    case TableKind::Moments: {
      const ClassSpec spec = ClassSpec::make(d, p);
      const auto rays = provider.rays(spec);
      const auto first = mean_rays::moment_range_scan(rays, 1);
      out.push_back({first.min, first.max});
      for (int order = 2; order <= 4; ++order) {
        const auto m = mean_rays::moment_bounds(spec, order);
        out.push_back({m.min, m.max});
      }
      const auto c = mean_rays::correlation_bounds(spec);
      out.push_back({c.min, c.max});
      break;
    }
    case TableKind::MeanVar: {
      const ClassSpec spec = ClassSpec::make(d, p);
      for (double alpha : kDefaultAlphas) {
        const VarBounds v = var_bounds_mean_closed_form(spec, alpha);
        out.push_back({static_cast<double>(v.min), static_cast<double>(v.max)});
      }
      break;
    }
    case TableKind::MeanEs: {
      const ClassSpec spec = ClassSpec::make(d, p);
      const auto rays = provider.rays(spec);
      for (double alpha : kDefaultAlphas) {
        const EsScan e = es_bounds_scan(rays, alpha);
        out.push_back({e.min, e.max});
      }
      break;
    }
    case TableKind::CorrVar: {
      const double rho = parse_fraction(*ref.rho);
      const ClassSpec spec = ClassSpec::make(d, p, rho);
      const auto rays = provider.rays(spec);
      const DefaultCountPmf bp = beta_mix::pmf(beta_mix::calibrate(p, rho), d);
      for (double alpha : kDefaultAlphas) {
        const RiskBounds b = var_bounds_scan(rays, alpha);
        out.push_back({static_cast<double>(b.var_min), static_cast<double>(b.var_max),
                       static_cast<double>(value_at_risk(bp, alpha))});
      }
      break;
    }
  }
  return out;
}

inline Table render_reference(const ReferenceTable& ref, const std::vector<std::vector<double>>& values) {
  Table t{ref.id, ref.title, ref.columns, {}};
  for (std::size_t r = 0; r < values.size(); ++r) {
    std::vector<Cell> row{Cell::label(ref.labels[r])};
    for (std::size_t c = 0; c < values[r].size(); ++c) row.push_back(Cell::real(values[r][c], ref.decimals[c]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct CellDiff {
  std::string table;
  std::string row;
  std::string column;
  std::string expected;
  std::string actual;
};

/// Cell-by-cell comparison at each column's display precision.
inline std::vector<CellDiff> compare_table(const ReferenceTable& ref, const std::vector<std::vector<double>>& actual) {
  std::vector<CellDiff> diffs;
  for (std::size_t r = 0; r < ref.values.size(); ++r)
    for (std::size_t c = 0; c < ref.values[r].size(); ++c) {
      const std::string want = fixed(ref.values[r][c], ref.decimals[c]);
      const std::string got = fixed(actual.at(r).at(c), ref.decimals[c]);
      if (want != got) diffs.push_back({ref.id, ref.labels[r], ref.columns[c + 1], want, got});
    }
  return diffs;
}

struct ReproduceResult {
  std::size_t tables = 0;
  std::size_t cells = 0;
  std::vector<CellDiff> diffs;
  std::vector<std::filesystem::path> files;
};

/// Regenerates every reference table and the three rho-sweep datasets into
/// `out_dir` (tables/, sweeps/, expected.json, manifest.json) and compares
/// the tables with `refs`.
inline ReproduceResult reproduce(const std::filesystem::path& out_dir, std::vector<ReferenceTable> refs,
                                 const RayProvider& provider, int grid = kDefaultSweepGrid,
                                 std::ostream* log = nullptr) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "tables");
  fs::create_directories(out_dir / "sweeps");
  ReproduceResult result;
  nlohmann::json manifest_tables = nlohmann::json::array();

  auto write = [&](const fs::path& rel, const std::string& bytes) {
    std::ofstream(out_dir / rel, std::ios::binary | std::ios::trunc) << bytes;
    result.files.push_back(rel);
    return hex64(fnv1a64(bytes));
  };

  for (const ReferenceTable& ref : refs) {
    const auto start = std::chrono::steady_clock::now();
    const auto values = compute_table(ref, provider);
    const auto diffs = compare_table(ref, values);
    const fs::path rel = fs::path("tables") / (ref.id + ".csv");
    const std::string checksum = write(rel, to_csv(render_reference(ref, values)));
    std::size_t cells = 0;
    for (const auto& row : ref.values) cells += row.size();
    result.cells += cells;
    result.tables += 1;
    result.diffs.insert(result.diffs.end(), diffs.begin(), diffs.end());
    manifest_tables.push_back({{"id", ref.id},
                               {"title", ref.title},
                               {"file", rel.generic_string()},
                               {"fnv1a64", checksum},
                               {"cells", cells},
                               {"mismatches", diffs.size()}});
    if (log) {
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      *log << "table " << ref.id << " cells=" << cells << " mismatches=" << diffs.size()
           << " time_ms=" << fixed(ms, 1) << '\n';
    }
  }

  nlohmann::json manifest_sweeps = nlohmann::json::array();
  const std::vector<double> rhos = sweep_grid(grid);
  for (const auto& s : kScenarios) {
    const Table t = sweep_table(kDefaultPortfolioSize, s.p, rhos, kDefaultAlphas, provider);
    const fs::path rel = fs::path("sweeps") / ("sweep_" + std::string(s.name) + ".csv");
    const std::string checksum = write(rel, to_csv(t));
    manifest_sweeps.push_back({{"scenario", s.name}, {"file", rel.generic_string()}, {"fnv1a64", checksum},
                               {"rows", t.rows.size()}, {"grid", grid}});
  }

  write("expected.json", reference_values_json(refs).dump(2) + "\n");

  nlohmann::json diffs = nlohmann::json::array();
  for (const auto& d : result.diffs)
    diffs.push_back({{"table", d.table}, {"row", d.row}, {"column", d.column}, {"expected", d.expected},
                     {"actual", d.actual}});
  const nlohmann::json manifest{{"version", std::string(kVersion)},
                                {"portfolio_size", kDefaultPortfolioSize},
                                {"alphas", kDefaultAlphas},
                                {"tables", std::move(manifest_tables)},
                                {"sweeps", std::move(manifest_sweeps)},
                                {"cells", result.cells},
                                {"mismatches", std::move(diffs)}};
  write("manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace exchrays::report
