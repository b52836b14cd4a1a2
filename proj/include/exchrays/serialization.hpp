#pragma once

// Text formats.
//
// pmf, dense CSV:   one "j,prob" row per index 0..d (optional "j,prob" header)
// pmf, sparse:      "j:prob;j:prob;..." on one line, omitted indices are zero
// pmf, JSON:        {"d": D, "probs": [...]} or {"d": D, "sparse": [[j, prob], ...]}
// ray set:          line 1 "d,p,rho,count" (rho empty for mean-only classes),
//                   then one ray per line "j1:m1;j2:m2[;j3:m3]"
// Reals are written with 17 significant digits so that they round-trip.

#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "exchrays/class_spec.hpp"
#include "exchrays/errors.hpp"
#include "exchrays/pmf.hpp"
#include "exchrays/ray.hpp"

namespace exchrays::io {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_real(std::string_view s) {
  // strtod rather than from_chars: libstdc++ 11 lacks the floating overloads.
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw Error(ErrorKind::ParseError, "not a number: '" + tmp + "'");
  }
  return v;
}

inline int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::ParseError, "not an integer: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// --- pmf -------------------------------------------------------------------

inline void write_pmf_csv(std::ostream& os, const DefaultCountPmf& pmf) {
  os << "j,prob\n";
  for (int j = 0; j <= pmf.d(); ++j) os << j << ',' << format_real(pmf[j]) << '\n';
}

inline DefaultCountPmf read_pmf_csv(std::istream& is) {
  std::vector<double> probs;
  std::string line;
  while (std::getline(is, line)) {
    const std::string_view row = trim(line);
    if (row.empty() || row == "j,prob") continue;
    const auto cells = split(row, ',');
    if (cells.size() != 2) throw Error(ErrorKind::ParseError, "expected 'j,prob', got '" + line + "'");
    const int j = parse_int(trim(cells[0]));
    if (j != static_cast<int>(probs.size())) {
      throw Error(ErrorKind::ParseError, "dense pmf rows must be consecutive from 0; got j=" + std::to_string(j));
    }
    probs.push_back(parse_real(trim(cells[1])));
  }
  if (probs.size() < 2) throw Error(ErrorKind::LengthMismatch, "a pmf needs at least two entries");
  return DefaultCountPmf::validate(std::move(probs));
}

inline std::string to_sparse(const DefaultCountPmf& pmf) {
  std::string out;
  for (int j = 0; j <= pmf.d(); ++j) {
    if (pmf[j] == 0.0) continue;
    if (!out.empty()) out += ';';
    out += std::to_string(j) + ':' + format_real(pmf[j]);
  }
  return out;
}

inline std::vector<Atom> parse_atoms(std::string_view text) {
  std::vector<Atom> atoms;
  for (std::string_view item : split(trim(text), ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto kv = split(item, ':');
    if (kv.size() != 2) throw Error(ErrorKind::ParseError, "expected 'j:prob', got '" + std::string(item) + "'");
    atoms.push_back({parse_int(trim(kv[0])), parse_real(trim(kv[1]))});
  }
  return atoms;
}

inline DefaultCountPmf from_sparse(int d, std::string_view text) {
  std::vector<double> probs(static_cast<std::size_t>(d) + 1, 0.0);
  for (const Atom& a : parse_atoms(text)) {
    if (a.index < 0 || a.index > d) throw Error(ErrorKind::LengthMismatch, "index outside 0..d");
    probs[static_cast<std::size_t>(a.index)] += a.mass;
  }
  return DefaultCountPmf::validate(d, std::move(probs));
}

inline nlohmann::json pmf_to_json(const DefaultCountPmf& pmf, bool sparse = false) {
  nlohmann::json j;
  j["d"] = pmf.d();
  if (sparse) {
    nlohmann::json pairs = nlohmann::json::array();
    for (int k = 0; k <= pmf.d(); ++k)
      if (pmf[k] != 0.0) pairs.push_back({k, pmf[k]});
    j["sparse"] = std::move(pairs);
  } else {
    j["probs"] = std::vector<double>(pmf.probs().begin(), pmf.probs().end());
  }
  return j;
}

inline DefaultCountPmf pmf_from_json(const nlohmann::json& j) {
  try {
    const int d = j.at("d").get<int>();
    if (j.contains("probs")) return DefaultCountPmf::validate(d, j.at("probs").get<std::vector<double>>());
    std::vector<double> probs(static_cast<std::size_t>(d) + 1, 0.0);
    for (const auto& pair : j.at("sparse")) {
      const int k = pair.at(0).get<int>();
      if (k < 0 || k > d) throw Error(ErrorKind::LengthMismatch, "index outside 0..d");
      probs[static_cast<std::size_t>(k)] += pair.at(1).get<double>();
    }
    return DefaultCountPmf::validate(d, std::move(probs));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

/// Reads a pmf in any of the three formats, sniffing the first character.
inline DefaultCountPmf read_pmf(std::istream& is, std::optional<int> sparse_d = std::nullopt) {
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    try {
      return pmf_from_json(nlohmann::json::parse(body));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::ParseError, e.what());
    }
  }
  if (body.find(':') != std::string_view::npos) {
    if (!sparse_d) throw Error(ErrorKind::InvalidArgument, "sparse pmf input needs d");
    return from_sparse(*sparse_d, body);
  }
  std::istringstream rows(text);
  return read_pmf_csv(rows);
}

// --- ray sets --------------------------------------------------------------

inline std::string ray_set_header(const ClassSpec& spec, std::size_t count) {
  return std::to_string(spec.d()) + ',' + format_real(spec.p()) + ',' +
         (spec.rho() ? format_real(*spec.rho()) : std::string()) + ',' + std::to_string(count);
}

inline void write_ray_set(std::ostream& os, const ClassSpec& spec, const std::vector<RayDensity>& rays) {
  os << ray_set_header(spec, rays.size()) << '\n';
  for (const RayDensity& r : rays) os << r.to_sparse_string() << '\n';
}

struct RaySet {
  ClassSpec spec;
  std::vector<RayDensity> rays;
};

/// Parses a ray set and re-checks every ray against the header's class.
inline RaySet read_ray_set(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::ParseError, "empty ray set");
  const auto head = split(trim(line), ',');
  if (head.size() != 4) throw Error(ErrorKind::ParseError, "ray set header must be 'd,p,rho,count'");
  std::optional<double> rho;
  if (!trim(head[2]).empty()) rho = parse_real(trim(head[2]));
  const ClassSpec spec = ClassSpec::make(parse_int(trim(head[0])), parse_real(trim(head[1])), rho);
  const auto count = static_cast<std::size_t>(parse_int(trim(head[3])));

  std::vector<RayDensity> rays;
  rays.reserve(count);
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const std::vector<Atom> atoms = parse_atoms(line);
    rays.push_back(RayDensity::make(spec, atoms));
  }
  if (rays.size() != count) {
    throw Error(ErrorKind::ParseError,
                "header announces " + std::to_string(count) + " rays, found " + std::to_string(rays.size()));
  }
  return {spec, std::move(rays)};
}

inline nlohmann::json ray_set_to_json(const ClassSpec& spec, const std::vector<RayDensity>& rays) {
  nlohmann::json j;
  j["d"] = spec.d();
  j["p"] = spec.p();
  j["rho"] = spec.rho() ? nlohmann::json(*spec.rho()) : nlohmann::json(nullptr);
  j["count"] = rays.size();
  nlohmann::json arr = nlohmann::json::array();
  for (const RayDensity& r : rays) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const Atom& a : r.atoms()) pairs.push_back({a.index, a.mass});
    arr.push_back(std::move(pairs));
  }
  j["rays"] = std::move(arr);
  return j;
}

}  // namespace exchrays::io
