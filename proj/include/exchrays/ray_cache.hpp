#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "exchrays/class_spec.hpp"
#include "exchrays/ray.hpp"
#include "exchrays/rays_corr.hpp"
#include "exchrays/rays_mean.hpp"
#include "exchrays/serialization.hpp"
#include "exchrays/version.hpp"

namespace exchrays {

/// Rays of the class: S(p) when the spec has no rho, S(p, rho) otherwise.
inline std::vector<RayDensity> enumerate_class_rays(const ClassSpec& spec, unsigned jobs = 0) {
  if (spec.has_rho()) return corr_rays::enumerate_rays(spec, jobs);
  return mean_rays::enumerate_rays(spec);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// On-disk cache of ray sets keyed by (d, p, rho, library version). Each
/// entry is a ray-set file plus a sidecar holding the FNV-1a checksum of its
/// bytes; entries that fail the checksum or do not parse are recomputed.
class RayCache {
 public:
  explicit RayCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  static std::string key(const ClassSpec& spec) {
    return std::string("v") + std::string(kVersion) + "|d=" + std::to_string(spec.d()) +
           "|p=" + io::format_real(spec.p()) + "|rho=" + (spec.rho() ? io::format_real(*spec.rho()) : "none");
  }

  std::filesystem::path entry_path(const ClassSpec& spec) const {
    return dir_ / ("rays_" + hex64(fnv1a64(key(spec))) + ".txt");
  }

  std::optional<std::vector<RayDensity>> load(const ClassSpec& spec) const {
    const auto path = entry_path(spec);
    const auto sum_path = checksum_path(path);
    std::ifstream in(path, std::ios::binary);
    std::ifstream sum_in(sum_path);
    if (!in || !sum_in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    std::string stored;
    sum_in >> stored;
    if (stored != hex64(fnv1a64(bytes))) return std::nullopt;
    try {
      std::istringstream is(bytes);
      io::RaySet set = io::read_ray_set(is);
      if (set.spec.d() != spec.d() || set.spec.p() != spec.p() || set.spec.rho() != spec.rho()) return std::nullopt;
      return std::move(set.rays);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  void store(const ClassSpec& spec, const std::vector<RayDensity>& rays) const {
    std::ostringstream os;
    io::write_ray_set(os, spec, rays);
    const std::string bytes = os.str();
    const auto path = entry_path(spec);
    {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << bytes;
    }
    std::ofstream sum_out(checksum_path(path), std::ios::trunc);
    sum_out << hex64(fnv1a64(bytes)) << '\n';
  }

  /// Returns cached rays or enumerates and stores them. `hit` reports which.
  std::vector<RayDensity> get_or_compute(const ClassSpec& spec, unsigned jobs = 0, bool* hit = nullptr) const {
    if (auto cached = load(spec)) {
      if (hit) *hit = true;
      return std::move(*cached);
    }
    if (hit) *hit = false;
    std::vector<RayDensity> rays = enumerate_class_rays(spec, jobs);
    store(spec, rays);
    return rays;
  }

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  static std::filesystem::path checksum_path(const std::filesystem::path& p) {
    auto s = p;
    s.replace_extension(".sum");
    return s;
  }

  std::filesystem::path dir_;
};

}  // namespace exchrays
