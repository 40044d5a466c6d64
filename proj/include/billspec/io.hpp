#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "billspec/geometry.hpp"

namespace billspec {

inline constexpr std::string_view kVersion = "0.1.0";

/// {"type": "disk", "R": 1}, {"type": "ellipse", "a": 2, "b": 1},
/// {"type": "confocal_annulus", "a2", "b2", "a1"}, {"type": "circular_annulus", "R", "r"},
/// {"type": "polygon", "vertices": [[x, y], ...]}, {"type": "rectangle", "Lx", "Ly"},
/// {"type": "radial_layers", "radii": [...], "speeds": [...]}.
Domain domain_from_json(const nlohmann::json& j);
nlohmann::json domain_to_json(const Domain& domain);
nlohmann::json read_json_file(const std::string& path);

std::uint64_t fnv1a(std::string_view bytes);
/// Hash of the canonical (key-sorted) dump.
std::uint64_t config_hash(const nlohmann::json& config);

/// Shortest round-trip-safe form, 17 significant digits.
std::string format_real(double v);

/// RFC 4180 writer; the first line is a '#' comment carrying run metadata.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void meta(std::string_view tool, std::uint64_t hash, const std::uint64_t* seed);
  void header(const std::vector<std::string>& names);

  template <class... Ts>
  void row(const Ts&... values) {
    bool first = true;
    ((put(values, first)), ...);
    os_ << "\r\n";
  }

 private:
  void sep(bool& first) {
    if (!first) os_ << ',';
    first = false;
  }
  void put(double v, bool& first) {
    sep(first);
    os_ << format_real(v);
  }
  template <class I>
  requires std::is_integral_v<I>
  void put(I v, bool& first) {
    sep(first);
    os_ << v;
  }
  void put(std::string_view s, bool& first);

  std::ostream& os_;
};

}  // namespace billspec
