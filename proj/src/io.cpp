#include "billspec/io.hpp"

#include <cstdio>
#include <fstream>

#include "billspec/error.hpp"

namespace billspec {

using nlohmann::json;

namespace {

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(ErrorCode::ConfigError, std::string("domain field '") + key + "' missing or not a number");
  return j.at(key).get<double>();
}

std::vector<double> nums(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw Error(ErrorCode::ConfigError, std::string("domain field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw Error(ErrorCode::ConfigError, std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Domain domain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw Error(ErrorCode::ConfigError, "domain must be an object with a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "disk") return make_disk(num(j, "R"));
  if (type == "ellipse") return make_ellipse(num(j, "a"), num(j, "b"));
  if (type == "confocal_annulus") return make_confocal_annulus(num(j, "a2"), num(j, "b2"), num(j, "a1"));
  if (type == "circular_annulus") return make_circular_annulus(num(j, "R"), num(j, "r"));
  if (type == "rectangle") return make_rectangle(num(j, "Lx"), num(j, "Ly"));
  if (type == "polygon") {
    if (!j.contains("vertices") || !j.at("vertices").is_array())
      throw Error(ErrorCode::ConfigError, "polygon needs a 'vertices' array");
    std::vector<Vec2> v;
    for (const auto& p : j.at("vertices")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw Error(ErrorCode::ConfigError, "polygon vertices must be [x, y] pairs");
      v.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return make_polygon(std::move(v));
  }
  if (type == "radial_layers") return make_radial_layers(nums(j, "radii"), nums(j, "speeds"));
  throw Error(ErrorCode::ConfigError, "unknown domain type '" + type + "'");
}

json domain_to_json(const Domain& domain) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Disk>) return {{"type", "disk"}, {"R", d.R}};
        else if constexpr (std::is_same_v<T, Ellipse>) return {{"type", "ellipse"}, {"a", d.a}, {"b", d.b}};
        else if constexpr (std::is_same_v<T, ConfocalAnnulus>)
          return {{"type", "confocal_annulus"}, {"a2", d.a2}, {"b2", d.b2}, {"a1", d.a1}};
        else if constexpr (std::is_same_v<T, CircularAnnulus>)
          return {{"type", "circular_annulus"}, {"R", d.R}, {"r", d.r}};
        else if constexpr (std::is_same_v<T, Polygon>) {
          json v = json::array();
          for (auto p : d.vertices) v.push_back({p.x, p.y});
          return {{"type", "polygon"}, {"vertices", v}};
        } else {
          return {{"type", "radial_layers"}, {"radii", d.radii}, {"speeds", d.speeds}};
        }
      },
      domain);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, "invalid JSON in '" + path + "': " + e.what());
  }
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const json& config) { return fnv1a(config.dump()); }

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvWriter::meta(std::string_view tool, std::uint64_t hash, const std::uint64_t* seed) {
  char h[24];
  std::snprintf(h, sizeof h, "%016llx", static_cast<unsigned long long>(hash));
  os_ << "# tool=billspec " << tool << ",version=" << kVersion << ",config_hash=" << h;
  if (seed) os_ << ",seed=" << *seed;
  os_ << "\r\n";
}

void CsvWriter::header(const std::vector<std::string>& names) {
  bool first = true;
  for (const auto& n : names) put(std::string_view(n), first);
  os_ << "\r\n";
}

void CsvWriter::put(std::string_view s, bool& first) {
  sep(first);
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
    os_ << s;
    return;
  }
  os_ << '"';
  for (char c : s) {
    if (c == '"') os_ << '"';
    os_ << c;
  }
  os_ << '"';
}

}  // namespace billspec
