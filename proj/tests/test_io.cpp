#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "billspec/error.hpp"
#include "billspec/io.hpp"

using namespace billspec;
using nlohmann::json;

TEST_CASE("domain json round trip") {
  const json cases[] = {
      {{"type", "disk"}, {"R", 1.5}},
      {{"type", "ellipse"}, {"a", 2.0}, {"b", 1.0}},
      {{"type", "confocal_annulus"}, {"a2", 2.0}, {"b2", 1.5}, {"a1", 1.5}},
      {{"type", "circular_annulus"}, {"R", 1.0}, {"r", 0.5}},
      {{"type", "polygon"}, {"vertices", {{0, 0}, {1, 0}, {0, 1}}}},
      {{"type", "radial_layers"}, {"radii", {1.0, 0.5}}, {"speeds", {1.0, 0.8}}},
  };
  for (const json& c : cases) {
    const Domain d = domain_from_json(c);
    const json back = domain_to_json(d);
    CHECK(back["type"] == c["type"]);
    CHECK(domain_to_json(domain_from_json(back)) == back);
  }
  const Domain rect = domain_from_json({{"type", "rectangle"}, {"Lx", 2.0}, {"Ly", 1.0}});
  REQUIRE(std::holds_alternative<Polygon>(rect));
  CHECK(std::get<Polygon>(rect).vertices.size() == 4);
  CHECK(std::get<Disk>(domain_from_json(cases[0])).R == 1.5);
}

TEST_CASE("domain json errors") {
  auto code_of = [](const json& j) {
    try {
      domain_from_json(j);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no error");
    return ErrorCode::OutOfRange;
  };
  CHECK(code_of({{"type", "hexagon"}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"R", 1.0}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"type", "disk"}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"type", "disk"}, {"R", "one"}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"type", "polygon"}, {"vertices", {1, 2, 3}}}) == ErrorCode::ConfigError);
  CHECK(code_of({{"type", "disk"}, {"R", -1.0}}) == ErrorCode::InvalidDomain);
  CHECK(code_of({{"type", "ellipse"}, {"a", 1.0}, {"b", 2.0}}) == ErrorCode::InvalidDomain);
}

TEST_CASE("json files") {
  const std::string path = "test_io_domain.json";
  {
    std::ofstream f(path);
    f << R"({"type": "disk", "R": 2})";
  }
  CHECK(read_json_file(path)["R"] == 2);
  {
    std::ofstream f(path);
    f << "{not json";
  }
  CHECK_THROWS_AS(read_json_file(path), Error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_json_file("does/not/exist.json"), Error);
}

TEST_CASE("fnv1a reference vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
  // key order does not change the hash
  CHECK(config_hash(json::parse(R"({"a": 1, "b": 2})")) == config_hash(json::parse(R"({"b": 2, "a": 1})")));
  CHECK(config_hash(json::parse(R"({"a": 1})")) != config_hash(json::parse(R"({"a": 2})")));
}

TEST_CASE("real formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
    const std::string s = format_real(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("csv writer") {
  std::ostringstream os;
  CsvWriter w(os);
  const std::uint64_t seed = 42;
  w.meta("trace", 0xabcULL, &seed);
  w.header({"a", "b", "c"});
  w.row(1, 0.5, std::string_view("plain"));
  w.row(2, -1.0, std::string_view("has,comma"));
  w.row(3, 2.0, std::string_view("say \"hi\""));
  const std::string out = os.str();
  std::istringstream in(out);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# tool=billspec trace,version=0.1.0,config_hash=0000000000000abc,seed=42", 0) == 0);
  CHECK(line.back() == '\r');
  std::getline(in, line);
  CHECK(line == "a,b,c\r");
  std::getline(in, line);
  CHECK(line == "1,0.5,plain\r");
  std::getline(in, line);
  CHECK(line == "2,-1,\"has,comma\"\r");
  std::getline(in, line);
  CHECK(line == "3,2,\"say \"\"hi\"\"\"\r");

  std::ostringstream no_seed;
  CsvWriter(no_seed).meta("weyl", 1, nullptr);
  CHECK(no_seed.str().find("seed") == std::string::npos);
}
