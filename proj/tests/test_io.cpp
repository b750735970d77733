#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "ssr/cli.hpp"
#include "ssr/io.hpp"

using namespace ssr;
using namespace fixtures;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(SSR_DATA_DIR) + "/" + name; }

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("ssr_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kQuadrantIdentity = R"({
  "matrix": [[1, 0], [0, 1]],
  "source": {"ambient_dim": 2, "rays": [[1, 0], [0, 1]], "cones": [{"rays": [0, 1]}]},
  "target": {"ambient_dim": 2, "rays": [["1", "0"], ["0", "1"]], "cones": [{"rays": [0, 1]}]}
})";

}  // namespace

TEST(Json, ComplexRoundTrip) {
  Complex c = complex_of(3, {qv({1, 0, 0}), qv({0, 1, 0}), qv({0, 0, 1}), qv({1, 1, 1}), qv({-1, 0, 0})},
                         {{0, 1, 3}, {1, 2, 3}, {0, 2, 3}, {1, 2, 4}});
  EXPECT_EQ(complex_from_json(to_json(c)), c);
  std::vector<ConeSpec> spec{{{0, 1}, LatticeBasis::from_generators(2, {qv({1, 0}), qv({1, 2})})}};
  Complex coarse(2, {qv({1, 0}), qv({1, 2})}, spec);
  Json doc = to_json(coarse);
  EXPECT_TRUE(doc["cones"][0].contains("lattice"));
  EXPECT_EQ(complex_from_json(doc), coarse);
}

TEST(Json, MorphismRoundTripAndIntegerEntries) {
  auto f = parse_morphism_document(kQuadrantIdentity);
  EXPECT_EQ(f, identity_on(positive_orthant(2)));
  EXPECT_EQ(morphism_from_json(to_json(e1())), e1());
}

TEST(Json, TraceRoundTrip) {
  auto r = reduce(read_morphism(data("interior_ray.json")));
  Json doc = to_json(r.trace);
  EXPECT_EQ(doc["format"], "ssr-trace/1");
  EXPECT_EQ(to_json(trace_from_json(doc)).dump(), doc.dump());
}

// Emitted documents use exactly the keys the shipped schemas declare.
static void expect_keys_match(const Json& doc, const Json& schema) {
  for (const auto& key : schema["required"]) EXPECT_TRUE(doc.contains(key.get<std::string>())) << key;
  for (const auto& [key, value] : doc.items()) EXPECT_TRUE(schema["properties"].contains(key)) << key;
}

TEST(Json, DocumentsMatchShippedSchemas) {
  auto schema = [](const std::string& name) {
    return read_json_file(std::string(SSR_SCHEMA_DIR) + "/" + name + ".schema.json");
  };
  Json complex = schema("complex"), morphism = schema("morphism"), trace = schema("trace");
  Json f = to_json(e1());
  expect_keys_match(f, morphism);
  expect_keys_match(f["source"], complex);
  for (const auto& cone : f["source"]["cones"]) expect_keys_match(cone, complex["properties"]["cones"]["items"]);
  auto r = reduce(e1());
  Json t = to_json(r.trace);
  expect_keys_match(t, trace);
  ASSERT_FALSE(t["steps"].empty());
  for (const auto& step : t["steps"]) {
    expect_keys_match(step, trace["$defs"]["step"]);
    EXPECT_NE(std::find(trace["$defs"]["step"]["properties"]["kind"]["enum"].begin(),
                        trace["$defs"]["step"]["properties"]["kind"]["enum"].end(), step["kind"]),
              trace["$defs"]["step"]["properties"]["kind"]["enum"].end());
  }
}

TEST(Json, ErrorKinds) {
  EXPECT_THROW(parse_morphism_document("{\"matrix\": [1, 2"), ParseError);
  EXPECT_THROW(parse_morphism_document(R"({"matrix": [[1]]})"), SchemaError);
  EXPECT_THROW(parse_morphism_document(R"({"matrix": [["x"]], "source": {}, "target": {}})"), SchemaError);
  std::string doubled = kQuadrantIdentity;
  doubled.replace(doubled.find("[[1, 0], [0, 1]], \"cones\""), 16, "[[2, 0], [0, 1]]");
  try {
    parse_morphism_document(doubled);
    FAIL() << "non-primitive ray accepted";
  } catch (const ValidationError& e) {
    ASSERT_FALSE(e.issues().empty());
    EXPECT_NE(e.issues().front().find("primitive"), std::string::npos);
  }
}

TEST(Json, RelativePathsResolveAgainstTheDocument) {
  fs::path dir = scratch_dir("paths");
  write_json_file(dir / "quadrant.json", to_json(positive_orthant(2)));
  Json doc = parse_json_text(R"({"matrix": [[1, 0], [0, 1]], "source": "quadrant.json", "target": "quadrant.json"})");
  write_json_file(dir / "f.json", doc);
  EXPECT_EQ(read_morphism(dir / "f.json"), identity_on(positive_orthant(2)));
}

TEST(Digest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Digest, IndependentOfInputRayOrder) {
  Complex a = complex_of(2, {qv({1, 0}), qv({0, 1})}, {{0, 1}});
  Complex b = complex_of(2, {qv({0, 1}), qv({1, 0})}, {{0, 1}});
  EXPECT_EQ(digest(a), digest(b));
  EXPECT_NE(digest(a), digest(complex_of(2, {qv({1, 0}), qv({1, 2})}, {{0, 1}})));
}

TEST(Cli, CheckPrintsVerdictAndReasons) {
  auto r = cli({"check", data("e1.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "weakly-semistable");
  EXPECT_NE(r.out.find("multiplicity 2"), std::string::npos);
}

TEST(Cli, ReduceWritesVerifiableTrace) {
  fs::path dir = scratch_dir("reduce");
  auto r = cli({"reduce", data("e3.json"), "--trace", (dir / "t.json").string(), "--output",
                (dir / "out.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("status: complete"), std::string::npos);
  EXPECT_EQ(check_semistable(read_morphism(dir / "out.json")).verdict, Semistability::semistable);
  auto v = cli({"verify-trace", data("e3.json"), (dir / "t.json").string()});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, "verified\n");
  auto wrong = cli({"verify-trace", data("e1.json"), (dir / "t.json").string()});
  EXPECT_EQ(wrong.code, 1);
}

TEST(Cli, ExitCodes) {
  fs::path dir = scratch_dir("codes");
  EXPECT_EQ(cli({"reduce", data("reldim4.json")}).code, 4);
  auto adv = cli({"reduce", data("adversarial_fiber.json"), "--trace", (dir / "t.json").string()});
  EXPECT_EQ(adv.code, 2);
  Json trace = read_json_file(dir / "t.json");
  EXPECT_EQ(trace["status"], "failed");
  EXPECT_EQ(trace["failure"]["exit_code"], 2);
  EXPECT_EQ(cli({"check", (dir / "missing.json").string()}).code, 1);
  EXPECT_EQ(cli({"reduce"}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"reduce", data("e3.json"), "--max-dilation", "0"}).code, 1);
}

TEST(Cli, StatsReportsCounts) {
  auto r = cli({"stats", data("e1.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("cones by dimension: 1:4 2:6 3:4 4:1"), std::string::npos);
  EXPECT_NE(r.out.find("relative dimension: 2"), std::string::npos);
}
