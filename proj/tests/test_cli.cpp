#include "boundpop/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using nlohmann::json;

namespace {

const std::string source_dir = BOUNDPOP_SOURCE_DIR;
const std::string chao_fixture = source_dir + "/fixtures/chao.txt";
const std::string tcr_fixture = source_dir + "/fixtures/tcr_prefix.txt";

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = boundpop::cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

json invoke_json(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("json");
  const auto r = invoke(args);
  REQUIRE_MESSAGE(r.status == 0, r.err);
  return json::parse(r.out);
}

std::map<std::string, std::string> parse_tsv(const std::string &text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab != std::string::npos)
      kv[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return kv;
}

const json &schema() {
  static const json s = [] {
    std::ifstream f(source_dir + "/docs/report.schema.json");
    return json::parse(f);
  }();
  return s;
}

// Just enough of JSON Schema to pin field names and basic types: object
// properties, required, additionalProperties:false, arrays, $ref, type, enum.
void conforms(const json &value, const json &rule, const std::string &path) {
  if (rule.contains("$ref")) {
    const std::string ref = rule["$ref"];
    conforms(value, schema()["$defs"][ref.substr(ref.rfind('/') + 1)], path);
    return;
  }
  if (rule.contains("type")) {
    const auto is = [&](const std::string &t) {
      return (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
             (t == "number" && value.is_number()) ||
             (t == "integer" && value.is_number_integer()) ||
             (t == "boolean" && value.is_boolean()) || (t == "string" && value.is_string()) ||
             (t == "null" && value.is_null());
    };
    bool ok = false;
    if (rule["type"].is_array()) {
      for (const auto &t : rule["type"])
        ok = ok || is(t);
    } else {
      ok = is(rule["type"]);
    }
    CHECK_MESSAGE(ok, path << " has type " << value.type_name());
  }
  if (rule.contains("enum")) {
    bool found = false;
    for (const auto &v : rule["enum"])
      found = found || v == value;
    CHECK_MESSAGE(found, path);
  }
  if (rule.contains("const"))
    CHECK_MESSAGE(rule["const"] == value, path);
  if (value.is_object()) {
    for (const auto &key : rule.value("required", json::array()))
      CHECK_MESSAGE(value.contains(key), path << " lacks " << key);
    const json props = rule.value("properties", json::object());
    for (const auto &[key, v] : value.items()) {
      if (props.contains(key))
        conforms(v, props[key], path + "." + key);
      else
        CHECK_MESSAGE(rule.value("additionalProperties", true), path << " has extra " << key);
    }
  }
  if (value.is_array() && rule.contains("items")) {
    for (std::size_t i = 0; i < value.size(); ++i)
      conforms(value[i], rule["items"], path + "[" + std::to_string(i) + "]");
    if (rule.contains("minItems"))
      CHECK(value.size() >= rule["minItems"].get<std::size_t>());
    if (rule.contains("maxItems"))
      CHECK(value.size() <= rule["maxItems"].get<std::size_t>());
  }
}

void conforms(const json &value, const std::string &kind) {
  conforms(value, schema()["$defs"][kind], kind);
}

std::filesystem::path scratch(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / "boundpop_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_CASE("estimate on the Chao fixture") {
  const auto r = invoke_json({"estimate", "--hist", chao_fixture});
  CHECK(r["n0_hat"].get<double>() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(r["s_hat"].get<double>() == doctest::Approx(250.0).epsilon(1e-12));
  CHECK(r["order"] == 1);
  CHECK(r["distinct"] == 150);
  CHECK(r["individuals"] == 200);
  conforms(r, "estimate");
}

TEST_CASE("estimate from raw counts matches the histogram route") {
  const auto path = scratch("counts.txt");
  {
    std::ofstream f(path);
    for (int i = 0; i < 100; ++i)
      f << "1\n";
    for (int i = 0; i < 50; ++i)
      f << "2\n";
    f << "0\n";
  }
  const auto a = invoke_json({"estimate", "--counts", path.string()});
  const auto b = invoke_json({"estimate", "--hist", chao_fixture});
  CHECK(a == b);
}

TEST_CASE("JSON and TSV carry identical values") {
  for (const auto &cmd : std::vector<std::vector<std::string>>{
           {"estimate", "--hist", tcr_fixture},
           {"bootstrap", "--hist", tcr_fixture, "--reps", "30", "--seed", "3"}}) {
    const auto j = invoke_json(cmd);
    const auto t = invoke(cmd);
    REQUIRE(t.status == 0);
    const auto kv = parse_tsv(t.out);
    for (const auto &[key, value] : j.items()) {
      REQUIRE_MESSAGE(kv.count(key), key);
      if (value.is_array()) {
        std::string joined;
        for (std::size_t i = 0; i < value.size(); ++i)
          joined += (i ? "," : "") + (value[i].is_null() ? std::string("NA") : value[i].dump());
        CHECK_MESSAGE(kv.at(key) == joined, key);
      } else {
        CHECK_MESSAGE(kv.at(key) == (value.is_null() ? "NA" : value.dump()), key);
      }
    }
    CHECK(kv.size() == j.size());
  }
}

TEST_CASE("bootstrap report fields and thread independence") {
  const std::vector<std::string> base{"bootstrap", "--hist", tcr_fixture, "--reps", "60", "--seed", "19"};
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1", "--format", "json"});
  four.insert(four.end(), {"--threads", "4", "--format", "json"});
  const auto a = invoke(one), b = invoke(four);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  const auto r = json::parse(a.out);
  conforms(r, "bootstrap");
  CHECK(r["seed"] == 19);
  CHECK(r["replicates"] == 60);
  CHECK(r["ci"][0].get<double>() <= r["bagged"].get<double>());
  CHECK(r["bagged"].get<double>() <= r["ci"][1].get<double>());
}

TEST_CASE("an absent seed is drawn and reported") {
  const auto r = invoke_json({"bootstrap", "--hist", chao_fixture, "--reps", "10"});
  REQUIRE(r.contains("seed"));
  const auto again = invoke_json({"bootstrap", "--hist", chao_fixture, "--reps", "10", "--seed",
                                  std::to_string(r["seed"].get<std::uint64_t>())});
  CHECK(again == r);
}

TEST_CASE("exit status") {
  SUBCASE("usage errors are 2") {
    CHECK(invoke({}).status == 2);
    CHECK(invoke({"estimate"}).status == 2);
    CHECK(invoke({"estimate", "--hist", "/nonexistent/file"}).status == 2);
    CHECK(invoke({"estimate", "--hist", chao_fixture, "--format", "xml"}).status == 2);
    CHECK(invoke({"estimate", "--hist", chao_fixture, "--counts", chao_fixture}).status == 2);
    CHECK(invoke({"bootstrap", "--hist", chao_fixture, "--reps", "1"}).status == 2);
    CHECK(invoke({"frobnicate"}).status == 2);
  }
  SUBCASE("input and estimation failures are 1") {
    const auto bad = scratch("bad.txt");
    std::ofstream(bad) << "1 10\nx y\n";
    const auto r = invoke({"estimate", "--hist", bad.string()});
    CHECK(r.status == 1);
    CHECK(r.err.find("line 2") != std::string::npos);

    const auto no_pairs = scratch("nopairs.txt");
    std::ofstream(no_pairs) << "1 10\n3 4\n";
    CHECK(invoke({"estimate", "--hist", no_pairs.string()}).status == 1);
  }
  SUBCASE("help is 0") {
    CHECK(invoke({"--help"}).status == 0);
  }
}

TEST_CASE("simulate prints a parseable histogram with truth comments") {
  const auto r = invoke({"simulate", "--model", "mixture", "--lambdas", "1,0.1", "--weights", "0.5,0.5",
                         "--classes", "5000", "--seed", "4"});
  REQUIRE_MESSAGE(r.status == 0, r.err);
  CHECK(r.out.find("# n0_true\t") != std::string::npos);
  const auto path = scratch("sim.txt");
  std::ofstream(path) << r.out;
  const auto est = invoke_json({"estimate", "--hist", path.string()});
  CHECK(est["s_hat"].get<double>() > 0.0);

  const auto j = invoke_json({"simulate", "--model", "power-law", "--classes", "2000", "--alpha", "1",
                              "--seed", "5", "--out", scratch("pl.txt").string()});
  conforms(j, "simulate");
  CHECK(j["classes"] == 2000);
  CHECK(j["n0_true"].get<std::uint64_t>() + j["distinct"].get<std::uint64_t>() == 2000);
  const auto from_file = invoke_json({"estimate", "--hist", scratch("pl.txt").string()});
  CHECK(from_file["distinct"] == j["distinct"]);
}

TEST_CASE("simulate reads a JSON model spec") {
  const auto spec = scratch("spec.json");
  std::ofstream(spec) << R"({"model": "mixture", "lambdas": [2.0], "weights": [1.0], "classes": 300})";
  const auto j = invoke_json({"simulate", "--spec", spec.string(), "--seed", "1", "--out",
                              scratch("spec_out.txt").string()});
  CHECK(j["model"] == "mixture");
  CHECK(j["classes"] == 300);
}

TEST_CASE("scrna simulation writes triplets and truth") {
  const auto prefix = scratch("sc").string();
  const auto j = invoke_json({"simulate", "--model", "scrna", "--cells", "20", "--genes", "300",
                              "--seed", "2", "--out", prefix});
  conforms(j, "simulate");
  std::ifstream truth(prefix + ".truth.tsv");
  std::string line;
  int lines = 0;
  while (std::getline(truth, line))
    ++lines;
  CHECK(lines == 21);
  CHECK(std::filesystem::file_size(prefix + ".triplets.tsv") > 0);
  CHECK(invoke({"simulate", "--model", "scrna", "--seed", "2"}).status == 1);
}

TEST_CASE("bench summaries") {
  const auto r = invoke_json({"bench", "two-comp", "--case", "2", "--scale", "3000", "--reps", "6",
                              "--bootstrap", "10", "--seed", "8"});
  conforms(r, "bench");
  CHECK(r["rows"].size() == 6);
  for (const char *name : {"chao", "quadrature", "bagged"}) {
    REQUIRE(r["summary"].contains(name));
    CHECK(r["summary"][name].contains("median"));
    CHECK(r["summary"][name].contains("rmse"));
  }
  const auto pl = invoke_json({"bench", "power-law", "--scale", "2000", "--reps", "3", "--seed", "8"});
  conforms(pl, "bench");

  const auto sc = invoke_json({"bench", "scrna", "--cells", "15", "--genes", "400", "--seed", "8"});
  conforms(sc, "bench_scrna");
  CHECK(sc["rows"].size() == 15);
}
