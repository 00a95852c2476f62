#include <doctest.h>

#include <cmath>
#include <fstream>

#include "oracles.hpp"
#include "tnum/run.hpp"
#include "tnum/sweep.hpp"

using namespace tnum;
using namespace tnum::cli;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(TNUM_CONFIG_DIR) + "/" + name);
  REQUIRE(in.good());
  return json::parse(in);
}

json rot_local(double omega, double k = 0.0) {
  json j = {{"command", "rot-local"}, {"class", {{"entries", {1}}}}, {"point", {0.2}}};
  j["map"] = k == 0.0 ? json{{"family", "rotation"}, {"v", {omega}}}
                      : json{{"family", "arnold"}, {"omega", omega}, {"K", k}};
  return j;
}

}  // namespace

TEST_CASE("every shipped config validates and runs successfully") {
  for (const char* name : {"rot_local_rotation.json", "rot_mean_skew.json", "rot_homovec_linear.json",
                           "gk_eval.json", "gk_check.json", "split_check.json", "seminorm_arnold.json",
                           "distortion_cert.json", "word_norm.json", "seifert.json"}) {
    INFO(name);
    const Report r = run(load_config(load(name), ""));
    CHECK(r.exit_code == kExitSuccess);
    CHECK_FALSE(r.payload.contains("error"));
  }
}

TEST_CASE("unknown keys are rejected before anything runs") {
  json j = rot_local(0.3);
  j["colour"] = "blue";
  CHECK_THROWS_AS(load_config(j, ""), ValidationError);
  json k = rot_local(0.3);
  k["map"]["speed"] = 2;
  CHECK_THROWS_AS(load_config(k, ""), ValidationError);
  json o = rot_local(0.3);
  o["options"] = {{"grid", 8}};
  CHECK_THROWS_AS(load_config(o, ""), ValidationError);
  Overrides grid;
  grid.grid = 8;
  CHECK_THROWS_AS(load_config(rot_local(0.3), "", grid), ValidationError);
}

TEST_CASE("command given on the command line must match the config") {
  CHECK_THROWS_AS(load_config(rot_local(0.3), "rot-mean"), ValidationError);
  CHECK(load_config(rot_local(0.3), "rot-local").command == "rot-local");
  CHECK_THROWS_AS(load_config(json::object(), ""), ValidationError);
}

TEST_CASE("overrides replace config values and enter the digest") {
  Overrides ov;
  ov.seed = 99;
  ov.tolerance = 1e-6;
  const RunConfig c = load_config(rot_local(0.3), "", ov);
  CHECK(c.seed == 99);
  CHECK(c.body["options"]["tolerance"] == 1e-6);
  CHECK(inputs_digest(c.body) != inputs_digest(load_config(rot_local(0.3), "").body));
}

TEST_CASE("rot-local on the 0.3 rotation reports 0.3 with a rounding-level error bound") {
  const Report r = run(load_config(rot_local(0.3), ""));
  CHECK(r.payload["results"]["rot"]["value"].get<double>() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(r.payload["results"]["rot"]["error_bound"].get<double>() <= 1e-15);
  const Report half = run(load_config(rot_local(0.5), ""));
  CHECK(half.payload["results"]["rot"]["exact"] == true);
  CHECK(half.payload["results"]["rot"]["rational"] == "1/2");
}

TEST_CASE("exit codes distinguish the failure classes") {
  SUBCASE("not converged still yields a report") {
    json j = rot_local((std::sqrt(5.0) - 1.0) / 2.0, 0.5);
    j["options"] = {{"max_iterations", 64}, {"tolerance", 1e-15}};
    const Report r = run(load_config(j, ""));
    CHECK(r.exit_code == kExitNotConverged);
    CHECK(r.payload["results"]["iterations"] == 64);
    CHECK(r.payload["results"]["previous_window"].is_number());
    CHECK(r.payload["results"]["last_window"].is_number());
  }
  SUBCASE("nonzero Euler number") {
    json j = {{"command", "seifert-class"}, {"seifert", {{"genus", 1}, {"pairs", {{3, 1}}}}}};
    const Report r = run(load_config(j, ""));
    CHECK(r.exit_code == kExitPrecondition);
    CHECK(r.payload["error"]["message"].get<std::string>().find("-1/3") != std::string::npos);
  }
  SUBCASE("class not preserved is a precondition failure at load time") {
    json j = {{"command", "seminorm"}, {"class", {{"entries", {0, 1}}}}, {"map", {{"family", "shear"}, {"k", 1}}}};
    CHECK_THROWS_AS(load_config(j, ""), PreconditionError);
  }
  SUBCASE("non-convergence inside the certificate") {
    json j = load("distortion_cert.json");
    j["map"] = {{"family", "arnold"}, {"omega", 0.3}, {"K", 0.5}};
    j["options"] = {{"max_iterations", 16}, {"tolerance", 1e-15}};
    const Report r = run(load_config(j, ""));
    CHECK(r.exit_code == kExitNotConverged);
    CHECK(r.payload["error"]["kind"] == "not-converged");
  }
  CHECK(exit_code_for(ErrorKind::Validation) == 2);
  CHECK(exit_code_for(ErrorKind::NotConverged) == 3);
  CHECK(exit_code_for(ErrorKind::Precondition) == 4);
  CHECK(exit_code_for(ErrorKind::Internal) == 5);
}

TEST_CASE("same seed, same payload bytes") {
  for (const char* name : {"gk_check.json", "gk_eval.json", "split_check.json", "word_norm.json"}) {
    INFO(name);
    const RunConfig c = load_config(load(name), "");
    CHECK(payload_text(run(c)) == payload_text(run(c)));
  }
  Overrides other;
  other.seed = 7;
  const RunConfig a = load_config(load("gk_eval.json"), "");
  const RunConfig b = load_config(load("gk_eval.json"), "", other);
  CHECK(payload_text(run(a)) != payload_text(run(b)));
}

TEST_CASE("gk-check residual table stays below 1e-12") {
  const Report r = run(load_config(load("gk_check.json"), ""));
  CHECK(r.payload["results"]["residuals"].size() == 100);
  CHECK(r.payload["results"]["max_coboundary"].get<double>() <= 1e-12);
  CHECK(r.payload["results"]["pass"] == true);
}

TEST_CASE("every numeric headline carries an error bound or an exact marker") {
  for (const char* name : {"rot_local_rotation.json", "rot_mean_skew.json", "gk_eval.json", "seminorm_arnold.json",
                           "seifert.json", "word_norm.json"}) {
    INFO(name);
    const json p = run(load_config(load(name), "")).payload["results"]["primary"];
    CHECK((p.contains("error_bound") || p.contains("exact")));
  }
}

TEST_CASE("renderers") {
  const Report r = run(load_config(load("seifert.json"), ""));
  const std::string table = render(r, Format::Table);
  CHECK(table.find("phi.h") != std::string::npos);
  const json record = json::parse(render(r, Format::Record));
  CHECK(record.contains("provenance"));
  CHECK(record["provenance"]["seed"] == 1);
  CHECK(render(r, Format::Csv).rfind("key,value\n", 0) == 0);
  CHECK_THROWS_AS(parse_format("yaml"), ValidationError);
}

TEST_CASE("single-point sweep reproduces run") {
  json s = {{"command", "sweep"},
            {"base", rot_local(0.3)},
            {"parameters", {{{"path", "map.v.0"}, {"values", {0.25}}}}}};
  const Report sweep = run(load_config(s, ""));
  const Report direct = run(load_config(rot_local(0.25), ""));
  REQUIRE(sweep.payload["results"]["rows"].size() == 1);
  CHECK(sweep.payload["results"]["rows"][0]["value"] == direct.payload["results"]["primary"]["value"]);
  CHECK(sweep.csv_lines.size() == 2);
  CHECK(sweep.csv_lines[0] == "row,map.v.0,value,error_bound,exact,verdict,iterations,status");
}

TEST_CASE("sweep cap and malformed sweeps") {
  json s = {{"command", "sweep"},
            {"base", rot_local(0.3)},
            {"parameters",
             {{{"path", "map.v.0"}, {"linspace", {{"start", 0}, {"stop", 1}, {"count", 1000}}}},
              {{"path", "point.0"}, {"linspace", {{"start", 0}, {"stop", 1}, {"count", 1000}}}}}}};
  CHECK_THROWS_AS(load_config(s, ""), ValidationError);
  s["options"] = {{"max_rows", 2000000}};
  CHECK_NOTHROW(load_config(s, ""));
  json nested = {{"command", "sweep"}, {"base", {{"command", "sweep"}}}, {"parameters", json::array()}};
  CHECK_THROWS_AS(load_config(nested, ""), ValidationError);
}

TEST_CASE("Arnold sweep: rotation number is nondecreasing in omega and matches brute iteration") {
  const Report r = run(load_config(load("sweep_arnold.json"), ""));
  const json& rows = r.payload["results"]["rows"];
  REQUIRE(rows.size() == 101);
  double previous = -1.0, previous_err = 0.0;
  for (const auto& row : rows) {
    const double v = row["value"].get<double>();
    const double err = row["error_bound"].is_number() ? row["error_bound"].get<double>() : 0.0;
    CHECK(v >= previous - previous_err - err - 1e-9);
    previous = v;
    previous_err = err;
  }
  for (std::size_t i : {0u, 13u, 37u, 50u, 71u, 100u}) {
    const double omega = rows[i]["params"]["map.omega"].get<double>();
    const double brute = oracle::brute_rot({1.0}, [&](const std::vector<double>& x) {
      return std::vector<double>{oracle::arnold(x[0], omega, 0.5)};
    }, 0.0, {0.0}, 100000);
    INFO("omega = " << omega);
    CHECK(std::abs(brute - rows[i]["value"].get<double>()) < 1e-4);
  }
  // Worker count does not change the output.
  json serial = load("sweep_arnold.json");
  serial["options"] = {{"workers", 1}};
  const Report r1 = run(load_config(serial, ""));
  CHECK(r1.csv_lines == r.csv_lines);
}

TEST_CASE("seminorm sweep over doubling grids is nondecreasing") {
  json s = {{"command", "sweep"},
            {"base", load("seminorm_arnold.json")},
            {"parameters", {{{"path", "options.grid"}, {"values", {4, 8, 16, 32, 64, 128, 256, 512}}}}}};
  const Report r = run(load_config(s, ""));
  const json& rows = r.payload["results"]["rows"];
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i]["value"].get<double>() >= rows[i - 1]["value"].get<double>());
}
