#include "tnum/sweep.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

namespace tnum::cli {

using namespace tnum::config;

namespace {

std::vector<json> parameter_values(const json& p, const std::string& where) {
  std::vector<json> values;
  if (p.contains("values")) {
    check_keys(p, {"path", "values"}, where);
    if (!p["values"].is_array() || p["values"].empty()) throw ValidationError(where + ".values: expected a nonempty array");
    for (const auto& v : p["values"]) values.push_back(v);
  } else if (p.contains("range")) {
    check_keys(p, {"path", "range"}, where);
    const json& r = p["range"];
    check_keys(r, {"start", "stop", "step"}, where + ".range");
    const double start = get_double(require(r, "start", where + ".range"), where + ".range.start");
    const double stop = get_double(require(r, "stop", where + ".range"), where + ".range.stop");
    const double step = get_double(require(r, "step", where + ".range"), where + ".range.step");
    if (!(step > 0.0) || stop < start) throw ValidationError(where + ".range: need step > 0 and stop >= start");
    const double span = (stop - start) / step;
    if (span > 1e7) throw ValidationError(where + ".range: too many values");
    // Inclusive of stop up to rounding; each value computed directly from i.
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) values.emplace_back(start + static_cast<double>(i) * step);
  } else if (p.contains("linspace")) {
    check_keys(p, {"path", "linspace"}, where);
    const json& r = p["linspace"];
    check_keys(r, {"start", "stop", "count"}, where + ".linspace");
    const double start = get_double(require(r, "start", where + ".linspace"), where + ".linspace.start");
    const double stop = get_double(require(r, "stop", where + ".linspace"), where + ".linspace.stop");
    const std::size_t count = get_count(require(r, "count", where + ".linspace"), where + ".linspace.count");
    if (count == 0 || count > 10'000'000) throw ValidationError(where + ".linspace.count out of range");
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      values.emplace_back(start + t * (stop - start));
    }
  } else {
    throw ValidationError(where + ": needs one of values, range, linspace");
  }
  return values;
}

json::json_pointer pointer_for(const std::string& dotted) {
  std::string ptr;
  std::string part;
  std::istringstream is(dotted);
  while (std::getline(is, part, '.')) {
    if (part.empty()) throw ValidationError("sweep path '" + dotted + "' has an empty segment");
    ptr += "/" + part;
  }
  return json::json_pointer(ptr);
}

json row_config(const SweepPlan& plan, std::size_t row, std::uint64_t seed, json& params) {
  json cfg = plan.base;
  cfg["seed"] = seed;
  std::size_t rest = row;
  // Last parameter varies fastest.
  std::vector<std::size_t> idx(plan.parameters.size());
  for (std::size_t k = plan.parameters.size(); k-- > 0;) {
    idx[k] = rest % plan.parameters[k].values.size();
    rest /= plan.parameters[k].values.size();
  }
  params = json::object();
  for (std::size_t k = 0; k < plan.parameters.size(); ++k) {
    const auto& p = plan.parameters[k];
    try {
      cfg[pointer_for(p.path)] = p.values[idx[k]];
    } catch (const json::exception& e) {
      throw ValidationError("sweep path '" + p.path + "': " + e.what());
    }
    params[p.path] = p.values[idx[k]];
  }
  return cfg;
}

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

SweepPlan parse_sweep(const json& body, std::uint64_t seed) {
  check_keys(body, {"command", "seed", "base", "parameters", "options"}, "config");
  SweepPlan plan;
  plan.base = require(body, "base", "config");
  if (!plan.base.is_object()) throw ValidationError("base: expected an object");
  if (!plan.base.contains("command")) throw ValidationError("base: missing required key 'command'");
  if (plan.base["command"] == "sweep") throw ValidationError("base: sweeps cannot be nested");
  if (body.contains("options")) {
    check_keys(body["options"], {"max_rows", "workers"}, "options");
    if (body["options"].contains("max_rows")) plan.max_rows = get_count(body["options"]["max_rows"], "options.max_rows");
    if (body["options"].contains("workers")) plan.workers = get_count(body["options"]["workers"], "options.workers");
  }
  const json& params = require(body, "parameters", "config");
  if (!params.is_array() || params.empty()) throw ValidationError("parameters: expected a nonempty array");
  plan.rows = 1;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::string where = "parameters[" + std::to_string(i) + "]";
    SweepParameter p;
    p.path = get_string(require(params[i], "path", where), where + ".path");
    pointer_for(p.path);
    p.values = parameter_values(params[i], where);
    if (plan.rows > plan.max_rows / p.values.size() + 1) plan.rows = plan.max_rows + 1;
    else plan.rows *= p.values.size();
    plan.parameters.push_back(std::move(p));
  }
  if (plan.rows > plan.max_rows) {
    throw ValidationError("sweep has more than " + std::to_string(plan.max_rows) + " rows (options.max_rows)");
  }
  json first;
  load_config(row_config(plan, 0, seed, first), "");
  return plan;
}

std::vector<std::string> sweep_columns(const SweepPlan& plan) {
  std::vector<std::string> cols{"row"};
  for (const auto& p : plan.parameters) cols.push_back(p.path);
  for (const char* c : {"value", "error_bound", "exact", "verdict", "iterations", "status"}) cols.emplace_back(c);
  return cols;
}

json run_sweep(const SweepPlan& plan, std::uint64_t seed, std::vector<std::string>& csv_lines) {
  std::vector<json> rows(plan.rows);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < plan.rows; i = next++) {
      json params;
      json row = {{"row", i}};
      try {
        const RunConfig cfg = load_config(row_config(plan, i, seed, params), "");
        const Report rep = run(cfg);
        row["params"] = params;
        if (rep.payload.contains("error")) {
          row["status"] = rep.payload["error"]["kind"];
          row["message"] = rep.payload["error"]["message"];
        } else {
          const json& primary = rep.payload["results"]["primary"];
          row["value"] = primary.value("value", json(nullptr));
          row["error_bound"] = primary.contains("error_bound") ? primary["error_bound"] : json(nullptr);
          row["exact"] = primary.value("exact", false);
          row["verdict"] = primary.value("verdict", "");
          row["iterations"] = primary.value("iterations", json(0));
          row["status"] = rep.exit_code == kExitSuccess ? "ok" : (rep.exit_code == kExitNotConverged ? "not-converged" : "failed");
        }
      } catch (const Error& e) {
        row["params"] = params;
        row["status"] = to_string(e.kind());
        row["message"] = e.what();
      }
      rows[i] = std::move(row);
    }
  };
  std::size_t n = plan.workers ? plan.workers : std::max(1u, std::thread::hardware_concurrency());
  n = std::min(n, plan.rows);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const std::vector<std::string> cols = sweep_columns(plan);
  std::string header;
  for (std::size_t c = 0; c < cols.size(); ++c) header += (c ? "," : "") + cols[c];
  csv_lines.clear();
  csv_lines.push_back(header);
  std::size_t ok = 0;
  for (const auto& r : rows) {
    std::string line = std::to_string(r["row"].get<std::size_t>());
    for (const auto& p : plan.parameters) line += "," + cell(r["params"].value(p.path, json(nullptr)));
    for (const char* c : {"value", "error_bound", "exact", "verdict", "iterations", "status"}) {
      line += "," + cell(r.value(c, json(nullptr)));
    }
    csv_lines.push_back(std::move(line));
    if (r["status"] == "ok") ++ok;
  }
  json out;
  out["rows"] = rows;
  out["row_count"] = plan.rows;
  out["ok_rows"] = ok;
  out["columns"] = cols;
  out["primary"] = {{"value", ok}, {"exact", true}, {"verdict", ok == plan.rows ? "all-ok" : "some-failed"}, {"iterations", plan.rows}};
  return out;
}

}  // namespace tnum::cli
