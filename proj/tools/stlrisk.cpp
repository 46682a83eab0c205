// stlrisk command-line front end. Links only the C API.

#include <openssl/evp.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stlrisk/stlrisk.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kOther = 1, kParse = 2, kHorizon = 3, kRiskParam = 4, kConfig = 5 };

int exit_code(stlrisk_status s) {
  switch (s) {
    case STLRISK_OK: return kOk;
    case STLRISK_E_SYNTAX:
    case STLRISK_E_INTERVAL: return kParse;
    case STLRISK_E_INSUFFICIENT_HORIZON: return kHorizon;
    case STLRISK_E_PARAM:
    case STLRISK_E_BOUNDS:
    case STLRISK_E_MONOTONICITY:
    case STLRISK_E_INFINITE_ROBUSTNESS: return kRiskParam;
    case STLRISK_E_CONFIG: return kConfig;
    default: return kOther;
  }
}

// Carries a failed C API status up to main.
struct Failure {
  stlrisk_status status;
};

void check(stlrisk_status s) {
  if (s == STLRISK_OK) return;
  std::cerr << "error: " << stlrisk_status_name(s) << ": " << stlrisk_last_error() << "\n";
  throw Failure{s};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using FormulaPtr = std::unique_ptr<stlrisk_formula, Deleter<stlrisk_formula, stlrisk_formula_free>>;
using PredicatesPtr = std::unique_ptr<stlrisk_predicates, Deleter<stlrisk_predicates, stlrisk_predicates_free>>;
using TracePtr = std::unique_ptr<stlrisk_trace, Deleter<stlrisk_trace, stlrisk_trace_free>>;
using EnsemblePtr = std::unique_ptr<stlrisk_ensemble, Deleter<stlrisk_ensemble, stlrisk_ensemble_free>>;
using ConfigPtr =
    std::unique_ptr<stlrisk_casestudy_config, Deleter<stlrisk_casestudy_config, stlrisk_casestudy_config_free>>;
using TablePtr =
    std::unique_ptr<stlrisk_casestudy_table, Deleter<stlrisk_casestudy_table, stlrisk_casestudy_table_free>>;

std::string take(char* s) {
  std::string out(s);
  stlrisk_string_free(s);
  return out;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string real(double v) {
  char* s = nullptr;
  check(stlrisk_format_real(v, &s));
  return take(s);
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr)) {
    throw std::runtime_error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << content)) throw std::runtime_error("cannot write " + p.string());
}

unsigned env_threads() {
  const char* v = std::getenv("STLRISK_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const unsigned long n = std::strtoul(v, &end, 10);
  if (*end != '\0') {
    std::cerr << "warning: ignoring STLRISK_THREADS=" << v << "\n";
    return 0;
  }
  return static_cast<unsigned>(n);
}

struct Manifest {
  std::string command;
  json params = json::object();
  json inputs = json::object();
  json outputs = json::object();
  std::optional<std::uint64_t> seed;

  void input(const std::string& path) { inputs[path] = sha256_hex(read_file(path)); }

  std::string dump() const {
    json doc{{"tool", "stlrisk"}, {"version", stlrisk_version()}, {"command", command},
             {"params", params},  {"inputs", inputs},                {"outputs", outputs}};
    doc["seed"] = seed ? json(*seed) : json(nullptr);
    return doc.dump(2) + "\n";
  }
};

FormulaPtr parse_formula(const std::string& text) {
  stlrisk_formula* f = nullptr;
  const auto s = stlrisk_formula_parse(text.c_str(), &f);
  if (s != STLRISK_OK) {
    std::cerr << "error: " << stlrisk_status_name(s) << ": " << stlrisk_last_error() << "\n";
    std::size_t start = 0, end = 0;
    if (stlrisk_last_error_span(&start, &end)) {
      if (end <= start) end = start + 1;
      std::cerr << "  " << text << "\n  " << std::string(start, ' ')
                << std::string(std::min(end, text.size() + 1) - start, '^') << "\n";
    }
    throw Failure{s};
  }
  return FormulaPtr(f);
}

PredicatesPtr load_predicates(const std::string& path) {
  stlrisk_predicates* p = nullptr;
  check(stlrisk_predicates_load(path.c_str(), &p));
  return PredicatesPtr(p);
}

std::string depth_token(std::uint64_t d) { return d == UINT64_MAX ? "inf" : std::to_string(d); }

struct CommonOptions {
  std::string manifest;
};

int cmd_check(const std::string& text, const CommonOptions& common) {
  const auto f = parse_formula(text);
  char* s = nullptr;
  check(stlrisk_formula_format(f.get(), &s));
  const std::string canonical = take(s);
  std::uint64_t future = 0, past = 0;
  check(stlrisk_formula_horizon(f.get(), &future, &past));
  check(stlrisk_formula_predicate_names(f.get(), &s));
  const auto names = split_lines(take(s));

  std::ostringstream out;
  out << canonical << "\n";
  out << "horizon: future=" << depth_token(future) << " past=" << depth_token(past) << "\n";
  out << "predicates:";
  for (const auto& n : names) out << " " << n;
  out << "\n";
  std::cout << out.str();

  if (!common.manifest.empty()) {
    Manifest m;
    m.command = "check";
    m.params["formula"] = text;
    m.outputs["stdout"] = sha256_hex(out.str());
    write_file(common.manifest, m.dump());
  }
  return kOk;
}

struct MonitorOptions {
  std::string formula, predicates, trace, mode = "robust";
  std::size_t time = 0;
};

int cmd_monitor(const MonitorOptions& o, const CommonOptions& common) {
  const auto f = parse_formula(o.formula);
  const auto p = load_predicates(o.predicates);
  stlrisk_trace* raw = nullptr;
  check(stlrisk_trace_load(o.trace.c_str(), &raw));
  const TracePtr x(raw);

  std::string result;
  if (o.mode == "boolean") {
    int v = 0;
    check(stlrisk_eval_boolean(f.get(), p.get(), x.get(), o.time, &v));
    result = v ? "true" : "false";
  } else {
    double v = 0;
    check(stlrisk_eval_robust(f.get(), p.get(), x.get(), o.time, &v));
    result = real(v);
  }
  const std::string out = result + "\n";
  std::cout << out;

  if (!common.manifest.empty()) {
    Manifest m;
    m.command = "monitor";
    m.params = {{"formula", o.formula}, {"predicates", o.predicates}, {"trace", o.trace},
                {"time", o.time},       {"mode", o.mode}};
    m.input(o.predicates);
    m.input(o.trace);
    m.outputs["stdout"] = sha256_hex(out);
    write_file(common.manifest, m.dump());
  }
  return kOk;
}

struct RiskOptions {
  std::string formula, predicates, ensemble, measure = "var";
  std::size_t time = 0;
  double beta = 0.95, delta = 0.05, lambda = 1.0;
  std::vector<double> bounds;
};

int cmd_risk(const RiskOptions& o, const CommonOptions& common) {
  const auto f = parse_formula(o.formula);
  const auto p = load_predicates(o.predicates);
  stlrisk_ensemble* raw = nullptr;
  check(stlrisk_ensemble_load(o.ensemble.c_str(), &raw));
  const EnsemblePtr e(raw);

  stlrisk_measure measure{};
  check(stlrisk_measure_parse(o.measure.c_str(), &measure));
  stlrisk_risk_params params = stlrisk_risk_params_default();
  params.beta = o.beta;
  params.delta = o.delta;
  params.lambda = o.lambda;
  if (!o.bounds.empty()) {
    params.has_bounds = 1;
    params.bound_lo = o.bounds[0];
    params.bound_hi = o.bounds[1];
  }
  stlrisk_risk_result result{};
  check(stlrisk_risk_of_formula(e.get(), f.get(), p.get(), o.time, measure, &params, env_threads(), &result));
  char* s = nullptr;
  check(stlrisk_risk_result_json(&result, &s));
  const std::string out = take(s) + "\n";
  std::cout << out;

  if (!common.manifest.empty()) {
    Manifest m;
    m.command = "risk";
    m.params = {{"formula", o.formula}, {"predicates", o.predicates}, {"ensemble", o.ensemble},
                {"time", o.time},       {"measure", o.measure},       {"beta", o.beta},
                {"delta", o.delta},     {"lambda", o.lambda}};
    m.params["bounds"] = o.bounds.empty() ? json(nullptr) : json(o.bounds);
    m.input(o.predicates);
    check(stlrisk_ensemble_files(e.get(), &s));
    if (!fs::is_directory(o.ensemble)) m.input(o.ensemble);
    for (const auto& file : split_lines(take(s))) m.input(file);
    std::uint64_t seed = 0;
    if (stlrisk_ensemble_seed(e.get(), &seed)) m.seed = seed;
    m.outputs["stdout"] = sha256_hex(out);
    write_file(common.manifest, m.dump());
  }
  return kOk;
}

struct CaseStudyOptions {
  std::string config, out = "casestudy";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
};

int cmd_casestudy(const CaseStudyOptions& o) {
  stlrisk_casestudy_config* raw = nullptr;
  if (!o.config.empty()) {
    check(stlrisk_casestudy_config_load(o.config.c_str(), &raw));
  } else {
    check(stlrisk_casestudy_config_default(&raw));
  }
  const ConfigPtr config(raw);
  if (o.seed) check(stlrisk_casestudy_config_set_seed(config.get(), *o.seed));
  if (o.n) check(stlrisk_casestudy_config_set_n(config.get(), *o.n));
  check(stlrisk_casestudy_config_set_threads(config.get(), env_threads()));

  stlrisk_casestudy_table* table_raw = nullptr;
  check(stlrisk_casestudy_run(config.get(), &table_raw));
  const TablePtr table(table_raw);

  char* s = nullptr;
  check(stlrisk_casestudy_table_csv(table.get(), &s));
  const std::string csv = take(s);
  check(stlrisk_casestudy_table_json(table.get(), config.get(), &s));
  const std::string table_json = take(s) + "\n";
  check(stlrisk_casestudy_config_json(config.get(), &s));
  const json resolved = json::parse(take(s));

  const fs::path dir = o.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "table.csv", csv);
  write_file(dir / "table.json", table_json);

  Manifest m;
    m.command = "casestudy";
  m.params = resolved;
  if (!o.config.empty()) m.input(o.config);
  m.seed = resolved.at("seed").get<std::uint64_t>();
  m.outputs["table.csv"] = sha256_hex(csv);
  m.outputs["table.json"] = sha256_hex(table_json);
  write_file(dir / "manifest.json", m.dump());

  std::cout << csv;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STL monitoring and sample-based risk estimation"};
  app.set_version_flag("--version", std::string(stlrisk_version()));
  app.require_subcommand(1);

  CommonOptions common;

  std::string check_formula;
  auto* check_cmd = app.add_subcommand("check", "Parse a formula and print its canonical form and horizon");
  check_cmd->add_option("--formula", check_formula, "Formula text")->required();
  check_cmd->add_option("--manifest", common.manifest, "Write a run manifest to FILE");

  MonitorOptions mon;
  auto* monitor_cmd = app.add_subcommand("monitor", "Evaluate a formula on one trace");
  monitor_cmd->add_option("--formula", mon.formula, "Formula text")->required();
  monitor_cmd->add_option("--predicates", mon.predicates, "Predicate table (JSON)")->required();
  monitor_cmd->add_option("--trace", mon.trace, "Trace CSV")->required();
  monitor_cmd->add_option("--time", mon.time, "Evaluation time")->required();
  monitor_cmd->add_option("--mode", mon.mode, "boolean or robust")
      ->check(CLI::IsMember({"boolean", "robust"}))
      ->capture_default_str();
  monitor_cmd->add_option("--manifest", common.manifest, "Write a run manifest to FILE");

  RiskOptions risk;
  auto* risk_cmd = app.add_subcommand("risk", "Estimate the risk of violating a formula over an ensemble");
  risk_cmd->add_option("--formula", risk.formula, "Formula text")->required();
  risk_cmd->add_option("--predicates", risk.predicates, "Predicate table (JSON)")->required();
  risk_cmd->add_option("--ensemble", risk.ensemble, "Directory of trace CSVs or JSON manifest")->required();
  risk_cmd->add_option("--time", risk.time, "Evaluation time")->required();
  risk_cmd->add_option("--measure", risk.measure, "var, cvar, expected, meanvar or worst")->capture_default_str();
  risk_cmd->add_option("--beta", risk.beta, "Risk level")->capture_default_str();
  risk_cmd->add_option("--delta", risk.delta, "Confidence parameter")->capture_default_str();
  risk_cmd->add_option("--lambda", risk.lambda, "Mean-variance weight")->capture_default_str();
  risk_cmd->add_option("--bounds", risk.bounds, "Cost bounds A,B")->delimiter(',')->expected(2);
  risk_cmd->add_option("--manifest", common.manifest, "Write a run manifest to FILE");

  CaseStudyOptions cs;
  auto* cs_cmd = app.add_subcommand("casestudy", "Run the bundled navigation case study");
  auto* config_opt = cs_cmd->add_option("--config", cs.config, "Case-study config (JSON)");
  cs_cmd->add_option("--seed", cs.seed, "RNG seed")->excludes(config_opt);
  cs_cmd->add_option("--n", cs.n, "Realizations per trajectory")->excludes(config_opt);
  cs_cmd->add_option("--out", cs.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kOther;
  }

  try {
    if (*check_cmd) return cmd_check(check_formula, common);
    if (*monitor_cmd) return cmd_monitor(mon, common);
    if (*risk_cmd) return cmd_risk(risk, common);
    if (*cs_cmd) return cmd_casestudy(cs);
  } catch (const Failure& f) {
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
