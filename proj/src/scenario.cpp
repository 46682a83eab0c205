#include "stlrisk/scenario.hpp"

#include <cmath>
#include <fstream>

#include "stlrisk/error.hpp"
#include "stlrisk/numfmt.hpp"
#include "stlrisk/random.hpp"
#include "stlrisk/risk.hpp"
#include "stlrisk/semantics.hpp"

namespace stlrisk {

namespace {

constexpr std::size_t kPosC = 6;
constexpr std::size_t kPosD = 8;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::Config, what); }

bool finite_point(const Point2& p) { return std::isfinite(p[0]) && std::isfinite(p[1]); }

void validate_region(const GaussianRegion& g, const char* name) {
  if (!finite_point(g.mean)) config_error(std::string("region ") + name + ": mean must be finite");
  if (!(g.variance > 0.0) || !std::isfinite(g.variance)) {
    config_error(std::string("region ") + name + ": variance must be positive and finite");
  }
}

Point2 draw(const Philox4x32& gen, const GaussianRegion& g, std::size_t i, std::size_t j, std::uint32_t stream) {
  const auto [u, v] = normal_pair(gen, {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32),
                                        static_cast<std::uint32_t>(j), stream});
  const double sd = std::sqrt(g.variance);
  return {g.mean[0] + sd * u, g.mean[1] + sd * v};
}

Waypoints parse_waypoints(const nlohmann::json& j, std::size_t index) {
  const std::string where = "trajectory " + std::to_string(index + 1);
  if (!j.is_array() || j.size() != 4) config_error(where + ": expected 4 waypoints [x, y]");
  Waypoints w{};
  for (std::size_t t = 0; t < 4; ++t) {
    const auto& p = j[t];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      config_error(where + ", waypoint " + std::to_string(t) + ": expected [x, y]");
    }
    w[t] = {p[0].get<double>(), p[1].get<double>()};
  }
  return w;
}

GaussianRegion parse_region(const nlohmann::json& j, const std::string& name) {
  const std::string where = "region " + name;
  if (!j.is_object() || !j.contains("mean") || !j.contains("variance")) {
    config_error(where + ": expected {\"mean\": [x, y], \"variance\": v}");
  }
  const auto& m = j["mean"];
  if (!m.is_array() || m.size() != 2 || !m[0].is_number() || !m[1].is_number()) {
    config_error(where + ": mean must be [x, y]");
  }
  if (!j["variance"].is_number()) config_error(where + ": variance must be a number");
  return {{m[0].get<double>(), m[1].get<double>()}, j["variance"].get<double>()};
}

std::string ext_token(ExtReal v) { return format_real(v.value()); }

}  // namespace

const std::vector<Waypoints>& default_trajectories() {
  static const std::vector<Waypoints> kDefaults{
      {{{5.45, 4.0}, {3.75, 5.25}, {7.0, 1.55}, {6.0, 3.45}}},
      {{{4.0, 8.0}, {3.75, 5.25}, {7.0, 1.55}, {6.0, 3.29}}},
      {{{4.0, 8.0}, {3.75, 5.25}, {7.0, 1.55}, {6.0, 2.05}}},
      {{{3.78, 3.0}, {3.75, 5.25}, {7.0, 1.55}, {9.0, 0.0}}},
      {{{3.70, 3.0}, {3.75, 5.25}, {7.0, 1.55}, {9.0, 0.0}}},
      {{{4.0, 8.0}, {3.75, 5.25}, {7.0, 1.55}, {9.0, 0.0}}},
  };
  return kDefaults;
}

void validate(const CaseStudyConfig& config) {
  if (config.n == 0) config_error("n must be at least 1");
  if (config.betas.empty()) config_error("betas must not be empty");
  for (double b : config.betas) {
    if (!(b > 0.0 && b < 1.0)) config_error("beta " + format_real(b) + " outside (0,1)");
  }
  if (!(config.delta > 0.0 && config.delta < 1.0)) config_error("delta " + format_real(config.delta) + " outside (0,1)");
  if (config.trajectories.empty()) config_error("at least one trajectory is required");
  for (std::size_t j = 0; j < config.trajectories.size(); ++j) {
    for (const auto& p : config.trajectories[j]) {
      if (!finite_point(p)) config_error("trajectory " + std::to_string(j + 1) + " has a non-finite waypoint");
    }
  }
  validate_region(config.c, "c");
  validate_region(config.d, "d");
}

CaseStudyConfig parse_case_study_config(const nlohmann::json& doc) {
  if (!doc.is_object()) config_error("case-study config must be a JSON object");
  CaseStudyConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") {
      if (!value.is_number_unsigned()) config_error("seed must be a non-negative integer");
      config.seed = value.get<std::uint64_t>();
    } else if (key == "n") {
      if (!value.is_number_unsigned()) config_error("n must be a positive integer");
      config.n = value.get<std::size_t>();
    } else if (key == "betas") {
      if (!value.is_array()) config_error("betas must be an array of numbers");
      config.betas.clear();
      for (const auto& b : value) {
        if (!b.is_number()) config_error("betas must be an array of numbers");
        config.betas.push_back(b.get<double>());
      }
    } else if (key == "delta") {
      if (!value.is_number()) config_error("delta must be a number");
      config.delta = value.get<double>();
    } else if (key == "variance") {
      if (!value.is_number()) config_error("variance must be a number");
      config.c.variance = config.d.variance = value.get<double>();
    } else if (key == "c" || key == "d") {
      (key == "c" ? config.c : config.d) = parse_region(value, key);
    } else if (key == "trajectories") {
      if (value.is_string()) {
        if (value.get<std::string>() != "default") config_error("trajectories must be \"default\" or a list");
        config.trajectories = default_trajectories();
      } else if (value.is_array()) {
        config.trajectories.clear();
        for (std::size_t j = 0; j < value.size(); ++j) config.trajectories.push_back(parse_waypoints(value[j], j));
      } else {
        config_error("trajectories must be \"default\" or a list");
      }
    } else {
      config_error("unknown config key '" + key + "'");
    }
  }
  validate(config);
  return config;
}

CaseStudyConfig load_case_study_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    config_error(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_case_study_config(doc);
}

nlohmann::json to_json(const CaseStudyConfig& config) {
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& w : config.trajectories) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : w) pts.push_back({p[0], p[1]});
    traj.push_back(pts);
  }
  return {{"seed", config.seed},
          {"n", config.n},
          {"betas", config.betas},
          {"delta", config.delta},
          {"trajectories", traj},
          {"c", {{"mean", config.c.mean}, {"variance", config.c.variance}}},
          {"d", {{"mean", config.d.mean}, {"variance", config.d.variance}}}};
}

CaseStudyProblem build_case_study_formula() {
  PredicateTable preds;
  preds.add("inA", PredicateDef::ball({0, 1}, std::vector<double>{kCenterA[0], kCenterA[1]}, 0.5, Norm::Linf));
  preds.add("inB", PredicateDef::ball({0, 1}, std::vector<double>{kCenterB[0], kCenterB[1]}, 0.7, Norm::L2));
  preds.add("inC", PredicateDef::ball({0, 1}, StateSlice{{kPosC, kPosC + 1}}, 0.5, Norm::Linf));
  preds.add("inD", PredicateDef::ball({0, 1}, StateSlice{{kPosD, kPosD + 1}}, 0.7, Norm::L2));

  using F = Formula;
  const F avoid = F::always(F::conjunction(F::negation(F::predicate("inC")), F::negation(F::predicate("inD"))), {0, 3});
  const F deliver = F::eventually(
      F::conjunction(F::predicate("inA"), F::eventually(F::predicate("inB"), {0, 1})), {1, 2});
  return {F::conjunction(avoid, deliver), std::move(preds)};
}

Trace case_study_trace(const Waypoints& r, const Point2& c, const Point2& d) {
  std::vector<double> values;
  values.reserve(4 * kCaseStudyDim);
  for (const auto& p : r) {
    values.insert(values.end(), {p[0], p[1], kCenterA[0], kCenterA[1], kCenterB[0], kCenterB[1], c[0], c[1], d[0], d[1]});
  }
  return Trace(kCaseStudyDim, std::move(values));
}

Ensemble sample_ensemble(const CaseStudyConfig& config, std::size_t j) {
  validate(config);
  if (j >= config.trajectories.size()) config_error("trajectory index " + std::to_string(j) + " out of range");
  const Philox4x32 gen(config.seed);
  std::vector<Trace> traces;
  traces.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    traces.push_back(case_study_trace(config.trajectories[j], draw(gen, config.c, i, j, 0), draw(gen, config.d, i, j, 1)));
  }
  return Ensemble(std::move(traces), {config.seed, "case study trajectory " + std::to_string(j + 1), {}});
}

ExtReal CaseStudyTable::upper(std::size_t trajectory, std::size_t beta_index) const {
  std::size_t seen = 0;
  for (const auto& row : rows) {
    if (row.trajectory != trajectory) continue;
    if (seen++ == beta_index) return row.var_upper;
  }
  throw Error(ErrorCode::InvalidArgument, "no table entry for trajectory " + std::to_string(trajectory));
}

CaseStudyTable run_case_study(const CaseStudyConfig& config) {
  validate(config);
  const auto problem = build_case_study_formula();
  CaseStudyTable table{{}, dkw_epsilon(config.n, config.delta)};
  for (std::size_t j = 0; j < config.trajectories.size(); ++j) {
    const auto z = eval_robust_ensemble(problem.formula, problem.predicates, sample_ensemble(config, j), 0,
                                        config.threads);
    for (double beta : config.betas) {
      const auto v = var_bounds(z, beta, config.delta);
      table.rows.push_back({j + 1, beta, v.lower, v.point, v.upper});
    }
  }
  return table;
}

std::string table_csv(const CaseStudyTable& table) {
  std::string out = "trajectory,beta,var_lower,var_point,var_upper\n";
  for (const auto& r : table.rows) {
    out += std::to_string(r.trajectory) + "," + format_real(r.beta) + "," + ext_token(r.var_lower) + "," +
           format_real(r.var_point) + "," + ext_token(r.var_upper) + "\n";
  }
  return out;
}

std::string table_json(const CaseStudyTable& table, const CaseStudyConfig& config) {
  auto ext = [](ExtReal v) { return v.is_finite() ? format_real(v.value()) : "\"" + format_real(v.value()) + "\""; };
  std::string out = "{\"seed\": " + std::to_string(config.seed) + ", \"n\": " + std::to_string(config.n) +
                    ", \"delta\": " + format_real(config.delta) + ", \"epsilon\": " + format_real(table.epsilon) +
                    ", \"rows\": [";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    if (i > 0) out += ", ";
    out += "{\"trajectory\": " + std::to_string(r.trajectory) + ", \"beta\": " + format_real(r.beta) +
           ", \"var_lower\": " + ext(r.var_lower) + ", \"var_point\": " + format_real(r.var_point) +
           ", \"var_upper\": " + ext(r.var_upper) + "}";
  }
  out += "]}\n";
  return out;
}

}  // namespace stlrisk
