#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "stlrisk/ext_real.hpp"
#include "stlrisk/formula.hpp"
#include "stlrisk/predicate.hpp"
#include "stlrisk/trace.hpp"

namespace stlrisk {

/// Isotropic Gaussian N(mean, variance * I) over the plane.
struct GaussianRegion {
  std::array<double, 2> mean;
  double variance;
};

using Point2 = std::array<double, 2>;
/// Robot position at t = 0, 1, 2, 3.
using Waypoints = std::array<Point2, 4>;

/// The six bundled reference trajectories. Their deterministic robustness
/// under the nominal centers is -0.15, 0.01, 0.25, 0.25, 0.25, 0.25.
const std::vector<Waypoints>& default_trajectories();

struct CaseStudyConfig {
  std::uint64_t seed = 42;
  std::size_t n = 6500;
  std::vector<double> betas{0.9, 0.925, 0.95, 0.975};
  double delta = 0.001;
  std::vector<Waypoints> trajectories = default_trajectories();
  GaussianRegion c{{2.0, 3.0}, 0.125};
  GaussianRegion d{{6.0, 4.0}, 0.125};
  unsigned threads = 1;
};

/// Throws Error(Config) on any out-of-range field.
void validate(const CaseStudyConfig& config);

/// {"seed", "n", "betas", "delta", "trajectories": [[[x,y] x4], ...] |
/// "default", "variance", "c" / "d": {"mean": [x, y], "variance": v}};
/// every key optional. Throws Error(Config).
CaseStudyConfig parse_case_study_config(const nlohmann::json& doc);
CaseStudyConfig load_case_study_config(const std::filesystem::path& path);
nlohmann::json to_json(const CaseStudyConfig& config);

struct CaseStudyProblem {
  Formula formula;
  PredicateTable predicates;
};

/// G[0,3](!inC & !inD) & F[1,2](inA & F[0,1] inB) over the state
/// [r(2) a(2) b(2) c(2) d(2)]; inC and inD read their centers from the state.
CaseStudyProblem build_case_study_formula();

inline constexpr std::size_t kCaseStudyDim = 10;
inline constexpr Point2 kCenterA{4.0, 5.0};
inline constexpr Point2 kCenterB{7.0, 2.0};

/// The length-4 trace of trajectory `r` with the region centers fixed.
Trace case_study_trace(const Waypoints& r, const Point2& c, const Point2& d);

/// N realizations of trajectory j (0-based). Realization i draws one c and
/// one d from a Philox stream keyed by the seed with counter
/// (i, trajectory, region), so every trace is independent of generation order.
Ensemble sample_ensemble(const CaseStudyConfig& config, std::size_t j);

struct CaseStudyRow {
  std::size_t trajectory;  ///< 1-based
  double beta;
  ExtReal var_lower;
  double var_point;
  ExtReal var_upper;
};

struct CaseStudyTable {
  std::vector<CaseStudyRow> rows;  ///< trajectory-major, betas in config order
  double epsilon;

  /// Upper bound for trajectory (1-based) and beta index.
  ExtReal upper(std::size_t trajectory, std::size_t beta_index) const;
};

CaseStudyTable run_case_study(const CaseStudyConfig& config);

/// "trajectory,beta,var_lower,var_point,var_upper" with 12 significant digits.
std::string table_csv(const CaseStudyTable& table);
std::string table_json(const CaseStudyTable& table, const CaseStudyConfig& config);

}  // namespace stlrisk
