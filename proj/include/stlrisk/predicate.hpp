#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace stlrisk {

enum class Norm { L2, Linf };

/// Index slice into the state vector.
struct StateSlice {
  std::vector<std::size_t> indices;
};

/// Observation map of an atomic predicate together with its closed-form
/// Euclidean signed distance (positive inside, negative outside).
class PredicateDef {
 public:
  using DistanceFn = std::function<double(std::span<const double>)>;

  /// {x | a.x + b >= 0}; a must be non-zero.
  static PredicateDef halfspace(std::vector<double> a, double b);
  /// {x | ||x[pos] - center|| <= radius}, center fixed.
  static PredicateDef ball(std::vector<std::size_t> pos, std::vector<double> center, double radius, Norm norm);
  /// Same, with the center read from the state itself.
  static PredicateDef ball(std::vector<std::size_t> pos, StateSlice center, double radius, Norm norm);
  static PredicateDef complement(PredicateDef inner);
  /// Embedder-supplied distance; `min_dim` is the smallest admissible state.
  static PredicateDef custom(DistanceFn signed_distance, std::size_t min_dim = 0);

  /// Throws Error(Dimension) when the state is too small (or, for a
  /// halfspace, not exactly the normal's size).
  double signed_distance(std::span<const double> state) const;

  /// Throws Error(Dimension) unless a state of `dim` components is admissible.
  void check_dimension(std::size_t dim) const;

  bool contains(std::span<const double> state) const { return signed_distance(state) >= 0.0; }

 private:
  struct Halfspace {
    std::vector<double> a;
    double b;
    double norm_a;
  };
  struct Ball {
    std::vector<std::size_t> pos;
    std::variant<std::vector<double>, StateSlice> center;
    double radius;
    Norm norm;
  };
  struct Complement {
    std::shared_ptr<const PredicateDef> inner;
  };
  struct Custom {
    DistanceFn fn;
    std::size_t min_dim;
  };
  using Repr = std::variant<Halfspace, Ball, Complement, Custom>;

  explicit PredicateDef(Repr repr) : repr_(std::move(repr)) {}

  Repr repr_;
};

/// Named predicates referenced by formulas.
class PredicateTable {
 public:
  void add(const std::string& name, PredicateDef def);
  bool contains(const std::string& name) const { return defs_.count(name) != 0; }
  /// Throws Error(UnknownPredicate).
  const PredicateDef& at(const std::string& name) const;
  std::size_t size() const { return defs_.size(); }

  /// {"name": {"kind": "halfspace"|"ball", "a": [..], "b": v, "pos": [..],
  ///  "center": [..] | {"slice": [..]}, "radius": r, "norm": "l2"|"linf",
  ///  "complement": bool}}. Throws Error(Format) on schema violations.
  static PredicateTable from_json(const nlohmann::json& doc);
  static PredicateTable load_json(const std::filesystem::path& path);

 private:
  std::map<std::string, PredicateDef> defs_;
};

}  // namespace stlrisk
