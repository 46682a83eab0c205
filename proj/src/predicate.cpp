#include "stlrisk/predicate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "stlrisk/error.hpp"
#include "stlrisk/formula.hpp"

namespace stlrisk {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t required_dim(const std::vector<std::size_t>& indices) {
  std::size_t d = 0;
  for (auto i : indices) d = std::max(d, i + 1);
  return d;
}

void validate_ball(const std::vector<std::size_t>& pos, std::size_t center_size, double radius) {
  if (pos.empty()) throw Error(ErrorCode::InvalidArgument, "ball predicate needs at least one position index");
  if (center_size != pos.size()) {
    throw Error(ErrorCode::InvalidArgument, "ball center and position slice differ in length");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "ball radius must be positive and finite");
  }
}

}  // namespace

PredicateDef PredicateDef::halfspace(std::vector<double> a, double b) {
  double sq = 0.0;
  for (double v : a) sq += v * v;
  const double n = std::sqrt(sq);
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(b)) {
    throw Error(ErrorCode::InvalidArgument, "halfspace normal must be finite and non-zero");
  }
  return PredicateDef(Halfspace{std::move(a), b, n});
}

PredicateDef PredicateDef::ball(std::vector<std::size_t> pos, std::vector<double> center, double radius,
                                Norm norm) {
  validate_ball(pos, center.size(), radius);
  return PredicateDef(Ball{std::move(pos), std::move(center), radius, norm});
}

PredicateDef PredicateDef::ball(std::vector<std::size_t> pos, StateSlice center, double radius, Norm norm) {
  validate_ball(pos, center.indices.size(), radius);
  return PredicateDef(Ball{std::move(pos), std::move(center), radius, norm});
}

PredicateDef PredicateDef::complement(PredicateDef inner) {
  return PredicateDef(Complement{std::make_shared<const PredicateDef>(std::move(inner))});
}

PredicateDef PredicateDef::custom(DistanceFn signed_distance, std::size_t min_dim) {
  if (!signed_distance) throw Error(ErrorCode::InvalidArgument, "custom predicate needs a distance function");
  return PredicateDef(Custom{std::move(signed_distance), min_dim});
}

void PredicateDef::check_dimension(std::size_t dim) const {
  std::visit(Overloaded{
                 [&](const Halfspace& h) {
                   if (h.a.size() != dim) {
                     throw Error(ErrorCode::Dimension, "halfspace normal has " + std::to_string(h.a.size()) +
                                                           " components, state has " + std::to_string(dim));
                   }
                 },
                 [&](const Ball& b) {
                   std::size_t need = required_dim(b.pos);
                   if (const auto* s = std::get_if<StateSlice>(&b.center)) {
                     need = std::max(need, required_dim(s->indices));
                   }
                   if (need > dim) {
                     throw Error(ErrorCode::Dimension, "ball predicate reads state index " +
                                                           std::to_string(need - 1) + ", state has " +
                                                           std::to_string(dim) + " components");
                   }
                 },
                 [&](const Complement& c) { c.inner->check_dimension(dim); },
                 [&](const Custom& c) {
                   if (c.min_dim > dim) {
                     throw Error(ErrorCode::Dimension, "custom predicate needs " + std::to_string(c.min_dim) +
                                                           " state components, state has " +
                                                           std::to_string(dim));
                   }
                 },
             },
             repr_);
}

double PredicateDef::signed_distance(std::span<const double> s) const {
  check_dimension(s.size());
  return std::visit(
      Overloaded{
          [&](const Halfspace& h) {
            double dot = h.b;
            for (std::size_t i = 0; i < s.size(); ++i) dot += h.a[i] * s[i];
            return dot / h.norm_a;
          },
          [&](const Ball& b) {
            auto center_at = [&](std::size_t i) {
              if (const auto* c = std::get_if<std::vector<double>>(&b.center)) return (*c)[i];
              return s[std::get<StateSlice>(b.center).indices[i]];
            };
            if (b.norm == Norm::L2) {
              double sq = 0.0;
              for (std::size_t i = 0; i < b.pos.size(); ++i) {
                const double d = s[b.pos[i]] - center_at(i);
                sq += d * d;
              }
              return b.radius - std::sqrt(sq);
            }
            // Inside the box the nearest exit is through the closest face;
            // outside, the distance combines the per-axis overshoots.
            double inside = b.radius;
            double outside_sq = 0.0;
            bool is_inside = true;
            for (std::size_t i = 0; i < b.pos.size(); ++i) {
              const double d = std::abs(s[b.pos[i]] - center_at(i));
              if (d > b.radius) {
                is_inside = false;
                outside_sq += (d - b.radius) * (d - b.radius);
              }
              inside = std::min(inside, b.radius - d);
            }
            return is_inside ? inside : -std::sqrt(outside_sq);
          },
          [&](const Complement& c) { return -c.inner->signed_distance(s); },
          [&](const Custom& c) { return c.fn(s); },
      },
      repr_);
}

void PredicateTable::add(const std::string& name, PredicateDef def) {
  if (!is_identifier(name) || is_reserved_word(name)) {
    throw Error(ErrorCode::InvalidArgument, "invalid predicate name '" + name + "'");
  }
  defs_.insert_or_assign(name, std::move(def));
}

const PredicateDef& PredicateTable::at(const std::string& name) const {
  const auto it = defs_.find(name);
  if (it == defs_.end()) throw Error(ErrorCode::UnknownPredicate, "unknown predicate '" + name + "'");
  return it->second;
}

namespace {

[[noreturn]] void schema_error(const std::string& name, const std::string& what) {
  throw Error(ErrorCode::Format, "predicate '" + name + "': " + what);
}

std::vector<std::size_t> index_list(const nlohmann::json& j, const std::string& name, const char* key) {
  if (!j.is_array()) schema_error(name, std::string("\"") + key + "\" must be an array of indices");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) schema_error(name, std::string("\"") + key + "\" entries must be non-negative integers");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

std::vector<double> number_list(const nlohmann::json& j, const std::string& name, const char* key) {
  if (!j.is_array()) schema_error(name, std::string("\"") + key + "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) schema_error(name, std::string("\"") + key + "\" entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double number(const nlohmann::json& obj, const std::string& name, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number()) schema_error(name, std::string("missing number \"") + key + "\"");
  return obj[key].get<double>();
}

PredicateDef parse_entry(const std::string& name, const nlohmann::json& obj) {
  if (!obj.is_object()) schema_error(name, "definition must be an object");
  if (!obj.contains("kind") || !obj["kind"].is_string()) schema_error(name, "missing \"kind\"");
  const auto kind = obj["kind"].get<std::string>();
  auto build = [&]() -> PredicateDef {
    if (kind == "halfspace") {
      if (!obj.contains("a")) schema_error(name, "missing \"a\"");
      return PredicateDef::halfspace(number_list(obj["a"], name, "a"), number(obj, name, "b"));
    }
    if (kind == "ball") {
      if (!obj.contains("pos")) schema_error(name, "missing \"pos\"");
      if (!obj.contains("center")) schema_error(name, "missing \"center\"");
      auto pos = index_list(obj["pos"], name, "pos");
      const double radius = number(obj, name, "radius");
      Norm norm = Norm::L2;
      if (obj.contains("norm")) {
        const auto& n = obj["norm"];
        if (n == "l2") {
          norm = Norm::L2;
        } else if (n == "linf") {
          norm = Norm::Linf;
        } else {
          schema_error(name, "\"norm\" must be \"l2\" or \"linf\"");
        }
      }
      const auto& center = obj["center"];
      if (center.is_object()) {
        if (!center.contains("slice")) schema_error(name, "state-slice center needs \"slice\"");
        return PredicateDef::ball(std::move(pos), StateSlice{index_list(center["slice"], name, "slice")}, radius,
                                  norm);
      }
      return PredicateDef::ball(std::move(pos), number_list(center, name, "center"), radius, norm);
    }
    schema_error(name, "unknown kind '" + kind + "'");
  };
  PredicateDef def = [&] {
    try {
      return build();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Format) throw;
      schema_error(name, e.what());
    }
  }();
  if (obj.contains("complement")) {
    if (!obj["complement"].is_boolean()) schema_error(name, "\"complement\" must be a boolean");
    if (obj["complement"].get<bool>()) def = PredicateDef::complement(std::move(def));
  }
  return def;
}

}  // namespace

PredicateTable PredicateTable::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::Format, "predicate table must be a JSON object");
  PredicateTable table;
  for (const auto& [name, obj] : doc.items()) {
    if (!is_identifier(name) || is_reserved_word(name)) schema_error(name, "not a valid predicate name");
    table.add(name, parse_entry(name, obj));
  }
  return table;
}

PredicateTable PredicateTable::load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open predicate file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, path.string() + ": invalid JSON: " + e.what());
  }
  return from_json(doc);
}

}  // namespace stlrisk
