#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stlrisk {

/// Finite discrete-time signal: states x(0), ..., x(L-1) in R^dim.
/// Immutable once constructed; every component is finite.
class Trace {
 public:
  /// Throws Error(Empty) for no states and Error(Format) for ragged or
  /// non-finite data.
  explicit Trace(const std::vector<std::vector<double>>& states);
  /// Row-major storage of `length` states with `dim` components each.
  Trace(std::size_t dim, std::vector<double> values);

  std::size_t length() const { return values_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> state(std::size_t t) const {
    return {values_.data() + t * dim_, dim_};
  }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::size_t dim_;
  std::vector<double> values_;
};

/// Provenance attached to an ensemble loaded from a manifest or generated.
struct EnsembleMetadata {
  std::optional<std::uint64_t> seed;
  std::string source;
  std::vector<std::string> files;  ///< trace files read, in ensemble order
};

/// N traces sharing one dimension and one length.
class Ensemble {
 public:
  /// Throws Error(Empty) when traces is empty, Error(Mismatch) on
  /// inconsistent dim or length.
  explicit Ensemble(std::vector<Trace> traces, EnsembleMetadata metadata = {});

  std::size_t size() const { return traces_.size(); }
  std::size_t length() const { return traces_.front().length(); }
  std::size_t dim() const { return traces_.front().dim(); }
  const Trace& operator[](std::size_t i) const { return traces_[i]; }
  const std::vector<Trace>& traces() const { return traces_; }
  const EnsembleMetadata& metadata() const { return metadata_; }

 private:
  std::vector<Trace> traces_;
  EnsembleMetadata metadata_;
};

/// Parses "t,x1,...,xn" CSV text with consecutive integer t from 0.
Trace parse_trace_csv(std::string_view text);
Trace load_trace_csv(const std::filesystem::path& path);

/// Writes values with 17 significant digits so they re-read bit-exactly.
std::string format_trace_csv(const Trace& trace);
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);

/// Loads every *.csv in a directory (ordered by file name), or the traces
/// listed by a JSON manifest {"traces": [paths], "seed": n}. Relative
/// manifest paths resolve against the manifest's directory.
Ensemble load_ensemble(const std::filesystem::path& dir_or_manifest);

}  // namespace stlrisk
