#include "stlrisk/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stlrisk/error.hpp"

namespace stlrisk {

namespace fs = std::filesystem;

Trace::Trace(const std::vector<std::vector<double>>& states) : dim_(0) {
  if (states.empty()) throw Error(ErrorCode::Empty, "trace has no states");
  dim_ = states.front().size();
  if (dim_ == 0) throw Error(ErrorCode::Format, "trace states must have at least one component");
  values_.reserve(states.size() * dim_);
  for (const auto& s : states) {
    if (s.size() != dim_) throw Error(ErrorCode::Format, "trace states have differing dimensions");
    values_.insert(values_.end(), s.begin(), s.end());
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::Format, "trace contains a non-finite value");
  }
}

Trace::Trace(std::size_t dim, std::vector<double> values) : dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) throw Error(ErrorCode::Format, "trace states must have at least one component");
  if (values_.empty()) throw Error(ErrorCode::Empty, "trace has no states");
  if (values_.size() % dim_ != 0) throw Error(ErrorCode::Format, "trace storage is not a whole number of states");
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::Format, "trace contains a non-finite value");
  }
}

Ensemble::Ensemble(std::vector<Trace> traces, EnsembleMetadata metadata)
    : traces_(std::move(traces)), metadata_(std::move(metadata)) {
  if (traces_.empty()) throw Error(ErrorCode::Empty, "ensemble has no traces");
  const auto& first = traces_.front();
  for (std::size_t i = 1; i < traces_.size(); ++i) {
    if (traces_[i].dim() != first.dim()) {
      throw Error(ErrorCode::Mismatch, "ensemble member " + std::to_string(i) + " has dimension " +
                                           std::to_string(traces_[i].dim()) + ", expected " +
                                           std::to_string(first.dim()));
    }
    if (traces_[i].length() != first.length()) {
      throw Error(ErrorCode::Mismatch, "ensemble member " + std::to_string(i) + " has length " +
                                           std::to_string(traces_[i].length()) + ", expected " +
                                           std::to_string(first.length()));
    }
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void format_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::Format, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Trace parse_trace_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(start, end - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::Empty, "trace file is empty");

  const auto header = split_cells(lines.front());
  if (header.size() < 2 || header.front() != "t") {
    format_error(1, "header must be 't,x1,...,xn'");
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] != "x" + std::to_string(i)) {
      format_error(1, "expected column 'x" + std::to_string(i) + "', found '" + std::string(header[i]) + "'");
    }
  }
  const std::size_t dim = header.size() - 1;
  if (lines.size() == 1) throw Error(ErrorCode::Empty, "trace file has no data rows");

  std::vector<double> values;
  values.reserve((lines.size() - 1) * dim);
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::size_t line_no = row + 1;
    const auto cells = split_cells(lines[row]);
    if (cells.size() != header.size()) {
      format_error(line_no, "expected " + std::to_string(header.size()) + " cells, found " +
                                std::to_string(cells.size()));
    }
    std::uint64_t t = 0;
    {
      const auto* first = cells[0].data();
      const auto* last = first + cells[0].size();
      const auto [ptr, ec] = std::from_chars(first, last, t);
      if (ec != std::errc() || ptr != last || cells[0].empty()) format_error(line_no, "time stamp is not a non-negative integer");
    }
    if (t != row - 1) {
      throw Error(ErrorCode::Gap, "line " + std::to_string(line_no) + ": expected t=" +
                                      std::to_string(row - 1) + ", found t=" + std::to_string(t));
    }
    for (std::size_t i = 1; i < cells.size(); ++i) {
      double v = 0.0;
      const auto* first = cells[i].data();
      const auto* last = first + cells[i].size();
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || cells[i].empty()) {
        format_error(line_no, "cell '" + std::string(cells[i]) + "' is not a number");
      }
      if (!std::isfinite(v)) format_error(line_no, "non-finite value '" + std::string(cells[i]) + "'");
      values.push_back(v);
    }
  }
  return Trace(dim, std::move(values));
}

Trace load_trace_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open trace file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_trace_csv(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string format_trace_csv(const Trace& trace) {
  std::string out = "t";
  for (std::size_t i = 1; i <= trace.dim(); ++i) out += ",x" + std::to_string(i);
  out += '\n';
  char buf[64];
  for (std::size_t t = 0; t < trace.length(); ++t) {
    out += std::to_string(t);
    for (double v : trace.state(t)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
      out += ',';
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

void write_trace_csv(const Trace& trace, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write trace file " + path.string());
  out << format_trace_csv(trace);
}

Ensemble load_ensemble(const fs::path& dir_or_manifest) {
  std::error_code ec;
  if (fs::is_directory(dir_or_manifest, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir_or_manifest)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    if (files.empty()) throw Error(ErrorCode::Empty, "no trace CSV files in " + dir_or_manifest.string());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    EnsembleMetadata meta{std::nullopt, dir_or_manifest.string(), {}};
    std::vector<Trace> traces;
    traces.reserve(files.size());
    for (const auto& f : files) {
      traces.push_back(load_trace_csv(f));
      meta.files.push_back(f.string());
    }
    return Ensemble(std::move(traces), std::move(meta));
  }

  std::ifstream in(dir_or_manifest);
  if (!in) throw Error(ErrorCode::Io, "cannot open ensemble " + dir_or_manifest.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, "invalid ensemble manifest: " + std::string(e.what()));
  }
  if (!manifest.is_object() || !manifest.contains("traces") || !manifest["traces"].is_array()) {
    throw Error(ErrorCode::Format, "ensemble manifest needs a \"traces\" array");
  }
  EnsembleMetadata meta;
  meta.source = dir_or_manifest.string();
  if (manifest.contains("seed") && !manifest["seed"].is_null()) {
    if (!manifest["seed"].is_number_integer()) throw Error(ErrorCode::Format, "manifest seed must be an integer");
    meta.seed = manifest["seed"].get<std::uint64_t>();
  }
  const fs::path base = dir_or_manifest.parent_path();
  std::vector<Trace> traces;
  for (const auto& entry : manifest["traces"]) {
    if (!entry.is_string()) throw Error(ErrorCode::Format, "manifest trace entries must be paths");
    fs::path p = entry.get<std::string>();
    if (p.is_relative()) p = base / p;
    traces.push_back(load_trace_csv(p));
    meta.files.push_back(p.string());
  }
  if (traces.empty()) throw Error(ErrorCode::Empty, "ensemble manifest lists no traces");
  return Ensemble(std::move(traces), std::move(meta));
}

}  // namespace stlrisk
