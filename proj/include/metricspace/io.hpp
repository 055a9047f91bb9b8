#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "metricspace/chain.hpp"
#include "metricspace/errors.hpp"
#include "metricspace/gh.hpp"
#include "metricspace/kuratowski.hpp"
#include "metricspace/metric_space.hpp"
#include "metricspace/ultrametric.hpp"

namespace metricspace {

/// Shortest decimal that round-trips back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// JSON space format: {"name"?: string, "labels": [string], "matrix": [[num]]}

inline nlohmann::json space_to_json(const FiniteMetricSpace& space) {
  nlohmann::json out;
  if (!space.name().empty()) out["name"] = space.name();
  out["labels"] = space.labels();
  nlohmann::json matrix = nlohmann::json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(space.distance(i, j));
    matrix.push_back(std::move(row));
  }
  out["matrix"] = std::move(matrix);
  return out;
}

inline FiniteMetricSpace space_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("space document must be a JSON object");
  if (!doc.contains("labels") || !doc["labels"].is_array())
    throw InputError("space document needs a \"labels\" array");
  if (!doc.contains("matrix") || !doc["matrix"].is_array())
    throw InputError("space document needs a \"matrix\" array");
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw InputError("\"name\" must be a string");
    name = doc["name"].get<std::string>();
  }
  std::vector<std::string> labels;
  for (const auto& entry : doc["labels"]) {
    if (!entry.is_string()) throw InputError("labels must be strings");
    labels.push_back(entry.get<std::string>());
  }
  const std::size_t n = labels.size();
  std::vector<double> dist;
  dist.reserve(n * n);
  if (doc["matrix"].size() != n) throw InputError("matrix must be square with one row per label");
  for (const auto& row : doc["matrix"]) {
    if (!row.is_array() || row.size() != n)
      throw InputError("matrix must be square with one row per label");
    for (const auto& cell : row) {
      if (!cell.is_number()) throw InputError("matrix entries must be numbers");
      dist.push_back(cell.get<double>());
    }
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist), std::move(name));
}

// ---------------------------------------------------------------------------
// CSV: square numeric matrix, optional first header row of labels.

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

inline bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end;
}

}  // namespace detail

inline FiniteMetricSpace space_from_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(detail::split_csv_row(line));
  }
  if (rows.empty()) throw InputError("CSV input is empty");

  double probe = 0.0;
  bool header = false;
  for (const std::string& cell : rows.front())
    if (!detail::parse_double(cell, probe)) header = true;

  std::vector<std::string> labels;
  std::size_t start = 0;
  if (header) {
    labels = rows.front();
    start = 1;
  }
  const std::size_t n = rows.size() - start;
  if (n == 0) throw InputError("CSV input has a header but no data rows");
  if (header && labels.size() != n)
    throw InputError("CSV header width must match the number of data rows");
  if (!header)
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));

  std::vector<double> dist;
  dist.reserve(n * n);
  for (std::size_t r = start; r < rows.size(); ++r) {
    if (rows[r].size() != n) throw InputError("CSV matrix must be square");
    for (const std::string& cell : rows[r]) {
      double value = 0.0;
      if (!detail::parse_double(cell, value))
        throw InputError("CSV matrix entry is not a number: \"" + cell + "\"");
      dist.push_back(value);
    }
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

inline std::string space_to_csv(const FiniteMetricSpace& space, bool header = true) {
  std::string out;
  if (header) {
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (j) out += ',';
      out += space.label(j);
    }
    out += '\n';
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (j) out += ',';
      out += format_double(space.distance(i, j));
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derived results.

inline nlohmann::json ultrametric_to_json(const UltrametricSpace& ultra,
                                          const FiniteMetricSpace& source) {
  nlohmann::json out = space_to_json(ultra.space);
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& cls : ultra.source_classes) {
    nlohmann::json merged = nlohmann::json::array();
    for (std::size_t idx : cls) merged.push_back(source.label(idx));
    classes.push_back(std::move(merged));
  }
  out["classes"] = std::move(classes);
  return out;
}

inline nlohmann::json partition_to_json(const ChainPartition& partition,
                                        const FiniteMetricSpace& space) {
  nlohmann::json components = nlohmann::json::array();
  for (const auto& component : partition.components) {
    nlohmann::json labels = nlohmann::json::array();
    for (std::size_t idx : component) labels.push_back(space.label(idx));
    components.push_back(std::move(labels));
  }
  return nlohmann::json{{"scale", partition.scale}, {"components", std::move(components)}};
}

inline nlohmann::json gh_result_to_json(const GhResult& result, const FiniteMetricSpace& left,
                                        const FiniteMetricSpace& right) {
  nlohmann::json out;
  out["lower"] = result.lower;
  out["upper"] = result.upper;
  out["exact"] = result.exact;
  if (result.witness) {
    nlohmann::json witness = nlohmann::json::array();
    for (const auto& [i, j] : result.witness->pairs)
      witness.push_back(nlohmann::json::array({left.label(i), right.label(j)}));
    out["witness"] = std::move(witness);
  } else {
    out["witness"] = nullptr;
  }
  nlohmann::json provenance = nlohmann::json::array();
  for (const auto& [bound, value] : result.provenance)
    provenance.push_back(nlohmann::json{{"bound", bound}, {"value", value}});
  out["provenance"] = std::move(provenance);
  out["nodes"] = result.nodes_explored;
  out["timed_out"] = result.timed_out;
  return out;
}

inline nlohmann::json sampled_dt_to_json(const SampledDt& dt) {
  nlohmann::json out = space_to_json(dt.space);
  nlohmann::json origins = nlohmann::json::array();
  for (const Origin& origin : dt.origins) {
    if (const auto* original = std::get_if<std::size_t>(&origin)) {
      origins.push_back(*original);
    } else {
      const auto& seg = std::get<SegmentPoint>(origin);
      origins.push_back(nlohmann::json{{"i", seg.i}, {"j", seg.j}, {"s", seg.s}});
    }
  }
  out["origins"] = std::move(origins);
  out["t"] = dt.t;
  out["step"] = dt.step;
  return out;
}

// ---------------------------------------------------------------------------
// Files. Extension picks the format: .csv is CSV, everything else JSON.

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open file for writing: " + path);
  out << text;
}

inline bool has_csv_extension(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

inline FiniteMetricSpace read_space(const std::string& path) {
  const std::string text = read_text_file(path);
  if (has_csv_extension(path)) return space_from_csv(text);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw InputError(std::string("invalid JSON in ") + path + ": " + err.what());
  }
  return space_from_json(doc);
}

inline void write_space(const std::string& path, const FiniteMetricSpace& space) {
  if (has_csv_extension(path))
    write_text_file(path, space_to_csv(space));
  else
    write_text_file(path, space_to_json(space).dump(2) + "\n");
}

}  // namespace metricspace
