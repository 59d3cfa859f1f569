#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spol/errors.hpp"

/// Bit-stable CSV/JSON emission. CSV is RFC-4180-style (comma separators,
/// header row, decimal point, no locale formatting); floating-point values are
/// serialized with 17 significant digits. Every payload carries a metadata
/// block; identical inputs produce byte-identical payloads (no timestamps).

namespace spol::io {

/// Locale-independent %.17g rendering.
[[nodiscard]] inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

using KvRows = std::vector<std::pair<std::string, std::string>>;

/// Metadata rendered as '# key: value' comment lines preceding the header row.
[[nodiscard]] inline std::string csv_metadata(const nlohmann::ordered_json& metadata) {
  std::string out;
  for (const auto& item : metadata.items()) {
    out += "# " + item.key() + ": ";
    if (item.value().is_string()) {
      out += item.value().get<std::string>();
    } else {
      out += item.value().dump();
    }
    out += "\n";
  }
  return out;
}

/// Tabular CSV: metadata comments, one header row, data rows.
[[nodiscard]] inline std::string csv_table(const nlohmann::ordered_json& metadata,
                                           const std::vector<std::string>& header,
                                           const std::vector<std::vector<std::string>>& rows) {
  std::string out = csv_metadata(metadata);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

/// Scalar-report CSV: metadata comments, then key,value rows.
[[nodiscard]] inline std::string csv_kv(const nlohmann::ordered_json& metadata,
                                        const KvRows& kv) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(kv.size());
  for (const auto& [k, v] : kv) rows.push_back({k, v});
  return csv_table(metadata, {"key", "value"}, rows);
}

/// JSON payload {"metadata": ..., "data": ...} with a trailing newline.
[[nodiscard]] inline std::string json_report(const nlohmann::ordered_json& metadata,
                                             const nlohmann::ordered_json& data) {
  nlohmann::ordered_json doc;
  doc["metadata"] = metadata;
  doc["data"] = data;
  return doc.dump(2) + "\n";
}

/// Machine-readable error document.
[[nodiscard]] inline std::string error_json(const Error& e) {
  nlohmann::ordered_json doc;
  doc["error"] = {{"type", e.type()}, {"message", e.what()}};
  return doc.dump(2) + "\n";
}

/// Writes the payload to `path`, or to stdout when `path` is empty.
inline void write_output(const std::string& payload, const std::string& path) {
  if (path.empty()) {
    std::cout << payload;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw BadConfig("output.path: cannot open \"" + path + "\" for writing");
  }
  out << payload;
  if (!out) {
    throw BadConfig("output.path: write to \"" + path + "\" failed");
  }
}

}  // namespace spol::io
