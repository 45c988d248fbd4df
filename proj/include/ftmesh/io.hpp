// Copyright 2026 The ftmesh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file io.hpp
 * On-disk formats.
 *
 * Matrix text: first line "N M", then N lines of M whitespace-separated
 * "re,im" entries printed with 17 significant digits. Vectors are N×1 (a
 * 1×N file is accepted on input).
 *
 * ProgramFile: a JSON object
 *   { "schema_version": 1, "n": N, "transform": "dft" | "mmi",
 *     "zeta0": <only for mmi>, "masks": [[phase, ...], ...],
 *     "metadata": { "<key>": "<string>", ... } }
 * with 6N+1 masks of N phases in radians.
 */

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ftmesh/matcore.hpp"
#include "ftmesh/program.hpp"

namespace ftmesh {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IOError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Matrix text

namespace detail {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(std::string_view s, const std::string& where) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(where + ": bad number '" + std::string(s) + "'");
  }
  if (!std::isfinite(x)) throw ParseError(where + ": non-finite number");
  return x;
}

inline Complex parse_entry(std::string_view token, const std::string& where) {
  const auto comma = token.find(',');
  if (comma == std::string_view::npos || token.find(',', comma + 1) != std::string_view::npos) {
    throw ParseError(where + ": expected 're,im', got '" + std::string(token) + "'");
  }
  return {parse_double(token.substr(0, comma), where), parse_double(token.substr(comma + 1), where)};
}

}  // namespace detail

inline std::string format_matrix(const ComplexMatrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ' ';
      out += detail::format_double(m(i, j).real());
      out += ',';
      out += detail::format_double(m(i, j).imag());
    }
    out += '\n';
  }
  return out;
}

inline ComplexMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  long long rows = 0;
  long long cols = 0;
  if (!(in >> rows >> cols)) throw ParseError("matrix: missing 'N M' header");
  if (rows <= 0 || cols <= 0) throw ParseError("matrix: dimensions must be positive");
  if (rows > 1 << 15 || cols > 1 << 15) throw ParseError("matrix: dimensions too large");
  std::vector<Complex> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  std::string token;
  while (in >> token) {
    const std::string where = "matrix entry " + std::to_string(entries.size());
    entries.push_back(detail::parse_entry(token, where));
  }
  if (entries.size() != static_cast<std::size_t>(rows * cols)) {
    throw ParseError("matrix: expected " + std::to_string(rows * cols) + " entries, found " +
                     std::to_string(entries.size()));
  }
  return ComplexMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(entries));
}

inline std::string format_vector(std::span<const Complex> v) {
  return format_matrix(ComplexMatrix(v.size(), 1, ComplexVector(v.begin(), v.end())));
}

inline ComplexVector parse_vector(const std::string& text) {
  const ComplexMatrix m = parse_matrix(text);
  if (m.cols() != 1 && m.rows() != 1) throw ParseError("vector: expected an N x 1 or 1 x N matrix");
  const auto d = m.data();
  return ComplexVector(d.begin(), d.end());
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IOError("error reading '" + path + "'");
  return ss.str();
}

/** Writes the whole buffer to a temporary file, then renames it over path. */
inline void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw IOError("error writing '" + path + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IOError("cannot move output into place at '" + path + "'");
  }
}

// ---------------------------------------------------------------------------
// ProgramFile

struct ProgramFile {
  PhaseMaskProgram program;
  std::map<std::string, std::string> metadata;
};

/** FNV-1a (64 bit) of a byte string, as 16 hex digits. */
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string matrix_checksum(const ComplexMatrix& m) { return fnv1a_hex(format_matrix(m)); }

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/** Standard metadata for a freshly written program. */
inline std::map<std::string, std::string> default_metadata(const ComplexMatrix* source) {
  std::map<std::string, std::string> md{{"tool_version", kToolVersion}, {"timestamp", utc_timestamp()}};
  if (source != nullptr) md["source_checksum"] = "fnv1a64:" + matrix_checksum(*source);
  return md;
}

namespace detail {
inline void require_program_shape(const PhaseMaskProgram& p) {
  p.validate();
  if (p.n % 2 != 0) throw ParseError("program: n must be even");
  if (p.masks.size() != 6 * p.n + 1) {
    throw ParseError("program: expected " + std::to_string(6 * p.n + 1) + " masks, found " +
                     std::to_string(p.masks.size()));
  }
}
}  // namespace detail

/** Phases are reduced to [0, 2π) before writing. */
inline std::string serialize_program(const ProgramFile& file) {
  const PhaseMaskProgram& p = file.program;
  detail::require_program_shape(p);
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = p.n;
  j["transform"] = p.transform == TransformKind::MMI ? "mmi" : "dft";
  if (p.transform == TransformKind::MMI) j["zeta0"] = p.zeta0;
  auto masks = nlohmann::ordered_json::array();
  for (const auto& m : p.masks) {
    const auto c = m.canonical();
    masks.push_back(std::vector<double>(c.phases().begin(), c.phases().end()));
  }
  j["masks"] = std::move(masks);
  j["metadata"] = file.metadata;
  return j.dump(1) + "\n";
}

inline ProgramFile parse_program(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("program: invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ParseError("program: top level must be an object");
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion) throw ParseError("program: unsupported schema_version " + std::to_string(version));

    ProgramFile out;
    PhaseMaskProgram& p = out.program;
    const auto n = j.at("n").get<long long>();
    if (n <= 0) throw ParseError("program: n must be positive");
    p.n = static_cast<std::size_t>(n);

    const auto transform = j.at("transform").get<std::string>();
    if (transform == "dft") {
      p.transform = TransformKind::IdealDFT;
      if (j.contains("zeta0")) throw ParseError("program: zeta0 is only allowed for mmi programs");
    } else if (transform == "mmi") {
      p.transform = TransformKind::MMI;
      p.zeta0 = j.at("zeta0").get<double>();
      if (!std::isfinite(p.zeta0)) throw ParseError("program: zeta0 must be finite");
    } else {
      throw ParseError("program: transform must be \"dft\" or \"mmi\"");
    }

    for (const auto& m : j.at("masks")) {
      std::vector<double> phases;
      for (const auto& x : m) {
        if (!x.is_number()) throw ParseError("program: phases must be numbers");
        phases.push_back(x.get<double>());
      }
      p.masks.emplace_back(std::move(phases));
    }
    if (j.contains("metadata")) {
      for (const auto& [key, value] : j.at("metadata").items()) {
        if (!value.is_string()) throw ParseError("program: metadata values must be strings");
        out.metadata[key] = value.get<std::string>();
      }
    }
    try {
      detail::require_program_shape(p);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(std::string("program: ") + e.what());
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("program: ") + e.what());
  }
}

}  // namespace ftmesh
