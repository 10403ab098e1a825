// Copyright 2026 The uvms_ppc Authors
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

// CSV log export/import. One header row, comma-delimited, LF line endings, doubles in
// shortest round-trip form capped at 17 significant digits. Column order is
// column_names(n); docs/log_format.md lists it.

#ifndef UVMS_PPC_LOG_IO_HPP_
#define UVMS_PPC_LOG_IO_HPP_

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "uvms_ppc/simulation.hpp"

namespace uvms {

class LogIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

inline double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    // from_chars rejects "inf"/"nan" spellings that to_chars never emits for finite logs.
    throw LogIoError("line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(delim, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline std::string log_to_csv(const SimLog& log) {
  std::string out;
  const auto names = column_names(log.n);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out.push_back(',');
    out += names[i];
  }
  out.push_back('\n');
  for (const LogRecord& rec : log.records) {
    const std::vector<double> row = rec.row();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      detail::append_double(out, row[i]);
    }
    out.push_back('\n');
  }
  return out;
}

/// The record width fixes n; every row must match the header width.
inline SimLog log_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw LogIoError("log is empty (no header row)");
  const auto header = detail::split(line, ',');
  const std::size_t width = header.size();
  if (width < 23 || (width - 23) % 6 != 0) {
    throw LogIoError("header has " + std::to_string(width) + " columns; not a valid log");
  }
  SimLog log;
  log.n = (width - 23) / 6;
  const auto expected = column_names(log.n);
  for (std::size_t i = 0; i < width; ++i) {
    if (header[i] != expected[i]) {
      throw LogIoError("header column " + std::to_string(i + 1) + " is '" + std::string(header[i]) + "', expected '" +
                       expected[i] + "'");
    }
  }
  std::size_t lineno = 1;
  std::vector<double> row(width);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != width) {
      throw LogIoError("line " + std::to_string(lineno) + " has " + std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(width));
    }
    for (std::size_t i = 0; i < width; ++i) row[i] = detail::parse_double(fields[i], lineno);
    log.records.push_back(LogRecord::from_row(row, log.n));
  }
  return log;
}

inline void export_log(const SimLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LogIoError("cannot open '" + path + "' for writing");
  const std::string text = log_to_csv(log);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw LogIoError("write to '" + path + "' failed");
}

inline SimLog import_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogIoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return log_from_csv(buf.str());
  } catch (const LogIoError& e) {
    throw LogIoError(path + ": " + e.what());
  }
}

}  // namespace uvms

#endif  // UVMS_PPC_LOG_IO_HPP_
