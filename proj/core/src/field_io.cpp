/* Copyright 2026 The spinopt Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <charconv>
#include <fstream>
#include <sstream>

#include "spinopt/propagation.hpp"

namespace spinopt {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::size_t line_no) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::runtime_error("field CSV line " + std::to_string(line_no) + ": bad number '" +
                             std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

constexpr std::string_view kBoundKey = "# amplitude_bound=";

}  // namespace

void write_field_csv(std::ostream& out, const PiecewiseControl& control) {
  if (control.bound()) {
    out << kBoundKey << format_double(*control.bound()) << '\n';
  }
  out << "t_start,t_end";
  for (Eigen::Index m = 0; m < control.n_controls(); ++m) out << ",u_" << (m + 1);
  out << '\n';
  const auto& t = control.times();
  for (Eigen::Index k = 0; k < control.segments(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    out << format_double(t[i]) << ',' << format_double(t[i + 1]);
    for (Eigen::Index m = 0; m < control.n_controls(); ++m) {
      out << ',' << format_double(control.values()(k, m));
    }
    out << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path, const PiecewiseControl& control) {
  std::ostringstream ss;
  write_field_csv(ss, control);
  write_file_atomic(path, ss.str());
}

PiecewiseControl read_field_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<double> bound;
  std::size_t n_controls = 0;
  bool have_header = false;
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind(kBoundKey, 0) == 0) {
        bound = parse_double(std::string_view(line).substr(kBoundKey.size()), line_no);
      }
      continue;
    }
    const auto cells = split(line);
    if (!have_header) {
      if (cells.size() < 3 || cells[0] != "t_start" || cells[1] != "t_end") {
        throw std::runtime_error("field CSV: expected header 't_start,t_end,u_1,...'");
      }
      for (std::size_t m = 2; m < cells.size(); ++m) {
        if (cells[m] != "u_" + std::to_string(m - 1)) {
          throw std::runtime_error("field CSV: header column " + std::to_string(m + 1) +
                                   " should be u_" + std::to_string(m - 1));
        }
      }
      n_controls = cells.size() - 2;
      have_header = true;
      continue;
    }
    if (cells.size() != n_controls + 2) {
      throw std::runtime_error("field CSV line " + std::to_string(line_no) + ": expected " +
                               std::to_string(n_controls + 2) + " columns, got " +
                               std::to_string(cells.size()));
    }
    const double t0 = parse_double(cells[0], line_no);
    const double t1 = parse_double(cells[1], line_no);
    if (times.empty()) {
      times.push_back(t0);
    } else if (t0 != times.back()) {
      throw std::runtime_error("field CSV line " + std::to_string(line_no) +
                               ": segment does not start where the previous one ended");
    }
    times.push_back(t1);
    std::vector<double> row;
    for (std::size_t m = 0; m < n_controls; ++m) {
      row.push_back(parse_double(cells[m + 2], line_no));
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) {
    throw std::runtime_error("field CSV: missing header");
  }
  if (times.empty()) times.push_back(0.0);
  RealMatrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_controls));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t m = 0; m < n_controls; ++m) {
      values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) = rows[k][m];
    }
  }
  try {
    return PiecewiseControl(std::move(times), std::move(values), bound);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("field CSV: ") + e.what());
  }
}

PiecewiseControl read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open field file " + path.string());
  }
  return read_field_csv(in);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << contents;
    if (!out) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace spinopt
