// Copyright 2026 The adalsh Authors
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

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "adalsh/error.hpp"
#include "adalsh/generators.hpp"
#include "adalsh/hamming.hpp"

namespace adalsh {

// Instance text format v1:
//   srr-instance v1
//   d=<int> n=<int> r=<int>
//   <query hex>
//   <point 0 hex>
//   ...
// Generator metadata is not part of the format.

inline void write_instance(std::ostream& os, const Instance& inst) {
  os << "srr-instance v1\n";
  os << "d=" << inst.set.dim() << " n=" << inst.set.size() << " r=" << inst.r << "\n";
  os << to_hex(inst.query) << "\n";
  for (const auto& x : inst.set) os << to_hex(x) << "\n";
}

namespace detail {

inline bool next_line(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
  return true;
}

inline std::size_t parse_field(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) throw_validation("instance header: expected '" + key + "=<int>'");
  const std::string value = token.substr(key.size() + 1);
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
    throw_validation("instance header: bad value for " + key);
  }
  return std::stoull(value);
}

}  // namespace detail

inline Instance read_instance(std::istream& is) {
  std::string line;
  if (!detail::next_line(is, line) || line != "srr-instance v1") {
    throw_validation("not an srr-instance v1 file");
  }
  if (!detail::next_line(is, line)) throw_validation("instance: missing header line");
  std::istringstream header(line);
  std::string td, tn, tr, extra;
  header >> td >> tn >> tr;
  if (header >> extra) throw_validation("instance header: trailing tokens");
  const std::size_t d = detail::parse_field(td, "d");
  const std::size_t n = detail::parse_field(tn, "n");
  const std::size_t r = detail::parse_field(tr, "r");
  if (d == 0 || n == 0) throw_validation("instance header: d and n must be positive");
  if (r > d) throw_validation("instance header: r exceeds d");

  if (!detail::next_line(is, line)) throw_validation("instance: missing query line");
  BitPoint query = from_hex(line, d);
  std::vector<BitPoint> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!detail::next_line(is, line)) throw_validation("instance: expected " + std::to_string(n) + " points");
    points.push_back(from_hex(line, d));
  }
  while (detail::next_line(is, line)) {
    if (!line.empty()) throw_validation("instance: unexpected content after last point");
  }
  Instance inst{PointSet(d, std::move(points)), std::move(query), r, {}};
  inst.meta.generator = "file";
  return inst;
}

inline void save_instance(const std::string& path, const Instance& inst) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw_io("cannot open " + path + " for writing");
  write_instance(os, inst);
  if (!os) throw_io("write failed: " + path);
}

inline Instance load_instance(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw_io("cannot open " + path);
  return read_instance(is);
}

}  // namespace adalsh
