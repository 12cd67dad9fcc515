// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#pragma once

#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "boxeval/box.hpp"
#include "boxeval/text.hpp"

namespace boxeval {

/// One row of a pair file: a proposal, its ground truth, whether the raw
/// corners had to be reordered, and the source line for error reporting.
struct PairRecord {
  Box rp;
  Box gt;
  bool canonicalized = false;
  std::size_t line = 0;
};

struct PairFile {
  std::vector<PairRecord> rows;
  bool had_header = false;
};

/// Parses rp_x1,rp_y1,rp_x2,rp_y2,gt_x1,gt_y1,gt_x2,gt_y2 rows with an
/// optional header. Rows with swapped corner pairs are canonicalized and
/// flagged; anything else malformed raises with the row number.
inline PairFile parse_pair_file(std::istream& in, const std::string& name) {
  PairFile file;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto fields = split_fields(sv);
    double v[8];
    bool numeric = fields.size() == 8;
    if (numeric) {
      for (int i = 0; i < 8 && numeric; ++i) {
        numeric = parse_double(fields[i], v[i]);
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        file.had_header = true;
        continue;
      }
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": expected 8 numeric columns");
    }
    first = false;
    const Box rp(v[0], v[1], v[2], v[3]);
    const Box gt(v[4], v[5], v[6], v[7]);
    const bool reordered = rp.x1 != v[0] || rp.y1 != v[1] || rp.x2 != v[2] ||
                           rp.y2 != v[3] || gt.x1 != v[4] || gt.y1 != v[5] ||
                           gt.x2 != v[6] || gt.y2 != v[7];
    file.rows.push_back(PairRecord{rp, gt, reordered, lineno});
  }
  return file;
}

inline PairFile load_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open for reading");
  }
  return parse_pair_file(in, path);
}

}  // namespace boxeval
