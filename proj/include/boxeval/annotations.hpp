// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#pragma once

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "boxeval/text.hpp"

namespace boxeval {

/// A ground-truth box size, (width, height).
using SizePoint = std::array<double, 2>;

struct AnnotationSet {
  std::vector<SizePoint> sizes;
  std::string source;
  std::size_t image_count = 0;
  std::size_t total_annotations = 0;
  std::size_t dropped = 0;  // boxes with non-positive width or height
  bool normalized = false;
};

enum class AnnotationFormat { CocoJson, Csv };

inline AnnotationFormat parse_annotation_format(std::string_view name) {
  if (name == "coco_json") return AnnotationFormat::CocoJson;
  if (name == "csv") return AnnotationFormat::Csv;
  throw std::invalid_argument("unknown annotation format: " +
                              std::string(name));
}

namespace detail {

inline AnnotationSet load_coco_parsed(const nlohmann::json& doc,
                                      const std::string& name,
                                      bool normalize) {
  AnnotationSet set;
  set.source = name;
  set.normalized = normalize;

  struct ImageDims {
    double w, h;
  };
  std::unordered_map<std::int64_t, ImageDims> images;
  if (doc.contains("images")) {
    for (const auto& img : doc.at("images")) {
      if (!img.contains("id")) {
        throw std::runtime_error(name + ": image entry without an id");
      }
      ImageDims dims{0.0, 0.0};
      if (img.contains("width")) dims.w = img.at("width").get<double>();
      if (img.contains("height")) dims.h = img.at("height").get<double>();
      images.emplace(img.at("id").get<std::int64_t>(), dims);
    }
  }
  set.image_count = images.size();

  if (!doc.contains("annotations") || !doc.at("annotations").is_array()) {
    throw std::runtime_error(name + ": no annotations array");
  }
  std::size_t idx = 0;
  for (const auto& ann : doc.at("annotations")) {
    ++idx;
    if (!ann.contains("bbox") || !ann.at("bbox").is_array() ||
        ann.at("bbox").size() != 4) {
      throw std::runtime_error(name + ": annotation " + std::to_string(idx) +
                               " has no [x, y, w, h] bbox");
    }
    ++set.total_annotations;
    double w = ann.at("bbox")[2].get<double>();
    double h = ann.at("bbox")[3].get<double>();
    if (normalize) {
      if (!ann.contains("image_id")) {
        throw std::runtime_error(name + ": annotation " +
                                 std::to_string(idx) +
                                 " has no image_id to normalize by");
      }
      const auto it = images.find(ann.at("image_id").get<std::int64_t>());
      if (it == images.end() || it->second.w <= 0.0 || it->second.h <= 0.0) {
        throw std::runtime_error(name + ": annotation " +
                                 std::to_string(idx) +
                                 " references an unknown or sizeless image");
      }
      w /= it->second.w;
      h /= it->second.h;
    }
    if (w > 0.0 && h > 0.0) {
      set.sizes.push_back({w, h});
    } else {
      ++set.dropped;
    }
  }
  return set;
}

inline AnnotationSet load_coco(std::istream& in, const std::string& name,
                               bool normalize) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(name + ": " + e.what());
  }
  try {
    return load_coco_parsed(doc, name, normalize);
  } catch (const nlohmann::json::exception& e) {
    // wrong element types and similar structural problems
    throw std::runtime_error(name + ": " + e.what());
  }
}

inline AnnotationSet load_size_csv(std::istream& in, const std::string& name) {
  AnnotationSet set;
  set.source = name;
  std::string line;
  std::size_t lineno = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto fields = split_fields(sv);
    double w = 0.0, h = 0.0;
    const bool numeric = fields.size() == 2 && parse_double(fields[0], w) &&
                         parse_double(fields[1], h);
    if (!numeric) {
      if (first_data) {  // header row
        first_data = false;
        continue;
      }
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": expected two numeric columns (w,h)");
    }
    first_data = false;
    ++set.total_annotations;
    if (w > 0.0 && h > 0.0) {
      set.sizes.push_back({w, h});
    } else {
      ++set.dropped;
    }
  }
  return set;
}

}  // namespace detail

inline AnnotationSet load_annotations(std::istream& in,
                                      const std::string& name,
                                      AnnotationFormat format,
                                      bool normalize = false) {
  AnnotationSet set = format == AnnotationFormat::CocoJson
                          ? detail::load_coco(in, name, normalize)
                          : detail::load_size_csv(in, name);
  if (set.sizes.empty()) {
    throw std::domain_error(name + ": no usable boxes after filtering");
  }
  return set;
}

inline AnnotationSet load_annotations(const std::string& path,
                                      AnnotationFormat format,
                                      bool normalize = false) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open for reading");
  }
  return load_annotations(in, path, format, normalize);
}

}  // namespace boxeval
