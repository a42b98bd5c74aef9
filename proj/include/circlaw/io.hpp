#pragma once

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "circlaw/ensembles.hpp"
#include "circlaw/gff.hpp"

namespace circlaw {

using nlohmann::json;

// shortest round-trippable decimal form; byte-stable across runs
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_sample_csv(std::ostream& os, const PointSample& s) {
  os << "# ensemble=" << family_name(s.ensemble.family) << " n=" << s.ensemble.n
     << " seed=" << s.seed << "\n";
  os << "re,im\n";
  for (const auto& z : s.points)
    os << fmt_double(z.real()) << "," << fmt_double(z.imag()) << "\n";
}

inline json sample_to_json(const PointSample& s) {
  json j;
  j["schema"] = 1;
  j["ensemble"] = family_name(s.ensemble.family);
  j["n"] = s.ensemble.n;
  j["seed"] = s.seed;
  json pts = json::array();
  for (const auto& z : s.points) pts.push_back({z.real(), z.imag()});
  j["points"] = std::move(pts);
  return j;
}

// running partial sums of the points ordered by argument
inline void write_running_sums_csv(std::ostream& os, const PointSample& s) {
  std::vector<Complex> pts = s.points;
  std::sort(pts.begin(), pts.end(), [](const Complex& a, const Complex& b) {
    return std::arg(a) < std::arg(b);
  });
  os << "# ensemble=" << family_name(s.ensemble.family) << " n=" << s.ensemble.n
     << " seed=" << s.seed << " ordered=argument\n";
  os << "m,re,im\n";
  Complex acc = 0.0;
  for (std::size_t m = 0; m < pts.size(); ++m) {
    acc += pts[m];
    os << (m + 1) << "," << fmt_double(acc.real()) << "," << fmt_double(acc.imag()) << "\n";
  }
}

inline void write_field_grid_csv(std::ostream& os, const FieldGrid& g) {
  os << "# n=" << g.n << " seed=" << g.seed << " resolution=" << g.spec.resolution
     << " half_width=" << fmt_double(g.spec.half_width) << " center_re="
     << fmt_double(g.spec.center.real()) << " center_im=" << fmt_double(g.spec.center.imag())
     << "\n";
  os << "x,y,value,mask\n";
  for (int j = 0; j < g.spec.resolution; ++j)
    for (int i = 0; i < g.spec.resolution; ++i) {
      Cplx z = g.spec.node(i, j);
      os << fmt_double(z.real()) << "," << fmt_double(z.imag()) << ","
         << fmt_double(g.masked(i, j) ? 0.0 : g.at(i, j)) << "," << (g.masked(i, j) ? 1 : 0)
         << "\n";
    }
}

inline json field_grid_meta(const FieldGrid& g) {
  json j;
  j["schema"] = 1;
  j["n"] = g.n;
  j["seed"] = g.seed;
  j["resolution"] = g.spec.resolution;
  j["half_width"] = g.spec.half_width;
  j["center"] = {g.spec.center.real(), g.spec.center.imag()};
  j["mask_fraction"] = g.mask_fraction();
  return j;
}

inline json moment_table_to_json(const RadialMomentTable& t) {
  json j;
  j["schema"] = 1;
  j["ensemble"] = family_name(t.ensemble.family);
  j["n"] = t.ensemble.n;
  j["log_moments"] = t.log_values;
  return j;
}

// debugging aid: full matrix as re,im pairs, row major
inline void write_matrix_csv(std::ostream& os, const ComplexMatrix& a) {
  os << "# n=" << a.dim() << "\n";
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) {
      if (j) os << ",";
      os << fmt_double(a(i, j).real()) << "," << fmt_double(a(i, j).imag());
    }
    os << "\n";
  }
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace circlaw
