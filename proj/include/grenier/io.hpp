#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "grenier/config.hpp"
#include "grenier/experiments.hpp"
#include "grenier/grid.hpp"

namespace grenier::io {

/// Writes `contents` to a sibling temp file, then renames it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

/// `# grid n=<n> L=<L> t=<t> field=<name>`, then one row per y index with
/// the x index running along the row.
inline std::string field_csv(const ScalarField& f, double t, const std::string& name) {
  const auto& g = f.grid();
  std::string out = "# grid n=" + std::to_string(g.points()) + " L=" + format_double(g.side()) +
                    " t=" + format_double(t) + " field=" + name + "\n";
  for (std::size_t j = 0; j < g.points(); ++j) {
    for (std::size_t i = 0; i < g.points(); ++i) {
      if (i) out += ',';
      out += format_double(f(i, j));
    }
    out += '\n';
  }
  return out;
}

struct FieldHeader {
  std::size_t n = 0;
  double L = 0;
  double t = 0;
  std::string name;
};

/// Reads back a field written by field_csv.
inline std::pair<FieldHeader, ScalarField> parse_field_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  FieldHeader h;
  std::istringstream hs(header);
  std::string tok;
  hs >> tok >> tok;
  if (tok != "grid") throw std::runtime_error("not a field file");
  while (hs >> tok) {
    const auto eq = tok.find('=');
    const auto key = tok.substr(0, eq);
    const auto val = tok.substr(eq + 1);
    if (key == "n") h.n = std::stoul(val);
    else if (key == "L") h.L = std::stod(val);
    else if (key == "t") h.t = std::stod(val);
    else if (key == "field") h.name = val;
  }
  ScalarField f(make_grid(h.L, h.n));
  std::string row;
  for (std::size_t j = 0; j < h.n; ++j) {
    if (!std::getline(in, row)) throw std::runtime_error("field file truncated");
    std::istringstream rs(row);
    std::string cell;
    for (std::size_t i = 0; i < h.n; ++i) {
      if (!std::getline(rs, cell, ',')) throw std::runtime_error("field row too short");
      f(i, j) = std::stod(cell);
    }
  }
  return {h, f};
}

/// step,t,j1,j2,j3x,j3y,j3x_guarded,j3y_guarded
inline std::string series_csv(const std::vector<SeriesSample>& samples) {
  std::string out = "step,t,j1,j2,j3x,j3y,j3x_guarded,j3y_guarded\n";
  for (const auto& s : samples) {
    out += std::to_string(s.step) + ',' + format_double(s.t) + ',' + format_double(s.ratios.j1) +
           ',' + format_double(s.ratios.j2) + ',' + format_double(s.ratios.j3[0]) + ',' +
           format_double(s.ratios.j3[1]) + ',' + (s.ratios.j3_guarded[0] ? '1' : '0') + ',' +
           (s.ratios.j3_guarded[1] ? '1' : '0') + '\n';
  }
  return out;
}

/// eps,indicator_l1,indicator_l2 rows, then `slope,<l1>,<l2>` (empty cells
/// for a slope that could not be fitted).
inline std::string sweep_csv(const SweepResult& r) {
  std::string out = "eps,indicator_l1,indicator_l2\n";
  for (std::size_t i = 0; i < r.eps_values.size(); ++i)
    out += format_double(r.eps_values[i]) + ',' + format_double(r.l1_indicator[i]) + ',' +
           format_double(r.l2_indicator[i]) + '\n';
  auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
  out += "slope," + opt(r.slope_l1) + ',' + opt(r.slope_l2) + '\n';
  return out;
}

}  // namespace grenier::io
