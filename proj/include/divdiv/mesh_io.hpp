#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "divdiv/mesh.hpp"

namespace divdiv {

/// Plain-text mesh: one "x y" line per vertex, a blank line, then one
/// "i j k" line per cell (0-based). Clockwise cells are reoriented.
inline TriMesh read_mesh(std::istream& in) {
  std::vector<Vec2> verts;
  std::vector<std::array<int, 3>> cells;
  std::string line;
  bool in_cells = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      if (!verts.empty()) in_cells = true;
      continue;
    }
    std::istringstream ls(line);
    if (!in_cells) {
      double x, y;
      if (!(ls >> x >> y)) throw std::invalid_argument("mesh line " + std::to_string(lineno) + ": expected \"x y\"");
      verts.emplace_back(x, y);
    } else {
      std::array<int, 3> c;
      if (!(ls >> c[0] >> c[1] >> c[2])) throw std::invalid_argument("mesh line " + std::to_string(lineno) + ": expected \"i j k\"");
      cells.push_back(c);
    }
  }
  if (verts.empty() || cells.empty()) throw std::invalid_argument("mesh: missing vertex or cell section");
  return TriMesh(std::move(verts), std::move(cells));
}

inline void write_mesh(std::ostream& out, const TriMesh& m) {
  out.precision(17);
  for (const auto& v : m.vertices()) out << v.x() << ' ' << v.y() << '\n';
  out << '\n';
  for (const auto& c : m.cells()) out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
}

/// "square:n" or a path to a mesh file.
inline TriMesh load_mesh(const std::string& spec) {
  if (spec.rfind("square:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(spec.substr(7));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad mesh spec: " + spec);
    }
    return structured_unit_square(n);
  }
  std::ifstream f(spec);
  if (!f) throw std::invalid_argument("cannot open mesh file: " + spec);
  return read_mesh(f);
}

}  // namespace divdiv
