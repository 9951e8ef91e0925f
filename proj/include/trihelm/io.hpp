#pragma once

// Text emission: CSV field tables and plain-text diagnostics.  Everything is
// deterministic (fixed 15-significant-digit formatting, lexicographic point
// order) so repeated runs produce byte-identical files.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "trihelm/errors.hpp"
#include "trihelm/lattice.hpp"
#include "trihelm/solver.hpp"

namespace trihelm {

// Lattice-coordinate table, one row per window point outside the scatterer
// interior.  Rows follow the grid's lexicographic scan order.
inline std::string field_csv(const FieldGrid& grid) {
  std::ostringstream os;
  os << std::setprecision(15);
  os << "x1,x2,re,im,abs\n";
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    if (grid.hole[i]) continue;
    Complex v = grid.values[i];
    os << grid.points[i].x1 << ',' << grid.points[i].x2 << ',' << v.real() << ',' << v.imag()
       << ',' << std::abs(v) << '\n';
  }
  return os.str();
}

// Same rows with the lattice map applied, for plotting in the plane.
inline std::string embedded_field_csv(const FieldGrid& grid) {
  std::ostringstream os;
  os << std::setprecision(15);
  os << "ex,ey,re,im,abs\n";
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    if (grid.hole[i]) continue;
    EmbeddedPoint e = embed(grid.points[i]);
    Complex v = grid.values[i];
    os << e.ex << ',' << e.ey << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << '\n';
  }
  return os.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);  // binary: no newline translation
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << text;
  os.flush();
  if (!os) throw Error("write failed for " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string() + " for reading");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace trihelm
