#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "oinl/errors.hpp"
#include "oinl/grid.hpp"

namespace oinl {

// Debug dump of a complex field: header "x,y,re,im", one line per sample in
// storage order (x-major), coordinates scaled by `length_unit`.
inline void write_field_csv(const ComplexField2D& psi, const std::string& path, double length_unit = 1.0) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << "x,y,re,im\n";
  const Grid2D& g = psi.grid();
  char buf[160];
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) {
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.17g,%.17g\n", g.x(i) * length_unit, g.y(j) * length_unit,
                    psi(i, j).real(), psi(i, j).imag());
      out << buf;
    }
  if (!out) throw IoError(path, "write failed");
}

}  // namespace oinl
