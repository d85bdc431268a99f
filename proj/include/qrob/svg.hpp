#pragma once

#include <string>
#include <vector>

namespace qrob::svg {

struct Series {
  std::string label;
  std::string color = "#1f6fb2";
  std::vector<double> x, y;
  std::vector<double> yerr;  // optional, same length as y
};

// Self-contained SVG: axes with min/max tick labels, one polyline per
// series, optional error bars, and one dashed vertical marker per entry of
// `markers`. Deterministic byte output for identical inputs.
std::string render(const std::vector<Series>& series, const std::vector<double>& markers,
                   const std::string& title);

void write(const std::vector<Series>& series, const std::vector<double>& markers,
           const std::string& title, const std::string& path);

}  // namespace qrob::svg
