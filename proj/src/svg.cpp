#include "qrob/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "qrob/error.hpp"
#include "qrob/json_io.hpp"

namespace qrob::svg {

namespace {

constexpr double W = 640.0, H = 440.0;
constexpr double ML = 64.0, MR = 20.0, MT = 40.0, MB = 48.0;

std::string num(double v) {
  // two decimals are enough for pixel coordinates and keep files small
  char buf[32];
  const double r = std::round(v * 100.0) / 100.0;
  auto res = std::to_chars(buf, buf + sizeof(buf), r, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string render(const std::vector<Series>& series, const std::vector<double>& markers,
                   const std::string& title) {
  std::size_t points = 0;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw InputError("svg series with mismatched x/y");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      ++points;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      double lo = s.y[i], hi = s.y[i];
      if (!s.yerr.empty()) {
        lo -= s.yerr[i];
        hi += s.yerr[i];
      }
      ymin = std::min(ymin, lo);
      ymax = std::max(ymax, hi);
    }
  }
  if (points < 2) throw InputError("svg needs at least two finite points");
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) {
    ymax += 0.5;
    ymin -= 0.5;
  }
  const double px = (W - ML - MR) / (xmax - xmin);
  const double py = (H - MT - MB) / (ymax - ymin);
  auto X = [&](double x) { return ML + (x - xmin) * px; };
  auto Y = [&](double y) { return H - MB - (y - ymin) * py; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
         num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">" +
         title + "</text>\n";
  // axes
  out += "<line x1=\"" + num(ML) + "\" y1=\"" + num(H - MB) + "\" x2=\"" + num(W - MR) +
         "\" y2=\"" + num(H - MB) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(ML) + "\" y1=\"" + num(MT) + "\" x2=\"" + num(ML) + "\" y2=\"" +
         num(H - MB) + "\" stroke=\"black\"/>\n";
  // tick labels at the corners
  out += "<text x=\"" + num(ML) + "\" y=\"" + num(H - MB + 18) +
         "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">" +
         io::fmt_double(xmin) + "</text>\n";
  out += "<text x=\"" + num(W - MR) + "\" y=\"" + num(H - MB + 18) +
         "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">" +
         io::fmt_double(xmax) + "</text>\n";
  out += "<text x=\"" + num(ML - 6) + "\" y=\"" + num(H - MB + 4) +
         "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" +
         io::fmt_double(ymin) + "</text>\n";
  out += "<text x=\"" + num(ML - 6) + "\" y=\"" + num(MT + 4) +
         "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" +
         io::fmt_double(ymax) + "</text>\n";

  for (double mq : markers) {
    if (mq < xmin || mq > xmax) continue;
    out += "<line class=\"kink-marker\" x1=\"" + num(X(mq)) + "\" y1=\"" + num(MT) +
           "\" x2=\"" + num(X(mq)) + "\" y2=\"" + num(H - MB) +
           "\" stroke=\"#c02020\" stroke-dasharray=\"4 3\"/>\n";
  }

  double ly = MT + 14.0;
  for (const auto& s : series) {
    if (!s.yerr.empty()) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.y[i]) || s.yerr[i] <= 0.0) continue;
        out += "<line x1=\"" + num(X(s.x[i])) + "\" y1=\"" + num(Y(s.y[i] - s.yerr[i])) +
               "\" x2=\"" + num(X(s.x[i])) + "\" y2=\"" + num(Y(s.y[i] + s.yerr[i])) +
               "\" stroke=\"" + s.color + "\" stroke-width=\"1\" opacity=\"0.6\"/>\n";
      }
    }
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      if (!first) out += ' ';
      first = false;
      out += num(X(s.x[i])) + "," + num(Y(s.y[i]));
    }
    out += "\"/>\n";
    if (!s.label.empty()) {
      out += "<text x=\"" + num(W - MR - 6) + "\" y=\"" + num(ly) +
             "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\" fill=\"" +
             s.color + "\">" + s.label + "</text>\n";
      ly += 14.0;
    }
  }
  out += "</svg>\n";
  return out;
}

void write(const std::vector<Series>& series, const std::vector<double>& markers,
           const std::string& title, const std::string& path) {
  io::write_file_atomic(path, render(series, markers, title));
}

}  // namespace qrob::svg
