#include "translab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace translab {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string svg_line_plot(const std::vector<SvgSeries>& series, const std::string& title, int width,
                          int height) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (int i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  const int ml = 60, mr = 20, mt = 30, mb = 40;
  auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto Y = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << title
     << "</text>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
     << height - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
     << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = xmin + (xmax - xmin) * k / 4.0, yv = ymin + (ymax - ymin) * k / 4.0;
    os << "<text x=\"" << X(xv) << "\" y=\"" << height - mb + 16
       << "\" text-anchor=\"middle\" font-size=\"10\">" << num(xv) << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << Y(yv) + 4
       << "\" text-anchor=\"end\" font-size=\"10\">" << num(yv) << "</text>\n";
  }
  int ci = 0;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << kColors[ci % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (int i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << num(X(s.x[i])) << "," << num(Y(s.y[i])) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << width - mr - 4 << "\" y=\"" << mt + 14 * (ci + 1)
       << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << kColors[ci % 6] << "\">" << s.label
       << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_heatmap(const Eigen::MatrixXd& values, const std::string& title, int cell) {
  const int nr = int(values.rows()), nc = int(values.cols());
  double lo = 1e300, hi = -1e300;
  for (int j = 0; j < nc; ++j)
    for (int i = 0; i < nr; ++i)
      if (std::isfinite(values(i, j))) {
        lo = std::min(lo, values(i, j));
        hi = std::max(hi, values(i, j));
      }
  if (!(hi > lo)) hi = lo + 1;
  const int w = nc * cell, h = nr * cell + 24;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<text x=\"4\" y=\"14\" font-size=\"12\">" << title << "</text>\n";
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) {
      double v = values(i, j);
      int g = std::isfinite(v) ? int(255 * (v - lo) / (hi - lo)) : 255;
      os << "<rect x=\"" << j * cell << "\" y=\"" << 24 + i * cell << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"rgb(" << g << "," << g << "," << 255 - g
         << ")\"/>\n";
    }
  os << "</svg>\n";
  return os.str();
}

}  // namespace translab
