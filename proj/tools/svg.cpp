#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "entflow/system_spec.hpp"

namespace entflow::cli {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

struct Range {
  double lo = 0, hi = 1;
  double map(double v, double a, double b) const {
    return hi > lo ? a + (v - lo) / (hi - lo) * (b - a) : 0.5 * (a + b);
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void open_canvas(std::ofstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        "font-family=\"sans-serif\">"
     << title << "</text>\n";
}

void axis_labels(std::ofstream& os, const std::string& x_label, const std::string& y_label) {
  os << "<text x=\"" << (kLeft + (kWidth - kLeft - kRight) / 2) << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << (kTop + (kHeight - kTop - kBottom) / 2)
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
        "transform=\"rotate(-90 18 "
     << (kTop + (kHeight - kTop - kBottom) / 2) << ")\">" << y_label << "</text>\n";
}

}  // namespace

void write_svg_scatter(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  Range xr{1e300, -1e300}, yr{1e300, -1e300};
  for (const Series& s : series) {
    for (double v : s.x) {
      xr.lo = std::min(xr.lo, v);
      xr.hi = std::max(xr.hi, v);
    }
    for (double v : s.y) {
      yr.lo = std::min(yr.lo, v);
      yr.hi = std::max(yr.hi, v);
    }
  }
  if (!(xr.hi > xr.lo)) xr = {xr.lo - 1, xr.lo + 1};
  if (!(yr.hi > yr.lo)) yr = {yr.lo - 1, yr.lo + 1};

  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  open_canvas(os, title);

  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\""
     << y0 - y1 << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 5.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * k / 5.0;
    const double px = xr.map(fx, x0, x1);
    const double py = yr.map(fy, y0, y1);
    os << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 4
       << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << px << "\" y=\"" << y0 + 18
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(fx)
       << "</text>\n";
    os << "<line x1=\"" << x0 - 4 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\"" << py
       << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << x0 - 7 << "\" y=\"" << py + 4
       << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(fy)
       << "</text>\n";
  }

  for (const Series& s : series) {
    if (s.as_line) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        os << xr.map(s.x[i], x0, x1) << ',' << yr.map(s.y[i], y0, y1) << ' ';
      os << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        os << "<circle cx=\"" << xr.map(s.x[i], x0, x1) << "\" cy=\"" << yr.map(s.y[i], y0, y1)
           << "\" r=\"2\" fill=\"" << s.color << "\" fill-opacity=\"0.55\"/>\n";
    }
  }
  axis_labels(os, x_label, y_label);
  os << "</svg>\n";
}

void write_svg_heatmap(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<HeatCell>& cells) {
  std::set<double> xs, ys;
  double v_lo = 1e300, v_hi = -1e300;
  for (const HeatCell& c : cells) {
    xs.insert(c.x);
    ys.insert(c.y);
    if (!c.missing) {
      v_lo = std::min(v_lo, c.value);
      v_hi = std::max(v_hi, c.value);
    }
  }
  if (!(v_hi > v_lo)) {
    v_lo -= 1;
    v_hi += 1;
  }
  const std::vector<double> xv(xs.begin(), xs.end());
  const std::vector<double> yv(ys.begin(), ys.end());

  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  open_canvas(os, title);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double cw = (x1 - x0) / static_cast<double>(xv.size());
  const double ch = (y0 - y1) / static_cast<double>(yv.size());

  const auto col_index = [](const std::vector<double>& v, double x) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  for (const HeatCell& c : cells) {
    const double px = x0 + cw * static_cast<double>(col_index(xv, c.x));
    const double py = y0 - ch * static_cast<double>(col_index(yv, c.y) + 1);
    std::string fill = "#bbbbbb";
    if (!c.missing) {
      const double f = (c.value - v_lo) / (v_hi - v_lo);
      const int r = static_cast<int>(std::lround(255 * (1.0 - f)));
      const int g = static_cast<int>(std::lround(80 + 150 * f));
      char buf[8];
      std::snprintf(buf, sizeof(buf), "#%02x%02x50", r, g);
      fill = buf;
    }
    os << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << cw << "\" height=\"" << ch
       << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
    os << "<text x=\"" << px + cw / 2 << "\" y=\"" << py + ch / 2 + 4
       << "\" text-anchor=\"middle\" font-size=\"10\" fill=\"white\" "
          "font-family=\"sans-serif\">"
       << (c.missing ? std::string("n/a") : fmt(c.value)) << "</text>\n";
  }
  for (std::size_t i = 0; i < xv.size(); ++i)
    os << "<text x=\"" << x0 + cw * (static_cast<double>(i) + 0.5) << "\" y=\"" << y0 + 18
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(xv[i])
       << "</text>\n";
  for (std::size_t i = 0; i < yv.size(); ++i)
    os << "<text x=\"" << x0 - 7 << "\" y=\"" << y0 - ch * (static_cast<double>(i) + 0.5) + 4
       << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(yv[i])
       << "</text>\n";
  axis_labels(os, x_label, y_label);
  os << "</svg>\n";
}

}  // namespace entflow::cli
