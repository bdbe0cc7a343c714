#include "magbell/svg.hpp"

#include "magbell/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace magbell {

namespace {

std::string fmt(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return std::string(buf, p);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

/// Tick spacing of the form {1,2,5}x10^k giving 4-8 ticks over the span.
double nice_step(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

struct Bounds {
  double lo, hi;
  void pad() {
    if (hi <= lo) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double p = 0.05 * (hi - lo);
      lo -= p;
      hi += p;
    }
  }
};

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<PlotSeries>& series) {
  bool any = false;
  Bounds xb{0, 1}, yb{0, 1};
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!any) {
        xb = {x, x};
        yb = {y, y};
        any = true;
      }
      xb.lo = std::min(xb.lo, x);
      xb.hi = std::max(xb.hi, x);
      yb.lo = std::min(yb.lo, y);
      yb.hi = std::max(yb.hi, y);
    }
  if (!any) throw std::invalid_argument("svg_line_plot: no data");
  xb.pad();
  yb.pad();

  const double w = 640, h = 420, ml = 72, mr = 18, mt = 42, mb = 54;
  const double pw = w - ml - mr, ph = h - mt - mb;
  auto px = [&](double x) { return ml + (x - xb.lo) / (xb.hi - xb.lo) * pw; };
  auto py = [&](double y) { return mt + ph - (y - yb.lo) / (yb.hi - yb.lo) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" +
         fmt(h) + "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape(title) + "</text>\n";

  // axes and ticks
  out += "<g stroke=\"black\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(ml + pw) +
         "\" y2=\"" + fmt(mt + ph) + "\"/>\n";
  out += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) + "\" y2=\"" +
         fmt(mt + ph) + "\"/>\n";
  out += "</g>\n";

  const double xs = nice_step(xb.hi - xb.lo);
  for (double t = std::ceil(xb.lo / xs) * xs; t <= xb.hi + 1e-9 * xs; t += xs) {
    out += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(px(t)) +
           "\" y2=\"" + fmt(mt + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(mt + ph + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(t) +
           "</text>\n";
  }
  const double ys = nice_step(yb.hi - yb.lo);
  for (double t = std::ceil(yb.lo / ys) * ys; t <= yb.hi + 1e-9 * ys; t += ys) {
    out += "<line x1=\"" + fmt(ml - 5) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" + fmt(ml) +
           "\" y2=\"" + fmt(py(t)) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(py(t) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(t) +
           "</text>\n";
  }
  out += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(h - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape(x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + fmt(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
         fmt(mt + ph / 2) + ")\">" + escape(y_label) + "</text>\n";

  double legend_y = mt + 8;
  for (const auto& s : series) {
    out += "<!-- series " + s.name + "\n";
    for (const auto& [x, y] : s.points) out += fmt(x) + " " + fmt(y) + "\n";
    out += "-->\n";

    std::string pts;
    for (const auto& [x, y] : s.points) pts += fmt(px(x)) + "," + fmt(py(y)) + " ";
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"" +
           pts + "\"/>\n";
    if (s.markers)
      for (const auto& [x, y] : s.points)
        out += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) +
               "\" r=\"2.2\" fill=\"" + s.color + "\"/>\n";
    out += "<line x1=\"" + fmt(ml + pw - 150) + "\" y1=\"" + fmt(legend_y) + "\" x2=\"" +
           fmt(ml + pw - 126) + "\" y2=\"" + fmt(legend_y) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt(ml + pw - 120) + "\" y=\"" + fmt(legend_y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.name) + "</text>\n";
    legend_y += 16;
  }
  out += "</svg>\n";
  return out;
}

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series) {
  write_text_file(path, svg_line_plot(title, x_label, y_label, series));
}

std::string svg_matrix_bars(const std::string& title, const Eigen::MatrixXd& values,
                            const Eigen::MatrixXd& target,
                            const std::vector<std::string>& labels) {
  const int d = static_cast<int>(values.rows());
  if (values.cols() != d || target.rows() != d || target.cols() != d ||
      static_cast<int>(labels.size()) != d)
    throw std::invalid_argument("svg_matrix_bars: inconsistent dimensions");

  const double cell = 40, gap = 4, ml = 78, mt = 72, mr = 16, mb = 16;
  const double w = ml + d * (cell + gap) + mr;
  const double h = mt + d * (cell + gap) + mb;
  double scale = 0.5;
  scale = std::max(scale, values.cwiseAbs().maxCoeff());
  scale = std::max(scale, target.cwiseAbs().maxCoeff());
  const double unit = (cell * 0.48) / scale;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" +
         fmt(h) + "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape(title) + "</text>\n";

  out += "<!-- entries (row major), then target entries\n";
  for (int i = 0; i < d; ++i) {
    std::string row;
    for (int j = 0; j < d; ++j) row += fmt(values(i, j)) + " ";
    out += row + "\n";
  }
  for (int i = 0; i < d; ++i) {
    std::string row;
    for (int j = 0; j < d; ++j) row += fmt(target(i, j)) + " ";
    out += row + "\n";
  }
  out += "-->\n";

  for (int j = 0; j < d; ++j)
    out += "<text x=\"" + fmt(ml + j * (cell + gap) + cell / 2) + "\" y=\"" + fmt(mt - 10) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape(labels[j]) + "</text>\n";
  for (int i = 0; i < d; ++i)
    out += "<text x=\"" + fmt(ml - 8) + "\" y=\"" +
           fmt(mt + i * (cell + gap) + cell / 2 + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape(labels[i]) + "</text>\n";

  for (int i = 0; i < d; ++i) {
    const double y0 = mt + i * (cell + gap);
    const double mid = y0 + cell / 2;
    out += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mid) + "\" x2=\"" +
           fmt(ml + d * (cell + gap) - gap) + "\" y2=\"" + fmt(mid) +
           "\" stroke=\"#cccccc\" stroke-width=\"0.7\"/>\n";
    for (int j = 0; j < d; ++j) {
      const double x0 = ml + j * (cell + gap);
      const double v = values(i, j);
      const double tgt = target(i, j);
      if (v != 0.0) {
        const double bh = std::abs(v) * unit;
        const double by = v > 0 ? mid - bh : mid;
        out += "<rect x=\"" + fmt(x0 + 6) + "\" y=\"" + fmt(by) + "\" width=\"" +
               fmt(cell - 12) + "\" height=\"" + fmt(bh) + "\" fill=\"" +
               (v > 0 ? std::string("#4878a8") : std::string("#b85450")) +
               "\" fill-opacity=\"0.85\"/>\n";
      }
      if (tgt != 0.0) {
        const double bh = std::abs(tgt) * unit;
        const double by = tgt > 0 ? mid - bh : mid;
        out += "<rect x=\"" + fmt(x0 + 6) + "\" y=\"" + fmt(by) + "\" width=\"" +
               fmt(cell - 12) + "\" height=\"" + fmt(bh) +
               "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"3,2\"/>\n";
      }
    }
  }
  out += "</svg>\n";
  return out;
}

void write_matrix_bars(const std::string& path, const std::string& title,
                       const Eigen::MatrixXd& values, const Eigen::MatrixXd& target,
                       const std::vector<std::string>& labels) {
  write_text_file(path, svg_matrix_bars(title, values, target, labels));
}

}  // namespace magbell
