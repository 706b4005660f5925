#include "qkr/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qkr {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string svg_line_plot(const std::vector<SvgCurve>& curves, const SvgOptions& opt) {
  const double margin_l = 70, margin_r = 20, margin_t = opt.title.empty() ? 20 : 40,
               margin_b = 50;
  const double plot_w = opt.width - margin_l - margin_r;
  const double plot_h = opt.height - margin_t - margin_b;

  const auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
  const auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& c : curves) {
    for (size_t i = 0; i < c.x.size(); ++i) {
      if (opt.log_x && !(c.x[i] > 0.0)) continue;
      if (opt.log_y && !(c.y[i] > opt.log_floor)) continue;
      x_lo = std::min(x_lo, tx(c.x[i]));
      x_hi = std::max(x_hi, tx(c.x[i]));
      y_lo = std::min(y_lo, ty(c.y[i]));
      y_hi = std::max(y_hi, ty(c.y[i]));
    }
  }
  if (!(x_lo < x_hi)) { x_lo -= 0.5; x_hi += 0.5; }
  if (!(y_lo < y_hi)) { y_lo -= 0.5; y_hi += 0.5; }

  const auto px = [&](double v) { return margin_l + (tx(v) - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double v) { return margin_t + (y_hi - ty(v)) / (y_hi - y_lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    svg << "<text x=\"" << opt.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << opt.title << "</text>\n";
  }
  svg << "<rect x=\"" << margin_l << "\" y=\"" << margin_t << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Axis ticks: 5 per axis, labelled in data units (10^t on log axes).
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / 4.0;
    const double fy = y_lo + (y_hi - y_lo) * i / 4.0;
    const double gx = margin_l + plot_w * i / 4.0;
    const double gy = margin_t + plot_h - plot_h * i / 4.0;
    svg << "<line x1=\"" << gx << "\" y1=\"" << margin_t + plot_h << "\" x2=\"" << gx
        << "\" y2=\"" << margin_t + plot_h + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << gx << "\" y=\"" << margin_t + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << (opt.log_x ? "1e" + num(fx) : num(fx)) << "</text>\n"
        << "<line x1=\"" << margin_l - 5 << "\" y1=\"" << gy << "\" x2=\"" << margin_l
        << "\" y2=\"" << gy << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << margin_l - 8 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << (opt.log_y ? "1e" + num(fy) : num(fy)) << "</text>\n";
  }
  svg << "<text x=\"" << margin_l + plot_w / 2 << "\" y=\"" << opt.height - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << opt.x_label
      << "</text>\n"
      << "<text x=\"14\" y=\"" << margin_t + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 14 " << margin_t + plot_h / 2 << ")\">" << opt.y_label
      << "</text>\n";

  for (size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\" points=\"";
    bool any = false;
    for (size_t i = 0; i < c.x.size(); ++i) {
      if (opt.log_x && !(c.x[i] > 0.0)) continue;
      if (opt.log_y && !(c.y[i] > opt.log_floor)) continue;
      svg << num(px(c.x[i])) << ',' << num(py(c.y[i])) << ' ';
      any = true;
    }
    svg << "\"/>\n";
    if (!c.label.empty() && any) {
      const double lx = margin_l + plot_w - 10;
      const double ly = margin_t + 16 + 16 * static_cast<double>(ci);
      svg << "<text x=\"" << lx << "\" y=\"" << ly << "\" text-anchor=\"end\" "
          << "font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">" << c.label
          << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qkr
