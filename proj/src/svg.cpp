#include "rigidity/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace rigidity {

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 40.0;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string spectrum_scatter_svg(const SpectrumSample& sample, const EnsembleParams& params) {
  const double scale = sample.rescaled ? std::sqrt(static_cast<double>(params.n()) / params.m()) : 1.0;
  const int shells = shell_index(params.m());
  // Frame the outermost circle and every eigenvalue.
  double extent = radius(shells, params) * scale;
  for (const auto& pt : sample.points) extent = std::max(extent, pt.modulus);
  extent *= 1.05;
  const double half = kSize / 2.0;
  const double unit = (half - kMargin) / extent;
  auto px = [&](Complex z) { return std::make_pair(half + unit * z.real(), half - unit * z.imag()); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize + 20
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize + 20 << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int i = 1; i <= shells; ++i) {
    out << "<circle class=\"annulus\" cx=\"" << num(half) << "\" cy=\"" << num(half) << "\" r=\""
        << num(unit * radius(i, params) * scale) << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.8\"/>\n";
  }
  for (const auto& pt : predicted_lattice(params).points) {
    const auto [x, y] = px(std::polar(pt.modulus * scale, pt.argument));
    out << "<rect class=\"predicted\" x=\"" << num(x - 2.5) << "\" y=\"" << num(y - 2.5)
        << "\" width=\"5\" height=\"5\" fill=\"none\" stroke=\"#d62728\"/>\n";
  }
  for (const auto& pt : sample.points) {
    const auto [x, y] = px(pt.value);
    out << "<ellipse class=\"eigenvalue\" cx=\"" << num(x) << "\" cy=\"" << num(y)
        << "\" rx=\"2.5\" ry=\"2.5\" fill=\"#1f77b4\"/>\n";
  }
  out << "<text x=\"8\" y=\"" << kSize + 14 << "\" font-size=\"11\" font-family=\"sans-serif\">n=" << params.n()
      << " m=" << params.m() << " trial " << sample.trial << (sample.rescaled ? " (rescaled)" : "")
      << ": dots eigenvalues, squares predicted locations, circles r_i</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string tail_plot_svg(const std::string& title, const std::string& x_label, const std::vector<TailSeries>& series,
                          int trials) {
  const double floor_value = 1.0 / (2.0 * std::max(trials, 1));
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_hi = 1.0;
  for (const auto& s : series) {
    for (double x : s.x) {
      if (!std::isfinite(x)) continue;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
    }
    for (double y : s.y)
      if (std::isfinite(y)) y_hi = std::max(y_hi, y);
  }
  if (!(x_lo < x_hi)) {
    x_lo = std::isfinite(x_lo) ? x_lo - 1.0 : 0.0;
    x_hi = x_lo + 2.0;
  }
  const double ly_lo = std::log10(floor_value), ly_hi = std::log10(y_hi);
  const double w = kSize + 160.0, h = kSize;
  const double plot_w = kSize - 2 * kMargin, plot_h = h - 3 * kMargin;
  auto px = [&](double x) { return kMargin + plot_w * (x - x_lo) / (x_hi - x_lo); };
  auto py = [&](double y) {
    const double ly = std::log10(std::max(y, floor_value));
    return 1.5 * kMargin + plot_h * (1.0 - (ly - ly_lo) / (ly_hi - ly_lo));
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << ' ' << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kMargin << "\" y=\"20\" font-size=\"13\" font-family=\"sans-serif\">" << escape(title)
      << "</text>\n";
  out << "<rect x=\"" << kMargin << "\" y=\"" << 1.5 * kMargin << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(ly_lo)); d <= static_cast<int>(std::floor(ly_hi)); ++d) {
    const double y = py(std::pow(10.0, d));
    out << "<text x=\"4\" y=\"" << num(y + 4) << "\" font-size=\"10\" font-family=\"sans-serif\">1e" << d
        << "</text>\n";
  }
  out << "<text x=\"" << kMargin + plot_w / 2 << "\" y=\"" << 1.5 * kMargin + plot_h + 28
      << "\" font-size=\"11\" font-family=\"sans-serif\">" << escape(x_label) << " [" << num(x_lo) << ", "
      << num(x_hi) << "]</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    out << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j) {
      if (!std::isfinite(s.x[j]) || std::isnan(s.y[j])) continue;
      out << num(px(s.x[j])) << ',' << num(py(s.y[j])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << kMargin + plot_w + 10 << "\" y=\"" << 1.5 * kMargin + 16 * (k + 1) << "\" fill=\"" << color
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << escape(s.name) << "</text>\n";
  }
  out << "<text class=\"caption\" x=\"" << kMargin << "\" y=\"" << h - 8
      << "\" font-size=\"10\" font-family=\"sans-serif\">log scale; values below 1/(2T) = " << num(floor_value)
      << " (T = " << trials << ", zeros included) are drawn at that floor</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace rigidity
