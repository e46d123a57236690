#include "pcbot/svg.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <ostream>

#include "pcbot/io.hpp"

namespace pcbot::io {

namespace {

constexpr double kSize = 600.0;
constexpr double kMargin = 40.0;

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#2ca02c", "#9467bd",
                                              "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double min_x, min_y, scale;
  // Fixed precision keeps files byte-identical and compact.
  std::string x(double v) const { return fixed(kMargin + (v - min_x) * scale); }
  std::string y(double v) const { return fixed(kSize - kMargin - (v - min_y) * scale); }
  static std::string fixed(double v) {
    return format_number(static_cast<double>(static_cast<long long>(v * 100.0 + (v < 0 ? -0.5 : 0.5))) / 100.0);
  }
};

}  // namespace

void write_svg(std::ostream& out, const SvgPlot& plot) {
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = lo_x;
  double hi_x = -lo_x;
  double hi_y = -lo_x;
  auto grow = [&](const Vec2& p) {
    lo_x = std::min(lo_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_x = std::max(hi_x, p.x);
    hi_y = std::max(hi_y, p.y);
  };
  for (const auto& run : plot.runs)
    for (const auto& p : run) grow(p);
  for (const auto& p : plot.expected) grow(p);
  if (!(lo_x <= hi_x)) lo_x = lo_y = hi_x = hi_y = 0.0;
  const double extent = std::max({hi_x - lo_x, hi_y - lo_y, 1e-3});
  const Frame f{lo_x - 0.5 * (extent - (hi_x - lo_x)), lo_y - 0.5 * (extent - (hi_y - lo_y)),
                (kSize - 2.0 * kMargin) / extent};

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
      << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(plot.title) << "</text>\n";

  // Scale bar: 10 mm.
  const double bar = 0.01 * f.scale;
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kSize - 15 << "\" x2=\""
      << Frame::fixed(kMargin + bar) << "\" y2=\"" << kSize - 15
      << "\" stroke=\"black\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << kMargin << "\" y=\"" << kSize - 20
      << "\" font-family=\"sans-serif\" font-size=\"10\">10 mm</text>\n";

  if (!plot.expected.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#f2c200\" stroke-width=\"6\" stroke-opacity=\"0.6\" points=\"";
    for (std::size_t i = 0; i < plot.expected.size(); ++i)
      out << (i ? " " : "") << f.x(plot.expected[i].x) << ',' << f.y(plot.expected[i].y);
    out << "\"/>\n";
  }

  for (std::size_t r = 0; r < plot.runs.size(); ++r) {
    const auto& run = plot.runs[r];
    const char* colour = kPalette[r % kPalette.size()];
    out << "<g id=\"run" << r << "\">\n<path fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1\" d=\"";
    for (std::size_t i = 0; i < run.size(); ++i)
      out << (i ? " L" : "M") << f.x(run[i].x) << ' ' << f.y(run[i].y);
    out << "\"/>\n";
    for (std::size_t i = 1; i < run.size(); ++i)
      out << "<circle cx=\"" << f.x(run[i].x) << "\" cy=\"" << f.y(run[i].y)
          << "\" r=\"1.5\" fill=\"" << colour << "\"/>\n";
    if (!run.empty()) {
      const double cx = kMargin + (run[0].x - f.min_x) * f.scale;
      const double cy = kSize - kMargin - (run[0].y - f.min_y) * f.scale;
      for (double s : {-4.0, 4.0})
        out << "<line x1=\"" << Frame::fixed(cx - 4) << "\" y1=\"" << Frame::fixed(cy - s)
            << "\" x2=\"" << Frame::fixed(cx + 4) << "\" y2=\"" << Frame::fixed(cy + s)
            << "\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace pcbot::io
