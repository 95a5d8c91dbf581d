#include "harness/emit.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace slicemean::harness {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  if (rows.empty()) fail(ErrorCode::InvalidArgument, "no sweep rows to write");
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    out += std::to_string(r.n);
    for (double v : {r.quad_value, r.quad_err, r.mc_value, r.mc_stderr, r.limit_value, r.abs_error,
                     r.wall_ms}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
// Exact zeros are drawn at this floor on the log axis.
constexpr double kErrorFloor = 1e-17;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string render_sweep_svg(const std::vector<SweepRow>& rows) {
  if (rows.empty()) fail(ErrorCode::InvalidArgument, "no sweep rows to plot");
  struct Series {
    const char* label;
    const char* color;
    std::vector<double> y;
  };
  std::array<Series, 2> series{Series{"quadrature |error|", "#1f77b4", {}},
                               Series{"Monte Carlo |error|", "#d62728", {}}};
  std::vector<double> lx;
  for (const SweepRow& r : rows) {
    lx.push_back(std::log10(static_cast<double>(r.n)));
    series[0].y.push_back(std::log10(std::max(r.abs_error, kErrorFloor)));
    series[1].y.push_back(std::log10(std::max(std::abs(r.mc_value - r.limit_value), kErrorFloor)));
  }
  double x_lo = std::floor(*std::min_element(lx.begin(), lx.end()));
  double x_hi = std::ceil(*std::max_element(lx.begin(), lx.end()));
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  double y_lo = 100.0, y_hi = -100.0;
  for (const auto& s : series) {
    y_lo = std::min(y_lo, *std::min_element(s.y.begin(), s.y.end()));
    y_hi = std::max(y_hi, *std::max_element(s.y.begin(), s.y.end()));
  }
  y_lo = std::floor(y_lo);
  y_hi = std::ceil(y_hi);
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double v) { return kTop + (y_hi - v) / (y_hi - y_lo) * ph; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">Slice mean error vs N (log-log)</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t = x_lo; t <= x_hi + 1e-9; t += 1.0) {
    svg << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << kTop + ph << "\" x2=\"" << fmt(px(t))
        << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(px(t)) << "\" y=\"" << kTop + ph + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e" << t
        << "</text>\n";
  }
  const double y_step = std::max(1.0, std::ceil((y_hi - y_lo) / 10.0));
  for (double t = y_lo; t <= y_hi + 1e-9; t += y_step) {
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(py(t)) << "\" x2=\"" << kLeft
        << "\" y2=\"" << fmt(py(t)) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(py(t) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" << t
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">N</text>\n";
  double legend_y = kTop + 16;
  for (const auto& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < lx.size(); ++i) {
      svg << (i ? " " : "") << fmt(px(lx[i])) << ',' << fmt(py(s.y[i]));
    }
    svg << "\"/>\n"
        << "<text x=\"" << kLeft + pw - 10 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << s.color
        << "\">" << s.label << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace slicemean::harness
