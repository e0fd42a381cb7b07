#include "curvedcomb/cli/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace curvedcomb::cli {

namespace {

std::string format_fixed(double value, int decimals) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, decimals);
  if (ec != std::errc{}) return "0";
  return std::string(buf.data(), end);
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Tick spacing of 1, 2 or 5 times a power of ten.
double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

std::string tick_label(double v, double step) {
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  if (a >= 1e4 || a < 1e-3) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::scientific, 2);
    return ec == std::errc{} ? std::string(buf.data(), end) : "?";
  }
  const int decimals =
      std::clamp(static_cast<int>(-std::floor(std::log10(step))), 0, 6);
  return format_fixed(v, decimals);
}

constexpr std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
};

}  // namespace

std::string format_sci(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::scientific, 16);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

CsvWriter::CsvWriter(std::vector<std::string> header)
    : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::logic_error("csv row width does not match header");
  }
  rows_.push_back(std::move(cells));
}

std::string CsvWriter::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string gain_curve_csv(const SweepResult& result) {
  CsvWriter csv({"variant", "accel_g", "displacement_m", "c1_f", "c2_f", "gain",
                 "v_out_v"});
  for (const SweepRow& r : result.rows) {
    csv.add_row({std::string(to_string(r.variant)), format_sci(r.accel_g),
                 format_sci(r.displacement_m), format_sci(r.c1_f),
                 format_sci(r.c2_f), format_sci(r.gain), format_sci(r.v_out_v)});
  }
  return csv.str();
}

std::string sensitivity_csv(const SweepResult& result,
                            const std::optional<std::vector<double>>& fd_column) {
  std::vector<std::string> header = {"variant",   "arc_length_m", "radius_m",
                                     "phi_rad",   "s_mv_per_g",
                                     "s_net_mv_per_g"};
  if (fd_column) {
    if (fd_column->size() != result.rows.size()) {
      throw std::logic_error("fd column length does not match rows");
    }
    header.push_back("fd_s_mv_per_g");
  }
  CsvWriter csv(std::move(header));
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& r = result.rows[i];
    std::vector<std::string> cells = {
        std::string(to_string(r.variant)), format_sci(r.arc_length_m),
        format_sci(r.radius_m),           format_sci(r.phi_rad),
        format_sci(r.s_mv_per_g),         format_sci(r.s_net_mv_per_g)};
    if (fd_column) cells.push_back(format_sci((*fd_column)[i]));
    csv.add_row(std::move(cells));
  }
  return csv.str();
}

std::vector<Series> series_by_variant(const std::vector<SweepRow>& rows,
                                      double SweepRow::*x,
                                      double SweepRow::*y) {
  std::vector<Series> out;
  for (const SweepRow& r : rows) {
    const std::string name(to_string(r.variant));
    if (out.empty() || out.back().name != name) out.push_back({name, {}, {}});
    out.back().x.push_back(r.*x);
    out.back().y.push_back(r.*y);
  }
  return out;
}

std::string line_chart_svg(const ChartSpec& chart) {
  constexpr double kWidth = 800;
  constexpr double kHeight = 600;
  constexpr double kLeft = 90;
  constexpr double kRight = 190;  // legend column
  constexpr double kTop = 50;
  constexpr double kBottom = 70;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool any = false;
  for (const Series& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!any) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        any = true;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  auto widen = [](double& lo, double& hi) {
    if (hi - lo <= 1e-300 * std::max(1.0, std::abs(hi))) {
      const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
      lo -= pad;
      hi += pad;
    }
  };
  widen(x_min, x_max);
  widen(y_min, y_max);
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) {
    return kTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg += "<text x=\"" + format_fixed(kLeft + plot_w / 2, 1) +
         "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" +
         escape_xml(chart.title) + "</text>\n";

  // Ticks and grid.
  const double xs = nice_step(x_max - x_min, 6);
  for (double t = std::ceil(x_min / xs) * xs; t <= x_max + 1e-9 * xs; t += xs) {
    const std::string x = format_fixed(px(t), 2);
    svg += "<line x1=\"" + x + "\" y1=\"" + format_fixed(kTop, 2) + "\" x2=\"" +
           x + "\" y2=\"" + format_fixed(kTop + plot_h, 2) +
           "\" stroke=\"#e0e0e0\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + format_fixed(kTop + plot_h + 18, 2) +
           "\" text-anchor=\"middle\">" + tick_label(t, xs) + "</text>\n";
  }
  const double ys = nice_step(y_max - y_min, 6);
  for (double t = std::ceil(y_min / ys) * ys; t <= y_max + 1e-9 * ys; t += ys) {
    const std::string y = format_fixed(py(t), 2);
    svg += "<line x1=\"" + format_fixed(kLeft, 2) + "\" y1=\"" + y + "\" x2=\"" +
           format_fixed(kLeft + plot_w, 2) + "\" y2=\"" + y +
           "\" stroke=\"#e0e0e0\"/>\n";
    svg += "<text x=\"" + format_fixed(kLeft - 8, 2) + "\" y=\"" + y +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\">" +
           tick_label(t, ys) + "</text>\n";
  }
  svg += "<rect x=\"" + format_fixed(kLeft, 2) + "\" y=\"" + format_fixed(kTop, 2) +
         "\" width=\"" + format_fixed(plot_w, 2) + "\" height=\"" +
         format_fixed(plot_h, 2) + "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + format_fixed(kLeft + plot_w / 2, 1) + "\" y=\"" +
         format_fixed(kHeight - 20, 1) + "\" text-anchor=\"middle\">" +
         escape_xml(chart.x_label) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + format_fixed(kTop + plot_h / 2, 1) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         format_fixed(kTop + plot_h / 2, 1) + ")\">" + escape_xml(chart.y_label) +
         "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const Series& s = chart.series[k];
    const char* colour = kPalette[k % kPalette.size()];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) points += ' ';
      points += format_fixed(px(s.x[i]), 2) + "," + format_fixed(py(s.y[i]), 2);
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    const double ly = kTop + 10 + 22.0 * static_cast<double>(k);
    const double lx = kLeft + plot_w + 15;
    svg += "<line x1=\"" + format_fixed(lx, 2) + "\" y1=\"" + format_fixed(ly, 2) +
           "\" x2=\"" + format_fixed(lx + 24, 2) + "\" y2=\"" + format_fixed(ly, 2) +
           "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + format_fixed(lx + 30, 2) + "\" y=\"" +
           format_fixed(ly, 2) + "\" dominant-baseline=\"middle\">" +
           escape_xml(s.name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace curvedcomb::cli
