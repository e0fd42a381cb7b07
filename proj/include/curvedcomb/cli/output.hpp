#pragma once

// CSV and SVG emitters. Number formatting is locale-independent and fixed so
// identical inputs give byte-identical files.

#include <optional>
#include <string>
#include <vector>

#include "curvedcomb/sweep.hpp"

namespace curvedcomb::cli {

/// Scientific notation, 17 significant digits, '.' separator.
std::string format_sci(double value);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  /// LF line endings, no trailing separator.
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string gain_curve_csv(const SweepResult& result);

/// fd_column, when given, must hold one value per row (mV/g).
std::string sensitivity_csv(const SweepResult& result,
                            const std::optional<std::vector<double>>& fd_column);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Static 800x600 line chart with linear axes and a legend.
std::string line_chart_svg(const ChartSpec& chart);

/// One series per variant from the given row field.
std::vector<Series> series_by_variant(const std::vector<SweepRow>& rows,
                                      double SweepRow::*x,
                                      double SweepRow::*y);

void write_file(const std::string& path, const std::string& contents);

}  // namespace curvedcomb::cli
