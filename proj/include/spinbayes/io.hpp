#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace spinbayes {

/// Shortest decimal that round-trips to the same double ('.' separator, no locale).
std::string format_double(double v);

using Cell = std::variant<double, std::int64_t, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
  std::string str() const;
};

/// Creates parent directories as needed; IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& content);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
std::string read_text(const std::filesystem::path& path);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = true;
  bool logy = true;
  std::vector<PlotSeries> series;
};

/// Self-contained SVG line plot; non-positive values are skipped on log axes.
std::string render_svg(const PlotSpec& spec);

}  // namespace spinbayes
