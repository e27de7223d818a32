#include "spinbayes/io.hpp"

#include "spinbayes/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace spinbayes {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

std::string xml_escape(const std::string& s) {
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

std::string fixed(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(2);
  os << std::fixed << v;
  return os.str();
}

std::string tick_label(double v, bool log) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  if (log) {
    os << "1e" << static_cast<int>(std::lround(std::log10(v)));
  } else {
    os.precision(3);
    os << v;
  }
  return os.str();
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
}

void write_csv(const fs::path& path, const CsvTable& table) { write_text(path, table.str()); }

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string render_svg(const PlotSpec& spec) {
  constexpr double kW = 720, kH = 480, kL = 80, kR = 170, kT = 40, kB = 60;
  static constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                                      "#ff7f0e", "#9467bd", "#7f7f7f"};
  const auto tx = [&](double v) { return spec.logx ? std::log10(v) : v; };
  const auto ty = [&](double v) { return spec.logy ? std::log10(v) : v; };
  const auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.logx || x > 0) && (!spec.logy || y > 0);
  };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  if (spec.logx) x0 = std::floor(x0), x1 = std::ceil(x1);
  if (spec.logy) y0 = std::floor(y0), y1 = std::ceil(y1);
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  const auto px = [&](double v) { return kL + (v - x0) / (x1 - x0) * pw; };
  const auto py = [&](double v) { return kT + ph - (v - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << xml_escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  const auto ticks = [](double lo, double hi, bool log) {
    std::vector<double> t;
    if (log) {
      const int step = std::max(1, static_cast<int>(std::ceil((hi - lo) / 8.0)));
      for (double v = lo; v <= hi + 1e-9; v += step) t.push_back(v);
    } else {
      for (int i = 0; i <= 5; ++i) t.push_back(lo + (hi - lo) * i / 5.0);
    }
    return t;
  };
  for (double v : ticks(x0, x1, spec.logx)) {
    os << "<line x1=\"" << fixed(px(v)) << "\" y1=\"" << kT + ph << "\" x2=\"" << fixed(px(v))
       << "\" y2=\"" << kT + ph + 5 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << fixed(px(v)) << "\" y=\"" << kT + ph + 18 << "\" text-anchor=\"middle\">"
       << tick_label(spec.logx ? std::pow(10.0, v) : v, spec.logx) << "</text>\n";
  }
  for (double v : ticks(y0, y1, spec.logy)) {
    os << "<line x1=\"" << kL - 5 << "\" y1=\"" << fixed(py(v)) << "\" x2=\"" << kL << "\" y2=\""
       << fixed(py(v)) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << kL - 8 << "\" y=\"" << fixed(py(v) + 4) << "\" text-anchor=\"end\">"
       << tick_label(spec.logy ? std::pow(10.0, v) : v, spec.logy) << "</text>\n";
  }
  os << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">"
     << xml_escape(spec.xlabel) << "</text>\n";
  os << "<text transform=\"translate(18," << kT + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << xml_escape(spec.ylabel) << "</text>\n";

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const PlotSeries& s = spec.series[k];
    const char* color = kColors[k % kColors.size()];
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      pts += fixed(px(tx(s.x[i]))) + "," + fixed(py(ty(s.y[i]))) + " ";
      if (s.markers) {
        os << "<circle cx=\"" << fixed(px(tx(s.x[i]))) << "\" cy=\"" << fixed(py(ty(s.y[i])))
           << "\" r=\"2.5\" fill=\"" << color << "\"/>";
      }
    }
    if (!s.markers && !pts.empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\""
         << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << pts << "\"/>\n";
    }
    const double ly = kT + 14 + 18 * static_cast<double>(k);
    os << "<line x1=\"" << kW - kR + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kW - kR + 36
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\""
       << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>";
    os << "<text x=\"" << kW - kR + 42 << "\" y=\"" << ly << "\">" << xml_escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace spinbayes
