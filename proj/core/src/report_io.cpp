#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "thinlim/error.hpp"
#include "thinlim/experiment.hpp"

namespace thinlim {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  os << text;
  if (!os) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string sweep_csv(const SweepTable& table) {
  std::string out = "epsilon,m3d,mlimit,gap,runtime_s,iterations,status\n";
  for (const SweepRow& r : table.rows) {
    out += fmt("%.17g", r.epsilon) + ',' + fmt("%.17g", r.m3d) + ',' + fmt("%.17g", r.mlimit) + ',' +
           fmt("%.17g", r.gap) + ',' + fmt("%.6f", r.runtime_s) + ',' + std::to_string(r.iterations) + ',' +
           r.status + '\n';
  }
  return out;
}

std::string sweep_svg(const SweepTable& table) {
  constexpr double W = 640, H = 480, L = 70, R = 20, T = 30, B = 50;
  constexpr double kFloor = 1e-16;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const SweepRow& r : table.rows) {
    xmin = std::min(xmin, std::log10(r.epsilon));
    xmax = std::max(xmax, std::log10(r.epsilon));
    if (std::isfinite(r.gap) && r.gap > 0.0) {
      ymin = std::min(ymin, std::log10(std::max(r.gap, kFloor)));
      ymax = std::max(ymax, std::log10(std::max(r.gap, kFloor)));
    }
  }
  if (!std::isfinite(ymin)) ymin = ymax = std::log10(kFloor);
  ymin = std::floor(ymin) - 1.0;
  ymax = std::ceil(ymax);
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s += "<rect x=\"" + fmt("%.2f", L) + "\" y=\"" + fmt("%.2f", T) + "\" width=\"" + fmt("%.2f", W - L - R) +
       "\" height=\"" + fmt("%.2f", H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = std::ceil(ymin); e <= ymax + 1e-9; e += 1.0) {
    s += "<text x=\"" + fmt("%.2f", L - 6) + "\" y=\"" + fmt("%.2f", py(e) + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">1e" + fmt("%.0f", e) + "</text>\n";
  }
  for (const SweepRow& r : table.rows) {
    s += "<text x=\"" + fmt("%.2f", px(std::log10(r.epsilon))) + "\" y=\"" + fmt("%.2f", H - B + 16) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + fmt("%g", r.epsilon) + "</text>\n";
  }
  s += "<text x=\"" + fmt("%.2f", (L + W - R) / 2) + "\" y=\"" + fmt("%.2f", H - 12) +
       "\" font-size=\"13\" text-anchor=\"middle\">epsilon</text>\n";
  s += "<text x=\"16\" y=\"" + fmt("%.2f", (T + H - B) / 2) + "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fmt("%.2f", (T + H - B) / 2) + ")\">gap</text>\n";
  std::string line;
  for (const SweepRow& r : table.rows) {
    const double x = px(std::log10(r.epsilon));
    if (std::isfinite(r.gap) && r.gap > 0.0) {
      const double y = py(std::log10(std::max(r.gap, kFloor)));
      line += fmt("%.2f", x) + ',' + fmt("%.2f", y) + ' ';
      s += "<circle cx=\"" + fmt("%.2f", x) + "\" cy=\"" + fmt("%.2f", y) + "\" r=\"4\" fill=\"steelblue\"/>\n";
    } else {
      s += "<circle cx=\"" + fmt("%.2f", x) + "\" cy=\"" + fmt("%.2f", py(ymin)) +
           "\" r=\"4\" fill=\"none\" stroke=\"firebrick\"/>\n";
    }
  }
  if (!line.empty()) {
    line.pop_back();
    s += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"steelblue\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

void emit_csv(const SweepTable& table, const std::filesystem::path& path) {
  if (table.rows.empty()) throw ValidationError("cannot emit an empty sweep table");
  write_text(path, sweep_csv(table));
}

void emit_svg_plot(const SweepTable& table, const std::filesystem::path& path) {
  if (table.rows.empty()) throw ValidationError("cannot emit an empty sweep table");
  write_text(path, sweep_svg(table));
}

}  // namespace thinlim
