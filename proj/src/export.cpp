#include "vibrd/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "vibrd/errors.hpp"

namespace vibrd {
namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string trajectory_csv(const TrajectoryRecord& traj) {
  if (traj.states.empty()) throw ValidationError("empty trajectory record");
  const int n = static_cast<int>(traj.states.front().size());
  std::string out = "t";
  for (int i = 1; i <= n; ++i) out += ",x_" + std::to_string(i);
  out += ",gap,norm_delta,norm_eps\n";
  for (size_t k = 0; k < traj.times.size(); ++k) {
    out += fmt12(traj.times[k]);
    for (int i = 0; i < n; ++i) out += "," + fmt12(traj.states[k](i));
    out += "," + fmt12(traj.gaps[k]);
    out += "," + fmt12(traj.disturbance_norms[k].first);
    out += "," + fmt12(traj.disturbance_norms[k].second);
    out += "\n";
  }
  return out;
}

void export_csv(const TrajectoryRecord& traj,
                const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << trajectory_csv(traj);
  if (!f) throw IoError("write failed for " + path.string());
}

TrajectoryRecord parse_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw IoError("empty csv " + path.string());
  int cols = 1;
  for (char c : line)
    if (c == ',') ++cols;
  const int n = cols - 4;
  if (n < 1) throw IoError("unexpected csv header: " + line);
  TrajectoryRecord traj;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != cols)
      throw IoError("ragged csv row: " + line);
    traj.times.push_back(row[0]);
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = row[static_cast<size_t>(1 + i)];
    traj.states.push_back(std::move(x));
    traj.gaps.push_back(row[static_cast<size_t>(1 + n)]);
    traj.disturbance_norms.emplace_back(row[static_cast<size_t>(2 + n)],
                                        row[static_cast<size_t>(3 + n)]);
  }
  if (traj.times.size() >= 2)
    traj.step_h = traj.times[1] - traj.times[0];
  return traj;
}

std::string trajectory_svg(const TrajectoryRecord& traj,
                           const std::string& title) {
  if (traj.states.empty()) throw ValidationError("empty trajectory record");
  const int W = 860, H = 420, L = 60, R = 20, T = 34, B = 40;
  const double t0 = traj.times.front(), t1 = traj.times.back();
  const double tspan = t1 > t0 ? t1 - t0 : 1.0;
  double lo = 0.0, hi = 1.0;
  for (const Vector& x : traj.states) {
    lo = std::min(lo, x.minCoeff());
    hi = std::max(hi, x.maxCoeff());
  }
  for (double g : traj.gaps) hi = std::max(hi, g);
  const double span = hi > lo ? hi - lo : 1.0;
  auto px = [&](double t) { return L + (t - t0) / tspan * (W - L - R); };
  auto py = [&](double v) { return H - B - (v - lo) / span * (H - T - B); };

  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  const int n = static_cast<int>(traj.states.front().size());
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << L << "\" y=\"20\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << title << "</text>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
      << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L
      << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    double tv = t0 + tspan * tick / 4.0;
    double vv = lo + span * tick / 4.0;
    svg << "<text x=\"" << px(tv) << "\" y=\"" << H - B + 16
        << "\" font-size=\"11\" font-family=\"sans-serif\" "
           "text-anchor=\"middle\">"
        << fmt12(std::round(tv * 100) / 100) << "</text>\n";
    svg << "<text x=\"" << L - 6 << "\" y=\"" << py(vv) + 4
        << "\" font-size=\"11\" font-family=\"sans-serif\" "
           "text-anchor=\"end\">"
        << fmt12(std::round(vv * 1000) / 1000) << "</text>\n";
  }
  auto polyline = [&](auto value, const char* color) {
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.3\" points=\"";
    for (size_t k = 0; k < traj.times.size(); ++k)
      svg << px(traj.times[k]) << "," << py(value(k)) << " ";
    svg << "\"/>\n";
  };
  for (int i = 0; i < n; ++i) {
    polyline([&](size_t k) { return traj.states[k](i); }, palette[i % 8]);
    svg << "<text x=\"" << W - R - 60 << "\" y=\"" << T + 14 * (i + 1)
        << "\" font-size=\"11\" font-family=\"sans-serif\" fill=\""
        << palette[i % 8] << "\">x_" << i + 1 << "</text>\n";
  }
  polyline([&](size_t k) { return traj.gaps[k]; }, "black");
  svg << "<text x=\"" << W - R - 60 << "\" y=\"" << T + 14 * (n + 1)
      << "\" font-size=\"11\" font-family=\"sans-serif\">gap</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace vibrd
