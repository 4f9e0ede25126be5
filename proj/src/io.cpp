#include "anisorobin/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace anisorobin {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_profile_csv(std::ostream& out, const ParallelProfile& prof) {
  out << "t,A,L,R\n";
  for (std::size_t i = 0; i < prof.t.size(); ++i)
    out << format_number(prof.t[i]) << ',' << format_number(prof.A[i]) << ',' << format_number(prof.L[i]) << ','
        << format_number(prof.R[i]) << '\n';
}

void write_curves_csv(std::ostream& out, std::span<const GammaRow> rows) {
  out << "alpha,gamma_A,gamma_B,diff\n";
  for (const auto& r : rows)
    out << format_number(r.alpha) << ',' << format_number(r.gamma_a) << ',' << format_number(r.gamma_b) << ','
        << format_number(r.diff()) << '\n';
}

namespace {

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

void write_curves_svg(std::ostream& out, std::span<const GammaRow> rows) {
  constexpr double kWidth = 800, kHeight = 600, kLeft = 80, kRight = 40, kTop = 40, kBottom = 70;
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  if (!rows.empty()) {
    x_lo = x_hi = rows.front().alpha;
    y_lo = y_hi = rows.front().gamma_a;
  }
  for (const auto& r : rows) {
    x_lo = std::min(x_lo, r.alpha);
    x_hi = std::max(x_hi, r.alpha);
    y_lo = std::min({y_lo, r.gamma_a, r.gamma_b});
    y_hi = std::max({y_hi, r.gamma_a, r.gamma_b});
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight); };
  auto sy = [&](double y) { return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom); };
  auto polyline = [&](auto value, const char* color) {
    out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i)
      out << (i ? " " : "") << fixed(sx(rows[i].alpha)) << ',' << fixed(sy(value(rows[i])));
    out << "\"/>\n";
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  out << "  <rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "  <line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0) << "\" x2=\"" << fixed(x1) << "\" y2=\"" << fixed(y0)
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0) << "\" x2=\"" << fixed(x0) << "\" y2=\"" << fixed(y1)
      << "\" stroke=\"black\"/>\n";
  out << "  <text x=\"" << fixed(x0) << "\" y=\"" << fixed(y0 + 20) << "\" font-size=\"12\">" << format_number(x_lo)
      << "</text>\n";
  out << "  <text x=\"" << fixed(x1) << "\" y=\"" << fixed(y0 + 20) << "\" font-size=\"12\" text-anchor=\"end\">"
      << format_number(x_hi) << "</text>\n";
  out << "  <text x=\"" << fixed(x0 - 8) << "\" y=\"" << fixed(y0) << "\" font-size=\"12\" text-anchor=\"end\">"
      << format_number(y_lo) << "</text>\n";
  out << "  <text x=\"" << fixed(x0 - 8) << "\" y=\"" << fixed(y1 + 4) << "\" font-size=\"12\" text-anchor=\"end\">"
      << format_number(y_hi) << "</text>\n";
  out << "  <text x=\"" << fixed(0.5 * (x0 + x1)) << "\" y=\"" << fixed(kHeight - 20)
      << "\" font-size=\"14\" text-anchor=\"middle\">alpha</text>\n";
  polyline([](const GammaRow& r) { return r.gamma_a; }, "#1f77b4");
  polyline([](const GammaRow& r) { return r.gamma_b; }, "#d62728");
  out << "  <line x1=\"" << fixed(x0 + 20) << "\" y1=\"" << fixed(y1 + 10) << "\" x2=\"" << fixed(x0 + 50) << "\" y2=\""
      << fixed(y1 + 10) << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  out << "  <text x=\"" << fixed(x0 + 56) << "\" y=\"" << fixed(y1 + 14) << "\" font-size=\"12\">gamma_A (annulus)</text>\n";
  out << "  <line x1=\"" << fixed(x0 + 20) << "\" y1=\"" << fixed(y1 + 30) << "\" x2=\"" << fixed(x0 + 50) << "\" y2=\""
      << fixed(y1 + 30) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  out << "  <text x=\"" << fixed(x0 + 56) << "\" y=\"" << fixed(y1 + 34) << "\" font-size=\"12\">gamma_B (Wulff)</text>\n";
  out << "</svg>\n";
}

void write_solution_csv(std::ostream& out, const TriMesh& mesh, const FemSolution& sol) {
  out << "x,y,u\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    out << format_number(mesh.vertices[i].x()) << ',' << format_number(mesh.vertices[i].y()) << ','
        << format_number(sol.u[i]) << '\n';
}

void write_radial_csv(std::ostream& out, const Eigenpair1D& pair) {
  out << "r,phi\n";
  for (std::size_t i = 0; i < pair.grid.size(); ++i)
    out << format_number(pair.grid[i]) << ',' << format_number(pair.phi[i]) << '\n';
}

nlohmann::json solution_summary(const FemSolution& sol, double pf_over_v_bound) {
  return nlohmann::json{{"lambda", sol.lambda},
                        {"alpha", sol.alpha},
                        {"iterations", sol.iterations},
                        {"residual", sol.residual},
                        {"pf_over_v_bound", pf_over_v_bound}};
}

}  // namespace anisorobin
