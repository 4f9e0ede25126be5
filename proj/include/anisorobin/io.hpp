#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "json.hpp"

#include "anisorobin/fem_2d.hpp"
#include "anisorobin/planar_geometry.hpp"
#include "anisorobin/reduced_1d.hpp"

namespace anisorobin {

/// Shortest round-trip decimal form (%.17g), '.' decimal separator.
std::string format_number(double x);

/// Columns t, A, L, R.
void write_profile_csv(std::ostream& out, const ParallelProfile& prof);

/// Columns alpha, gamma_A, gamma_B, diff.
void write_curves_csv(std::ostream& out, std::span<const GammaRow> rows);

/// Single-panel line plot of both curves in an 800x600 viewBox.
void write_curves_svg(std::ostream& out, std::span<const GammaRow> rows);

/// Columns x, y, u.
void write_solution_csv(std::ostream& out, const TriMesh& mesh, const FemSolution& sol);

/// Columns r, phi.
void write_radial_csv(std::ostream& out, const Eigenpair1D& pair);

/// {lambda, alpha, iterations, residual, pf_over_v_bound}
nlohmann::json solution_summary(const FemSolution& sol, double pf_over_v_bound);

}  // namespace anisorobin
