#pragma once

#include <optional>
#include <span>
#include <vector>

namespace anisorobin {

/// F-annulus W_{r2} minus closed W_{r1}; Neumann at r1, Robin at r2.
struct AnnulusSpec {
  double r1 = 0.0;
  double r2 = 1.0;
};

/// Discrete first eigenpair of a radial problem. phi is normalized so that
/// sum phi^T M phi = 1 with the r-weighted mass matrix, and phi(r2) > 0.
struct Eigenpair1D {
  double lambda = 0.0;
  double alpha = 0.0;
  std::vector<double> grid;
  std::vector<double> phi;
};

// --- secular equations ------------------------------------------------------
//
// For alpha < 0 the first eigenvalue is negative, lambda = -k^2, and the
// radial eigenfunction is a combination of I0(kr) and K0(kr).

/// Wulff shape of radius r3: k I1(k r3) + alpha I0(k r3) = 0. The equation
/// is divided by I0(k r3) > 0 so magnitudes stay O(k).
double wulff_residual(double k, double r3, double alpha);

/// Neumann-Robin annulus:
///   K1(k r1) [k I1(k r2) + alpha I0(k r2)] - I1(k r1) [k K1(k r2) - alpha K0(k r2)] = 0,
/// divided by K1(k r1) I0(k r2) > 0.
double annulus_residual(double k, const AnnulusSpec& ann, double alpha);

/// lambda(alpha, W_{r3}) from the Wulff secular equation. alpha == 0 returns
/// 0; alpha > 0 throws DomainError; NoRootError if no sign change is found
/// up to k = 1e4 / r3.
double wulff_secular(double r3, double alpha);

/// mu(alpha, A_{r1,r2}) from the annulus secular equation (r1 > 0).
double annulus_secular(const AnnulusSpec& ann, double alpha);

// --- weighted P1 finite elements ----------------------------------------------

/// Minimizes (int psi'^2 r dr + alpha r2 psi(r2)^2) / int psi^2 r dr over
/// piecewise-linear psi on a uniform grid of n_nodes points in [r1, r2].
/// Smallest generalized eigenvalue by Sturm-sequence bisection (1e-12
/// relative), eigenvector by inverse iteration.
Eigenpair1D fd_annulus(const AnnulusSpec& ann, double alpha, std::size_t n_nodes);

/// Same discretization on [0, r3]: the Robin Wulff shape.
Eigenpair1D radial_fd(double r3, double alpha, std::size_t n_nodes);

/// Number of generalized eigenvalues of the discrete (K, M) pencil below
/// lambda. Exposed for tests.
std::size_t sturm_count(const AnnulusSpec& ann, double alpha, std::size_t n_nodes, double lambda);

// --- Gamma curves -----------------------------------------------------------

/// Annulus with r1 = sqrt(2 eps r3 + eps^2), r2 = r3 + eps, which has the
/// area of W_{r3} for every eps.
AnnulusSpec gamma_annulus(double r3, double epsilon);

struct GammaRow {
  double alpha = 0.0;
  double gamma_a = 0.0;  // mu(alpha, annulus)
  double gamma_b = 0.0;  // lambda(alpha, W_{r3})
  double diff() const { return gamma_a - gamma_b; }
};

/// One row per alpha (all alpha < 0). Rows are computed in parallel.
std::vector<GammaRow> gamma_curves(double r3, double epsilon, std::span<const double> alpha_grid);

struct GammaIntersection {
  double alpha = 0.0;
  double k = 0.0;
  double wulff_residual = 0.0;
  double annulus_residual = 0.0;
};

/// Intersection of Gamma_A and Gamma_B closest to alpha = 0, found by
/// substituting alpha(k) = -k I1(k r3) / I0(k r3) into the annulus equation
/// and scanning a geometric k grid on [1e-6, 1e3 / r3] (capped so that
/// k r2 <= 500). nullopt when there is no sign change.
std::optional<GammaIntersection> intersection_alpha(double r3, double epsilon);

/// alpha(k) on the Wulff curve.
double wulff_alpha_of_k(double k, double r3);

/// d mu / d alpha = r2 phi(r2)^2 for the r-weighted normalized eigenfunction
/// (r1 = 0 gives the Wulff shape).
double mu_derivative(const AnnulusSpec& ann, double alpha, std::size_t n_nodes = 20000);

}  // namespace anisorobin
