#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "anisorobin/fem_2d.hpp"
#include "anisorobin/finsler_norm.hpp"
#include "anisorobin/planar_geometry.hpp"

namespace anisorobin {

enum class Verdict { pass, fail, inconclusive };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// One inequality or identity check. `quantities` always holds "margin";
/// the verdict is pass iff margin >= -tolerance.
struct VerificationRecord {
  std::string check_id;
  nlohmann::json inputs = nlohmann::json::object();
  std::map<std::string, double> quantities;
  double tolerance = 1e-5;
  Verdict verdict = Verdict::inconclusive;
  std::string note;  // error text for inconclusive records

  double margin() const;
  /// Sets verdict from margin and tolerance.
  void decide();

  bool operator==(const VerificationRecord&) const = default;
};

void to_json(nlohmann::json& j, const VerificationRecord& r);
void from_json(const nlohmann::json& j, VerificationRecord& r);

void write_jsonl(std::ostream& out, std::span<const VerificationRecord> records);
std::vector<VerificationRecord> read_jsonl(std::istream& in);

/// Columns: check_id, verdict, margin, tolerance.
void write_summary_csv(std::ostream& out, std::span<const VerificationRecord> records);

struct HarnessOptions {
  int refinements = 5;
  double tolerance = 1e-5;
  RayleighOptions rayleigh;
};

/// lambda(alpha, W_R) from the secular equation; 0 at alpha = 0.
double wulff_eigenvalue(double radius, double alpha);

/// mu(alpha, annulus(r1, r2)); falls back to the Wulff value when r1 < 1e-8.
double annulus_eigenvalue(double r1, double r2, double alpha);

/// First eigenvalue of poly by solve_rayleigh on mesh_polygon(poly, refinements).
double fem_eigenvalue(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha, const HarnessOptions& opts);

/// margin = mu(annulus r1, r2) - lambda_fem.
VerificationRecord parallel_bound(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha,
                                  const HarnessOptions& opts = {});

/// margin = lambda(W of equal P_F) - lambda_fem.
VerificationRecord verify_perimeter_theorem(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha,
                                            const HarnessOptions& opts = {});

struct AreaSweep {
  std::vector<VerificationRecord> records;  // one per grid alpha, same order
  /// Most negative grid alpha from which every margin up to 0 passes.
  std::optional<double> alpha_star_hat;
  /// Next grid alpha below alpha_star_hat, where the first failure occurs.
  std::optional<double> alpha_star_lower;
};

/// margin(alpha) = lambda(W of equal area) - lambda_fem. The grid must be
/// non-positive and ascending.
AreaSweep verify_area_theorem(const ConvexPolygon& poly, const FinslerNorm& norm, std::span<const double> alpha_grid,
                              const HarnessOptions& opts = {});

/// Small-|alpha| expansions of the Wulff and annulus eigenvalues, with the
/// annulus r1 = sqrt(2 eps r3 + eps^2), r2 = r3 + eps. Remainders are taken
/// at alpha and 2 alpha; margin is the distance of both remainder ratios
/// inside [4/3, 12].
VerificationRecord asymptotics_check(double r3, double alpha_small, double epsilon = 0.5, double tolerance = 1e-5);

/// margin = lambda(W_{r3'}) - lambda(W_{r2}) with r3' = (P_F + hole)/(2 kappa).
VerificationRecord multiply_connected_note(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha,
                                           double hole_perimeter, double tolerance = 1e-5);

/// lambda_fem <= mu <= lambda(W_{r2}) <= lambda(W_{r3'}); margin is the
/// smallest of the three gaps.
VerificationRecord chain_check(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha,
                               double hole_perimeter = 0.0, const HarnessOptions& opts = {});

}  // namespace anisorobin
