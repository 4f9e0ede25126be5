#include "anisorobin/verify_harness.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "anisorobin/reduced_1d.hpp"

namespace anisorobin {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "inconclusive") return Verdict::inconclusive;
  throw DomainError("verdict: unknown value '" + s + "'");
}

double VerificationRecord::margin() const {
  const auto it = quantities.find("margin");
  return it == quantities.end() ? std::nan("") : it->second;
}

void VerificationRecord::decide() {
  const double m = margin();
  if (!std::isfinite(m))
    verdict = Verdict::inconclusive;
  else
    verdict = m >= -tolerance ? Verdict::pass : Verdict::fail;
}

void to_json(nlohmann::json& j, const VerificationRecord& r) {
  j = nlohmann::json{{"check_id", r.check_id},
                     {"inputs", r.inputs},
                     {"quantities", r.quantities},
                     {"tolerance", r.tolerance},
                     {"verdict", to_string(r.verdict)}};
  if (!r.note.empty()) j["note"] = r.note;
}

void from_json(const nlohmann::json& j, VerificationRecord& r) {
  r.check_id = j.at("check_id").get<std::string>();
  r.inputs = j.at("inputs");
  r.quantities = j.at("quantities").get<std::map<std::string, double>>();
  r.tolerance = j.at("tolerance").get<double>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.note = j.value("note", std::string());
}

void write_jsonl(std::ostream& out, std::span<const VerificationRecord> records) {
  for (const auto& r : records) out << nlohmann::json(r).dump() << '\n';
}

std::vector<VerificationRecord> read_jsonl(std::istream& in) {
  std::vector<VerificationRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(nlohmann::json::parse(line).get<VerificationRecord>());
  }
  return out;
}

void write_summary_csv(std::ostream& out, std::span<const VerificationRecord> records) {
  out << "check_id,verdict,margin,tolerance\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : records) out << r.check_id << ',' << to_string(r.verdict) << ',' << r.margin() << ',' << r.tolerance << '\n';
  out.precision(old_precision);
}

double wulff_eigenvalue(double radius, double alpha) { return alpha == 0.0 ? 0.0 : wulff_secular(radius, alpha); }

double annulus_eigenvalue(double r1, double r2, double alpha) {
  if (alpha == 0.0) return 0.0;
  if (r1 < 1e-8) return wulff_secular(r2, alpha);
  return annulus_secular(AnnulusSpec{r1, r2}, alpha);
}

double fem_eigenvalue(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha, const HarnessOptions& opts) {
  return solve_rayleigh(mesh_polygon(poly, opts.refinements), norm, alpha, opts.rayleigh).lambda;
}

namespace {

nlohmann::json echo_inputs(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha, int refinements) {
  nlohmann::json j{{"norm", norm}, {"domain", poly}, {"alpha", alpha}};
  if (refinements >= 0) j["refinements"] = refinements;
  return j;
}

// Runs body; solver errors turn the record inconclusive.
template <class Body>
VerificationRecord guarded(VerificationRecord rec, Body&& body) {
  try {
    body(rec);
    rec.decide();
  } catch (const Error& e) {
    rec.verdict = Verdict::inconclusive;
    rec.note = e.what();
  }
  return rec;
}

VerificationRecord make_record(std::string id, nlohmann::json inputs, double tolerance) {
  VerificationRecord r;
  r.check_id = std::move(id);
  r.inputs = std::move(inputs);
  r.tolerance = tolerance;
  return r;
}

}  // namespace

VerificationRecord parallel_bound(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha,
                                  const HarnessOptions& opts) {
  auto rec = make_record("parallel_bound", echo_inputs(poly, norm, alpha, opts.refinements), opts.tolerance);
  return guarded(std::move(rec), [&](VerificationRecord& r) {
    const ParallelRadii radii = parallel_radii(poly, norm);
    const double mu = annulus_eigenvalue(radii.r1, radii.r2, alpha);
    const double lambda = fem_eigenvalue(poly, norm, alpha, opts);
    r.quantities = {{"r1", radii.r1}, {"r2", radii.r2}, {"mu_annulus", mu}, {"lambda_fem", lambda}, {"margin", mu - lambda}};
  });
}

VerificationRecord verify_perimeter_theorem(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha,
                                            const HarnessOptions& opts) {
  auto rec = make_record("perimeter_theorem", echo_inputs(poly, norm, alpha, opts.refinements), opts.tolerance);
  return guarded(std::move(rec), [&](VerificationRecord& r) {
    const double radius = anis_perimeter(poly, norm) / (2.0 * norm.wulff_area());
    const double lw = wulff_eigenvalue(radius, alpha);
    const double lambda = fem_eigenvalue(poly, norm, alpha, opts);
    r.quantities = {{"wulff_radius", radius}, {"lambda_wulff_perimeter", lw}, {"lambda_fem", lambda}, {"margin", lw - lambda}};
  });
}

AreaSweep verify_area_theorem(const ConvexPolygon& poly, const FinslerNorm& norm, std::span<const double> alpha_grid,
                              const HarnessOptions& opts) {
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] <= 0.0)) throw DomainError("verify_area_theorem: alpha_grid must be non-positive");
    if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))
      throw DomainError("verify_area_theorem: alpha_grid must be strictly ascending");
  }
  AreaSweep out;
  const double radius = std::sqrt(area(poly) / norm.wulff_area());
  const TriMesh mesh = mesh_polygon(poly, opts.refinements);
  out.records.resize(alpha_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    const double alpha = alpha_grid[i];
    auto rec = make_record("area_theorem", echo_inputs(poly, norm, alpha, opts.refinements), opts.tolerance);
    out.records[i] = guarded(std::move(rec), [&](VerificationRecord& r) {
      const double lw = wulff_eigenvalue(radius, alpha);
      const double lambda = solve_rayleigh(mesh, norm, alpha, opts.rayleigh).lambda;
      r.quantities = {{"wulff_radius", radius}, {"lambda_wulff_area", lw}, {"lambda_fem", lambda}, {"margin", lw - lambda}};
    });
  }
  // Walk from the alpha closest to 0 towards more negative values.
  for (std::size_t i = alpha_grid.size(); i-- > 0;) {
    if (out.records[i].verdict != Verdict::pass) {
      out.alpha_star_lower = alpha_grid[i];
      break;
    }
    out.alpha_star_hat = alpha_grid[i];
  }
  return out;
}

VerificationRecord asymptotics_check(double r3, double alpha_small, double epsilon, double tolerance) {
  if (!(r3 > 0.0)) throw DomainError("asymptotics_check: r3 must be positive");
  if (!(alpha_small < 0.0 && alpha_small >= -1e-2)) throw DomainError("asymptotics_check: need -1e-2 <= alpha < 0");
  if (!(epsilon > 0.0)) throw DomainError("asymptotics_check: epsilon must be positive");
  nlohmann::json inputs{{"r3", r3}, {"alpha", alpha_small}, {"epsilon", epsilon}};
  auto rec = make_record("asymptotics", std::move(inputs), tolerance);
  return guarded(std::move(rec), [&](VerificationRecord& r) {
    const AnnulusSpec ann = gamma_annulus(r3, epsilon);
    auto wulff_rem = [&](double a) { return std::abs(wulff_secular(r3, a) - 2.0 * a / r3); };
    auto annulus_rem = [&](double a) { return std::abs(annulus_secular(ann, a) - 2.0 * a * ann.r2 / (r3 * r3)); };
    const double lw = wulff_secular(r3, alpha_small);
    const double mu = annulus_secular(ann, alpha_small);
    const double rw1 = wulff_rem(alpha_small), rw2 = wulff_rem(2.0 * alpha_small);
    const double ra1 = annulus_rem(alpha_small), ra2 = annulus_rem(2.0 * alpha_small);
    const double ratio_w = rw2 / rw1, ratio_a = ra2 / ra1;
    auto inside = [](double ratio) { return std::min(ratio - 4.0 / 3.0, 12.0 - ratio); };
    const double a2 = alpha_small * alpha_small;
    r.quantities = {{"lambda_wulff", lw},
                    {"mu_annulus", mu},
                    {"r1", ann.r1},
                    {"r2", ann.r2},
                    {"remainder_wulff", rw1},
                    {"remainder_annulus", ra1},
                    {"ratio_wulff", ratio_w},
                    {"ratio_annulus", ratio_a},
                    {"c_wulff", rw1 / a2},
                    {"c_annulus", ra1 / a2},
                    {"margin", std::min(inside(ratio_w), inside(ratio_a))}};
  });
}

VerificationRecord multiply_connected_note(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha,
                                           double hole_perimeter, double tolerance) {
  if (!(hole_perimeter > 0.0)) throw DomainError("multiply_connected_note: hole_perimeter must be positive");
  nlohmann::json inputs = echo_inputs(poly, norm, alpha, -1);
  inputs["hole_perimeter"] = hole_perimeter;
  auto rec = make_record("multiply_connected", std::move(inputs), tolerance);
  return guarded(std::move(rec), [&](VerificationRecord& r) {
    const double kappa = norm.wulff_area();
    const double p = anis_perimeter(poly, norm);
    const double r2 = p / (2.0 * kappa), r3p = (p + hole_perimeter) / (2.0 * kappa);
    const double l2 = wulff_eigenvalue(r2, alpha), l3 = wulff_eigenvalue(r3p, alpha);
    r.quantities = {{"r2", r2}, {"r3_prime", r3p}, {"lambda_wulff_r2", l2}, {"lambda_wulff_r3_prime", l3}, {"margin", l3 - l2}};
  });
}

VerificationRecord chain_check(const ConvexPolygon& poly, const FinslerNorm& norm, double alpha, double hole_perimeter,
                               const HarnessOptions& opts) {
  if (!(hole_perimeter >= 0.0)) throw DomainError("chain_check: hole_perimeter must be non-negative");
  nlohmann::json inputs = echo_inputs(poly, norm, alpha, opts.refinements);
  inputs["hole_perimeter"] = hole_perimeter;
  auto rec = make_record("chain", std::move(inputs), opts.tolerance);
  return guarded(std::move(rec), [&](VerificationRecord& r) {
    const double kappa = norm.wulff_area();
    const ParallelRadii radii = parallel_radii(poly, norm);
    const double r3p = (anis_perimeter(poly, norm) + hole_perimeter) / (2.0 * kappa);
    const double lambda = fem_eigenvalue(poly, norm, alpha, opts);
    const double mu = annulus_eigenvalue(radii.r1, radii.r2, alpha);
    const double l2 = wulff_eigenvalue(radii.r2, alpha);
    const double l3 = wulff_eigenvalue(r3p, alpha);
    const double m1 = mu - lambda, m2 = l2 - mu, m3 = l3 - l2;
    r.quantities = {{"r1", radii.r1},
                    {"r2", radii.r2},
                    {"r3_prime", r3p},
                    {"lambda_fem", lambda},
                    {"mu_annulus", mu},
                    {"lambda_wulff_r2", l2},
                    {"lambda_wulff_r3_prime", l3},
                    {"margin_fem_annulus", m1},
                    {"margin_annulus_wulff", m2},
                    {"margin_wulff_monotone", m3},
                    {"margin", std::min({m1, m2, m3})}};
  });
}

}  // namespace anisorobin
