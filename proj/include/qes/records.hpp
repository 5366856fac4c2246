#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qes/oracle.hpp"
#include "qes/solver.hpp"

namespace qes {

/// Flat, serializable view of one quasi-exact solution (or rejected candidate).
struct JuddianPointRecord {
  std::string model;
  std::string sector;
  int degree = 0;
  double omega = 0.0;
  double g = 0.0;
  std::optional<double> delta;  // absent when Delta^2 < 0 or complex
  double delta_squared = 0.0;
  double energy = 0.0;
  std::vector<cplx> roots;
  double ode_residual = 0.0;
  std::optional<double> bae_residual;  // absent for coincident roots
  double constraint_residual = 0.0;
  std::string branch;
  std::optional<std::string> reject_reason;
};

struct OracleBlock {
  int n_max = 0;
  std::optional<double> gap;
  std::optional<double> drift;
  bool matched = false;
  std::optional<std::string> error;
};

inline double bae_scale(std::span<const cplx> roots) {
  double m = 1.0;
  for (const cplx& r : roots) m = std::max(m, std::abs(r));
  return m * m * m;
}

/// Residual checks for emitted records: ODE, root equations (distinct roots
/// only) and the parameter constraint.
inline JuddianPointRecord make_record(const QesCandidate& c, double tol = 1e-8) {
  const QesSolution& s = c.solution;
  JuddianPointRecord r;
  r.model = std::string(to_string(s.spec.kind));
  r.sector = s.spec.sector_string();
  r.degree = s.degree;
  r.omega = s.spec.omega;
  r.g = s.spec.g;
  r.delta_squared = s.delta_squared;
  r.energy = s.energy;
  r.roots = s.roots;
  r.ode_residual = c.ode_residual;
  r.branch = std::string(to_string(s.branch));
  r.reject_reason = c.reject_reason;
  if (c.accepted()) r.delta = std::sqrt(s.delta_squared);
  if (s.coeffs.empty()) {
    r.constraint_residual = std::nan("");
    return r;
  }
  r.constraint_residual = constraint_residual(s);
  if (roots_distinct(s.roots)) r.bae_residual = bae_residual(s);
  if (!r.reject_reason) {
    if (r.bae_residual && !(*r.bae_residual <= tol * bae_scale(s.roots)))
      r.reject_reason = "bae_residual";
    else if (!(r.constraint_residual <= tol * std::max(1.0, s.delta_squared)))
      r.reject_reason = "constraint_residual";
  }
  return r;
}

// Round-trip decimal form of a double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

inline constexpr std::string_view kSweepCsvHeader =
    "model,sector,degree,omega,g,delta,delta_squared,energy,branch,ode_residual,bae_residual,constraint_residual,"
    "oracle_gap,oracle_drift";
inline constexpr std::string_view kSpectrumCsvHeader = "g,level_index,energy";
inline constexpr std::string_view kWavefunctionCsvHeader = "z,psi_plus_re,psi_plus_im,psi_minus_re,psi_minus_im";
inline constexpr std::string_view kWavefunctionPlusCsvHeader = "z,psi_plus_re,psi_plus_im";

inline std::string csv_row(const JuddianPointRecord& r, const std::optional<OracleBlock>& oracle) {
  std::string line;
  auto add = [&](const std::string& field) {
    if (!line.empty()) line += ',';
    line += field;
  };
  line = r.model;
  add(r.sector);
  add(std::to_string(r.degree));
  add(format_number(r.omega));
  add(format_number(r.g));
  add(format_optional(r.delta));
  add(format_number(r.delta_squared));
  add(format_number(r.energy));
  add(r.branch);
  add(format_number(r.ode_residual));
  add(format_optional(r.bae_residual));
  add(format_number(r.constraint_residual));
  add(oracle ? format_optional(oracle->gap) : std::string());
  add(oracle ? format_optional(oracle->drift) : std::string());
  return line;
}

using ordered_json = nlohmann::ordered_json;

inline ordered_json optional_json(const std::optional<double>& x) {
  return x && std::isfinite(*x) ? ordered_json(*x) : ordered_json(nullptr);
}

inline ordered_json to_json(const JuddianPointRecord& r) {
  ordered_json j;
  j["model"] = r.model;
  j["sector"] = r.sector;
  j["degree"] = r.degree;
  j["omega"] = r.omega;
  j["g"] = r.g;
  j["delta"] = optional_json(r.delta);
  j["delta_squared"] = r.delta_squared;
  j["energy"] = r.energy;
  ordered_json roots = ordered_json::array();
  for (const cplx& z : r.roots) roots.push_back({z.real(), z.imag()});
  j["roots"] = std::move(roots);
  j["residuals"] = {{"ode", optional_json(r.ode_residual)},
                    {"bae", optional_json(r.bae_residual)},
                    {"constraint", optional_json(r.constraint_residual)}};
  j["branch"] = r.branch;
  if (r.reject_reason) j["reject_reason"] = *r.reject_reason;
  return j;
}

inline ordered_json to_json(const OracleBlock& o) {
  ordered_json j;
  j["n_max"] = o.n_max;
  j["gap"] = optional_json(o.gap);
  j["drift"] = optional_json(o.drift);
  j["matched"] = o.matched;
  if (o.error) j["error"] = *o.error;
  return j;
}

inline OracleBlock verify_record(const QesSolution& s, int n_max, double tol) {
  OracleBlock b;
  b.n_max = n_max;
  try {
    const EnergyMatch m = match_energy(s.energy, s.spec, n_max, tol);
    b.gap = m.gap;
    b.drift = m.truncation_drift;
    b.matched = m.matched;
  } catch (const Error& e) {
    b.error = std::string(to_string(e.code()));
  }
  return b;
}

}  // namespace qes
