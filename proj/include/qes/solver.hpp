#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qes/error.hpp"
#include "qes/model.hpp"
#include "qes/polynomial.hpp"
#include "qes/stencil.hpp"

namespace qes {

enum class Branch { Nontrivial, DegenerateAtom };

constexpr std::string_view to_string(Branch b) {
  return b == Branch::Nontrivial ? "Nontrivial" : "DegenerateAtom";
}

/// One Juddian point: a polynomial eigenfunction phi_+ = prod (z - z_i) of
/// the model's Fuchsian equation together with its energy and Delta^2.
struct QesSolution {
  ModelSpec spec;  // delta = +sqrt(delta_squared) when delta_squared >= 0
  int degree = 0;
  double energy = 0.0;
  double delta_squared = 0.0;
  std::vector<cplx> roots;
  std::vector<double> coeffs;  // ascending, monic
  Branch branch = Branch::Nontrivial;
};

/// Every pencil eigenvalue, whether or not it passed the physical filter.
struct QesCandidate {
  QesSolution solution;
  cplx pencil_delta_squared;   // -delta_sq_sign * mu, before filtering
  double ode_residual = 0.0;   // NaN when no coefficient vector was formed
  std::optional<std::string> reject_reason;

  bool accepted() const { return !reject_reason.has_value(); }
};

struct SolverTolerances {
  double imag_rel = 1e-9;        // Im mu <= imag_rel (1 + |mu|)
  double negative_floor = 1e-9;  // Re Delta^2 >= -negative_floor
  double degenerate = 1e-9;      // Delta^2 below this is the degenerate-atom branch
  double ode_residual = 1e-8;    // max-norm of the image relative to max|c|
};

inline double qes_energy(const ModelSpec& spec, int degree) {
  validate(spec);
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  const double w = spec.omega;
  const double m = degree;
  const double v = squeeze_factor(spec).value;
  switch (spec.kind) {
    case ModelKind::Rabi: return w * (m - spec.g * spec.g / (w * w));
    case ModelKind::TwoPhoton: return -0.5 * w + (2.0 * m + 2.0 * spec.sector_value()) * w * v;
    case ModelKind::TwoMode: return -w + (2.0 * m + 2.0 * spec.sector_value()) * w * v;
  }
  return 0.0;
}

/// Matrix of the Fuchsian operator (without the Delta^2 term) restricted
/// to span{1, z, ..., z^degree} at the quasi-exact energy.  The equation
/// becomes (A + delta_sq_sign Delta^2 I) c = 0.
inline Eigen::MatrixXd delta_pencil(const OdeStencil& stencil) {
  const int n = stencil.degree_ceiling + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int b : OdeStencil::kBandOffsets) {
      const int row = k + b;
      if (row >= 0 && row < n) a(row, k) = stencil.band(b, k);
    }
  return a;
}

inline Eigen::MatrixXd delta_pencil(const ModelSpec& spec, int degree) {
  return delta_pencil(ode_stencil(spec, degree, qes_energy(spec, degree)));
}

inline double ode_residual(const QesSolution& s) {
  const OdeStencil st = ode_stencil(s.spec, s.degree, s.energy);
  const std::vector<double> image = apply_ode(st, s.delta_squared, s.coeffs);
  const double scale = max_abs(s.coeffs);
  return scale == 0.0 ? 0.0 : max_abs(image) / scale;
}

namespace detail {

// Diagonal similarity D^-1 A D with power-of-two entries equalizing row and
// column norms (Parlett-Reinsch).  Returns D; `a` is balanced in place.
inline Eigen::VectorXd balance(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  for (bool done = false; !done;) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = a.col(i).cwiseAbs().sum() - std::abs(a(i, i));
      const double r = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
      if (c == 0.0 || r == 0.0) continue;
      const double total = c + r;
      double f = 1.0;
      while (c < r / 2.0) {
        f *= 2.0;
        c *= 4.0;
      }
      while (c >= r * 2.0) {
        f /= 2.0;
        c /= 4.0;
      }
      if ((c + r) / f < 0.95 * total) {
        done = false;
        d[i] *= f;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return d;
}

// Null vector of (A - mu I) normalized to c_M = 1: smallest right singular
// vector of the balanced shifted matrix.
inline std::vector<double> null_vector(const Eigen::MatrixXd& a, double mu) {
  Eigen::MatrixXd b = a - mu * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::VectorXd d = balance(b);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullV);
  const Eigen::VectorXd v = d.cwiseProduct(svd.matrixV().col(a.cols() - 1));
  std::vector<double> c(v.data(), v.data() + v.size());
  const double lead = c.back();
  for (double& x : c) x /= lead;
  c.back() = 1.0;
  return c;
}

// Newton steps on (A - mu I) c = 0 with c_M = 1 fixed, unknowns scaled by the
// current iterate and equations by their term magnitudes, so that small
// coefficients are resolved to relative rather than normwise accuracy.
inline void refine_eigenpair(const Eigen::MatrixXd& a, double& mu, std::vector<double>& c, int steps = 3) {
  const Eigen::Index n = a.rows();
  if (n < 2) return;
  const double cmax = max_abs(c);
  for (int it = 0; it < steps; ++it) {
    Eigen::VectorXd f(n);
    Eigen::VectorXd weight(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      double sum = -mu * c[r];
      double mag = std::abs(mu * c[r]);
      for (Eigen::Index k = 0; k < n; ++k) {
        sum += a(r, k) * c[k];
        mag += std::abs(a(r, k) * c[k]);
      }
      f[r] = sum;
      weight[r] = mag > 0.0 ? 1.0 / mag : 1.0;
    }
    Eigen::MatrixXd j(n, n);
    Eigen::VectorXd scale(n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      scale[k] = std::max(std::abs(c[k]), 1e-300 + 1e-30 * cmax);
      for (Eigen::Index r = 0; r < n; ++r) j(r, k) = (a(r, k) - (r == k ? mu : 0.0)) * scale[k];
    }
    scale[n - 1] = std::max(1.0, std::abs(mu));
    for (Eigen::Index r = 0; r < n; ++r) j(r, n - 1) = -c[r] * scale[n - 1];
    for (Eigen::Index r = 0; r < n; ++r) {
      j.row(r) *= weight[r];
      f[r] *= weight[r];
    }
    const Eigen::VectorXd y = j.fullPivLu().solve(-f);
    if (!y.allFinite()) return;
    for (Eigen::Index k = 0; k + 1 < n; ++k) c[k] += scale[k] * y[k];
    mu += scale[n - 1] * y[n - 1];
  }
}

// At Delta = 0 the Rabi polynomial is (z + g/w)^degree; its roots are set
// exactly when the computed coefficients agree.
inline void snap_displaced_root(QesSolution& s) {
  const double z0 = -s.spec.g / s.spec.omega;
  const std::vector<cplx> exact(static_cast<std::size_t>(s.degree), cplx(z0));
  const std::vector<cplx> c = monic_from_roots(exact);
  const double scale = max_abs(s.coeffs);
  for (std::size_t k = 0; k < c.size(); ++k)
    if (std::abs(c[k].real() - s.coeffs[k]) > 1e-8 * scale) return;
  s.roots = exact;
}

inline void reflect_coupling(QesSolution& s, double g) {
  // g -> -g together with z -> -z; (-1)^degree keeps the polynomial monic
  s.spec.g = g;
  for (cplx& r : s.roots) r = -r;
  std::reverse(s.roots.begin(), s.roots.end());
  for (std::size_t k = 0; k < s.coeffs.size(); ++k)
    if ((s.degree - static_cast<int>(k)) % 2 != 0) s.coeffs[k] = -s.coeffs[k];
}

}  // namespace detail

/// All pencil eigenvalues for (spec, degree) with their polynomial data,
/// sorted by Re Delta^2.  Rejected candidates carry a reason.
inline std::vector<QesCandidate> solve_candidates(ModelSpec spec, int degree, const SolverTolerances& tol = {}) {
  spec.delta.reset();
  validate(spec);
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  const double g_in = spec.g;
  ModelSpec work = spec;
  work.g = std::abs(g_in);

  const double energy = qes_energy(work, degree);
  const OdeStencil stencil = ode_stencil(work, degree, energy);
  const Eigen::MatrixXd a = delta_pencil(stencil);
  Eigen::EigenSolver<Eigen::MatrixXd> eig(a, false);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::IllConditioned, "pencil eigensolve failed");

  const int sign = stencil.delta_sq_sign;
  std::vector<QesCandidate> out;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const cplx mu = eig.eigenvalues()[i];
    QesCandidate c;
    c.pencil_delta_squared = -static_cast<double>(sign) * mu;
    c.ode_residual = std::nan("");
    QesSolution& s = c.solution;
    s.spec = work;
    s.degree = degree;
    s.energy = energy;
    s.delta_squared = c.pencil_delta_squared.real();

    if (std::abs(mu.imag()) > tol.imag_rel * (1.0 + std::abs(mu))) {
      c.reject_reason = "complex_delta_squared";
      s.spec.g = g_in;
      out.push_back(std::move(c));
      continue;
    }
    s.coeffs = detail::null_vector(a, mu.real());
    double mu_fine = mu.real();
    std::vector<double> fine = s.coeffs;
    detail::refine_eigenpair(a, mu_fine, fine);
    if (std::abs(mu_fine - mu.real()) <= 1e-8 * (1.0 + std::abs(mu)) &&
        std::all_of(fine.begin(), fine.end(), [](double x) { return std::isfinite(x); })) {
      s.coeffs = std::move(fine);
      s.delta_squared = -static_cast<double>(sign) * mu_fine;
    }
    if (!std::all_of(s.coeffs.begin(), s.coeffs.end(), [](double x) { return std::isfinite(x); })) {
      c.reject_reason = "ill_conditioned";
      s.coeffs.clear();
      s.spec.g = g_in;
      out.push_back(std::move(c));
      continue;
    }
    s.roots = polynomial_roots(s.coeffs);

    if (s.delta_squared < -tol.negative_floor) {
      c.reject_reason = "negative_delta_squared";
    } else {
      s.delta_squared = std::max(0.0, s.delta_squared);
      s.branch = s.delta_squared < tol.degenerate ? Branch::DegenerateAtom : Branch::Nontrivial;
      s.spec.delta = std::sqrt(s.delta_squared);
      if (s.branch == Branch::DegenerateAtom && s.spec.kind == ModelKind::Rabi) detail::snap_displaced_root(s);
    }
    if (g_in < 0.0) detail::reflect_coupling(s, g_in);
    c.ode_residual = ode_residual(s);
    if (!c.reject_reason && !(c.ode_residual <= tol.ode_residual)) c.reject_reason = "ill_conditioned";
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const QesCandidate& x, const QesCandidate& y) {
    return x.pencil_delta_squared.real() < y.pencil_delta_squared.real();
  });
  return out;
}

/// Physical quasi-exact solutions (real Delta^2 >= 0), ascending in Delta^2.
inline std::vector<QesSolution> solve_qes(const ModelSpec& spec, int degree, const SolverTolerances& tol = {}) {
  std::vector<QesSolution> out;
  for (QesCandidate& c : solve_candidates(spec, degree, tol)) {
    if (c.accepted()) {
      out.push_back(std::move(c.solution));
    } else if (*c.reject_reason == "ill_conditioned" && c.solution.delta_squared >= -tol.negative_floor) {
      throw Error(ErrorCode::IllConditioned,
                  "eigenvector residual " + std::to_string(c.ode_residual) + " at Delta^2 = " +
                      std::to_string(c.solution.delta_squared));
    }
  }
  if (out.empty()) throw Error(ErrorCode::NoPhysicalSolution, "no real non-negative Delta^2 at this coupling and degree");
  return out;
}

inline bool roots_distinct(std::span<const cplx> roots, double rel = 1e-10) {
  double scale = 0.0;
  for (const cplx& r : roots) scale = std::max(scale, std::abs(r));
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) <= rel * scale) return false;
  return true;
}

/// Max over i of |LHS_i - RHS_i| of the algebraic equations for the roots.
/// The Rabi system is evaluated with its denominators (w z_i - g)(w z_i + g)
/// cleared.
inline double bae_residual(const QesSolution& s) {
  const std::vector<cplx>& z = s.roots;
  if (!roots_distinct(z)) throw Error(ErrorCode::DegenerateRoots, "coincident roots: equations singular");
  const double w = s.spec.omega;
  const double g = s.spec.g;
  const double m = s.degree;
  const double v = squeeze_factor(s.spec).value;
  const double sec = s.spec.sector_value();
  const double sh = sec + 0.5;

  double worst = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    // power sums of u_j = 1/(z_i - z_j), j != i
    cplx p1 = 0.0, p2 = 0.0, p3 = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j == i) continue;
      const cplx u = 1.0 / (z[i] - z[j]);
      p1 += u;
      p2 += u * u;
      p3 += u * u * u;
    }
    const cplx s1 = p1;                             // sum over j
    const cplx s2 = p1 * p1 - p2;                   // ordered distinct pairs
    const cplx s3 = p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3;  // ordered distinct triples
    const cplx x = z[i];
    cplx r;
    switch (s.spec.kind) {
      case ModelKind::Rabi:
        r = 2.0 * s1 * (w * x - g) * (w * x + g) -
            (2.0 * w * g * x * x + (2.0 * m - 1.0) * w * w * x + g * (w * w - 2.0 * g * g) / w);
        break;
      case ModelKind::TwoPhoton:
        r = g * g * x * x * 4.0 * s3 + g * (w * (v - 1.0) * x * x + 4.0 * g * sh * x) * 3.0 * s2 +
            (w * w / 4.0 * (v * v - 3.0 * v + 1.0) * x * x + w * g * (3.0 * sh * v - 3.0 * sec - 1.0) * x +
             4.0 * g * g * sec * sh) *
                2.0 * s1 +
            w * w * w / (8.0 * g) * v * (1.0 - v) * x * x + w * w / 2.0 * (m * v + sh * v * (v - 2.0) + sec) * x +
            2.0 * w * g * sec * (sh * v - sec);
        break;
      case ModelKind::TwoMode:
        r = g * g * x * x * 4.0 * s3 + 4.0 * g * (w * (v - 1.0) * x * x + g * sh * x) * 3.0 * s2 +
            (4.0 * w * w * (v * v - 3.0 * v + 1.0) * x * x + 4.0 * w * g * (3.0 * sh * v - 3.0 * sec - 1.0) * x +
             4.0 * g * g * sec * sh) *
                2.0 * s1 +
            8.0 * w * w * w / g * v * (1.0 - v) * x * x + 8.0 * w * w * (m * v + sh * v * (v - 2.0) + sec) * x +
            8.0 * w * g * sec * (sh * v - sec);
        break;
    }
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

/// |LHS| of the parameter constraint relating Delta^2 to the root sum.
inline double constraint_residual(const QesSolution& s) {
  const double w = s.spec.omega;
  const double g = s.spec.g;
  const double m = s.degree;
  const double v = squeeze_factor(s.spec).value;
  const double sec = s.spec.sector_value();
  cplx sum = 0.0;
  if (s.coeffs.size() == s.roots.size() + 1 && s.coeffs.size() >= 2) {
    sum = -s.coeffs[s.coeffs.size() - 2] / s.coeffs.back();  // Vieta
  } else {
    for (const cplx& r : s.roots) sum += r;
  }
  cplx lhs;
  switch (s.spec.kind) {
    case ModelKind::Rabi: lhs = s.delta_squared + 2.0 * m * g * g + 2.0 * w * g * sum; break;
    case ModelKind::TwoPhoton:
      lhs = s.delta_squared + 4.0 * w * w * (1.0 - v) * (m * (m + 2.0 * sec - 1.0) + w / (2.0 * g) * v * sum);
      break;
    case ModelKind::TwoMode:
      lhs = s.delta_squared + 4.0 * w * w * (1.0 - v) * (m * (m + 2.0 * sec - 1.0) + 2.0 * w / g * v * sum);
      break;
  }
  return std::abs(lhs);
}

/// Two-component Bargmann wavefunction psi_pm(z) = exp(-rate z) phi_pm(z).
struct BargmannWavefunction {
  double prefactor_rate = 0.0;
  std::vector<double> plus_coeffs;
  std::vector<double> minus_coeffs;  // empty when the lower component is undefined
  SectorBasisDescriptor basis;
};

inline BargmannWavefunction plus_component(const QesSolution& s) {
  return {squeeze_factor(s.spec).prefactor_rate, s.coeffs, {}, SectorBasisDescriptor(s.spec)};
}

// Either sign of Delta solves the coupled system, so it is not validated here.
inline ModelSpec without_delta(ModelSpec spec) {
  spec.delta.reset();
  return spec;
}

/// phi_- = -(1/Delta) L phi_+ with L the exactly solvable factor.
inline BargmannWavefunction second_component(const QesSolution& s) {
  if (s.branch == Branch::DegenerateAtom || !(s.delta_squared > 0.0))
    throw Error(ErrorCode::DegenerateAtomBranch, "Delta = 0: lower component not fixed by the coupled system");
  const double delta = s.spec.delta.value_or(std::sqrt(s.delta_squared));
  const CoupledFactors f = coupled_factors(without_delta(s.spec), s.energy);
  std::vector<double> minus = f.exactly_solvable.apply(s.coeffs);
  minus.resize(s.coeffs.size());  // L has no raising band
  for (double& c : minus) c = -c / delta;
  BargmannWavefunction wf = plus_component(s);
  wf.minus_coeffs = std::move(minus);
  return wf;
}

/// Max-norm residuals of both coupled first-level equations, relative to
/// max|phi_+|.
inline double coupled_residual(const QesSolution& s, const BargmannWavefunction& wf) {
  const double delta = s.spec.delta.value_or(std::sqrt(s.delta_squared));
  const CoupledFactors f = coupled_factors(without_delta(s.spec), s.energy);
  std::vector<double> r1 = f.exactly_solvable.apply(wf.plus_coeffs);
  std::vector<double> r2 = f.partner.apply(wf.minus_coeffs);
  for (std::size_t k = 0; k < wf.minus_coeffs.size(); ++k) r1[k] += delta * wf.minus_coeffs[k];
  for (std::size_t k = 0; k < wf.plus_coeffs.size() && k < r2.size(); ++k)
    r2[k] -= f.delta_sq_sign * delta * wf.plus_coeffs[k];
  const double scale = std::max(1.0, max_abs(wf.plus_coeffs));
  return std::max(max_abs(r1), max_abs(r2)) / scale;
}

/// Row 0: psi_+(z), row 1: psi_-(z) at each sample point (row 1 is zero
/// when the lower component is undefined).
inline Eigen::MatrixXcd wavefunction_eval(const BargmannWavefunction& wf, std::span<const double> points) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const cplx z = points[i];
    const cplx pre = std::exp(-wf.prefactor_rate * z);
    out(0, i) = pre * poly_eval(std::span<const double>(wf.plus_coeffs), z);
    out(1, i) = pre * poly_eval(std::span<const double>(wf.minus_coeffs), z);
  }
  return out;
}

}  // namespace qes
