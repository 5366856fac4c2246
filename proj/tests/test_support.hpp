#pragma once

// Test-only oracles. Nothing here calls into the stencil or pencil code it
// is used to check.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace qes::testing {

using Poly = std::vector<double>;  // ascending coefficients

inline Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<double>(i));
  return d;
}

inline Poly multiply(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline Poly add(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

/// sum_m terms[m](z) (d/dz)^m, applied by repeated differentiation.
struct NaiveOperator {
  std::vector<Poly> terms;

  Poly operator()(const Poly& p) const {
    Poly out;
    Poly d = p;
    for (const Poly& t : terms) {
      out = add(out, multiply(t, d));
      d = derivative(d);
    }
    return out;
  }
};

/// Factors of the coupled system, transcribed from the displayed equations:
/// first * phi_+ = -Delta phi_-  and  second * phi_- = (+/-) Delta phi_+.
struct NaiveFactors {
  NaiveOperator first;
  NaiveOperator second;
};

inline NaiveFactors rabi_factors(double w, double g, double e) {
  return {{{{-(g * g / w + e)}, {g, w}}}, {{{g * g / w - e, -2.0 * g}, {-g, w}}}};
}

inline NaiveFactors two_photon_factors(double w, double g, double q, double e) {
  const double v = std::sqrt(1.0 - 4.0 * g * g / (w * w));
  return {{{{2.0 * q * w * v - 0.5 * w - e}, {8.0 * g * q, 2.0 * w * v}, {0.0, 4.0 * g}}},
          {{{2.0 * q * w * (v - 2.0) + 0.5 * w + e, w * w / g * (1.0 - v)},
            {8.0 * g * q, 2.0 * w * (v - 2.0)},
            {0.0, 4.0 * g}}}};
}

inline NaiveFactors two_mode_factors(double w, double g, double kappa, double e) {
  const double v = std::sqrt(1.0 - g * g / (w * w));
  return {{{{2.0 * kappa * w * v - w - e}, {2.0 * g * kappa, 2.0 * w * v}, {0.0, g}}},
          {{{2.0 * kappa * w * (v - 2.0) + w + e, 4.0 * w * w / g * (1.0 - v)},
            {2.0 * g * kappa, 2.0 * w * (v - 2.0)},
            {0.0, g}}}};
}

inline Poly compose(const NaiveFactors& f, const Poly& p) { return f.second(f.first(p)); }

inline double max_abs(const Poly& p) {
  double m = 0.0;
  for (double x : p) m = std::max(m, std::abs(x));
  return m;
}

/// Single-mode 2-photon Rabi Hamiltonian in the photon Fock basis
/// {0..n_photons-1} x {sigma_x = +, -}, built from (a^dag)^2 and a^2.
inline Eigen::MatrixXd two_photon_fock_matrix(double w, double g, double delta, int n_photons) {
  const int dim = 2 * n_photons;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < n_photons; ++n) {
    for (int s = 0; s < 2; ++s) {
      const double sx = s == 0 ? 1.0 : -1.0;
      const int i = 2 * n + s;
      h(i, i) = w * n;
      if (n + 2 < n_photons) {
        const int j = 2 * (n + 2) + s;
        h(i, j) = h(j, i) = sx * g * std::sqrt((n + 1.0) * (n + 2.0));
      }
    }
    h(2 * n, 2 * n + 1) = h(2 * n + 1, 2 * n) = delta;
  }
  return h;
}

inline std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return {eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size()};
}

}  // namespace qes::testing
