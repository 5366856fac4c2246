#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qes/error.hpp"

namespace qes {

using cplx = std::complex<double>;

// Coefficient vectors are stored in ascending order: c[0] + c[1] z + ...

template <typename T>
cplx poly_eval(std::span<const T> coeffs, cplx z) {
  cplx acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + cplx(coeffs[i]);
  return acc;
}

template <typename T>
std::vector<T> poly_derivative(std::span<const T> coeffs) {
  if (coeffs.size() <= 1) return {};
  std::vector<T> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = coeffs[i] * static_cast<double>(i);
  return d;
}

// Monic polynomial prod_i (z - z_i).
inline std::vector<cplx> monic_from_roots(std::span<const cplx> roots) {
  std::vector<cplx> c{1.0};
  for (const cplx& r : roots) {
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
    c[0] = -r * c[0];
  }
  return c;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Highest index whose coefficient exceeds rel_tol * max|c|; -1 for the zero polynomial.
inline int effective_degree(std::span<const double> coeffs, double rel_tol = 1e-10) {
  const double scale = max_abs(coeffs);
  if (scale == 0.0) return -1;
  for (std::size_t i = coeffs.size(); i-- > 0;)
    if (std::abs(coeffs[i]) > rel_tol * scale) return static_cast<int>(i);
  return -1;
}

/// Roots of a real polynomial: eigenvalues of the (variable-scaled)
/// companion matrix, refined by simultaneous Aberth-Ehrlich iteration.
inline std::vector<cplx> polynomial_roots(std::span<const double> coeffs) {
  std::size_t n = coeffs.size();
  while (n > 0 && coeffs[n - 1] == 0.0) --n;
  if (n <= 1) return {};
  const int degree = static_cast<int>(n) - 1;
  const double lead = coeffs[n - 1];

  // z = s x with s the Cauchy-type bound max |c_k / c_n|^(1/(n-k))
  double s = 0.0;
  for (int k = 0; k < degree; ++k)
    if (coeffs[k] != 0.0) s = std::max(s, std::pow(std::abs(coeffs[k] / lead), 1.0 / (degree - k)));
  if (!(s > 0.0) || !std::isfinite(s)) s = 1.0;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[i] / lead / std::pow(s, degree - i);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::IllConditioned, "companion eigensolve failed");

  const std::span<const double> p(coeffs.data(), n);
  const std::vector<double> dp = poly_derivative(p);
  std::vector<cplx> roots(degree);
  for (int i = 0; i < degree; ++i) roots[i] = s * solver.eigenvalues()[i];

  for (int it = 0; it < 100; ++it) {
    double largest_step = 0.0;
    for (int i = 0; i < degree; ++i) {
      const cplx v = poly_eval(p, roots[i]);
      if (v == 0.0) continue;
      const cplx ratio = v / poly_eval(std::span<const double>(dp), roots[i]);
      cplx repel = 0.0;
      for (int j = 0; j < degree; ++j)
        if (j != i && roots[j] != roots[i]) repel += 1.0 / (roots[i] - roots[j]);
      const cplx step = ratio / (1.0 - ratio * repel);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      roots[i] -= step;
      largest_step = std::max(largest_step, std::abs(step) / std::max(std::abs(roots[i]), 1e-300));
    }
    if (largest_step < 1e-15) break;
  }
  // exactly real roots where the imaginary part is at rounding level
  for (cplx& z : roots)
    if (std::abs(z.imag()) <= 1e-14 * std::abs(z)) z = cplx(z.real(), 0.0);

  std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

}  // namespace qes
