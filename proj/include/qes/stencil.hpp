#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "qes/error.hpp"
#include "qes/model.hpp"

namespace qes {

/// Linear differential operator  sum_{m,j} a[m][j] z^j (d/dz)^m  with
/// polynomial coefficients of degree <= 2 and order <= 4.
///
/// Acting on z^k, the term (m, j) lands on z^{k+j-m} with weight
/// a[m][j] k(k-1)...(k-m+1), so the image of a coefficient vector is banded.
class DiffOperator {
 public:
  static constexpr int kMaxOrder = 4;
  static constexpr int kMaxPower = 2;
  using Table = std::array<std::array<double, kMaxPower + 1>, kMaxOrder + 1>;

  DiffOperator() = default;
  explicit DiffOperator(const Table& table) : table_(table) {}

  const Table& table() const { return table_; }
  double coefficient(int order, int power) const { return table_[order][power]; }

  // Weight with which c_k contributes to the z^{k+offset} coefficient.
  double band(int offset, double k) const {
    double sum = 0.0;
    for (int m = 0; m <= kMaxOrder; ++m) {
      const int j = offset + m;
      if (j < 0 || j > kMaxPower || table_[m][j] == 0.0) continue;
      sum += table_[m][j] * falling_factorial(k, m);
    }
    return sum;
  }

  int max_offset() const {
    int best = -kMaxOrder;
    for (int m = 0; m <= kMaxOrder; ++m)
      for (int j = 0; j <= kMaxPower; ++j)
        if (table_[m][j] != 0.0) best = std::max(best, j - m);
    return best;
  }

  // Image coefficients, length coeffs.size() + 1 (room for one raising band).
  std::vector<double> apply(std::span<const double> coeffs) const {
    std::vector<double> out(coeffs.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] == 0.0) continue;
      for (int m = 0; m <= kMaxOrder; ++m) {
        const double ff = falling_factorial(static_cast<double>(k), m);
        if (ff == 0.0) continue;
        for (int j = 0; j <= kMaxPower; ++j) {
          const long target = static_cast<long>(k) + j - m;
          if (table_[m][j] == 0.0 || target < 0) continue;
          if (static_cast<std::size_t>(target) >= out.size())
            throw Error(ErrorCode::InvalidArgument, "operator raises degree by more than one");
          out[static_cast<std::size_t>(target)] += table_[m][j] * ff * coeffs[k];
        }
      }
    }
    return out;
  }

  static double falling_factorial(double k, int m) {
    double r = 1.0;
    for (int i = 0; i < m; ++i) r *= (k - i);
    return r;
  }

 private:
  Table table_{};
};

/// Banded action of a model's Fuchsian equation on monomial coefficients.
///
/// The operator carries only the Delta^2-independent part; the full equation
/// reads  (operator + delta_sq_sign * Delta^2) phi_+ = 0.
struct OdeStencil {
  static constexpr std::array<int, 4> kBandOffsets{1, 0, -1, -2};

  int degree_ceiling = 0;
  DiffOperator op;
  int delta_sq_sign = 1;

  double band(int offset, double k) const { return op.band(offset, k); }
};

namespace detail {

inline DiffOperator::Table rabi_table(double w, double g, double e) {
  DiffOperator::Table a{};
  a[2] = {-g * g, 0.0, w * w};
  a[1] = {g / w * (2.0 * g * g - w * w), w * w - 2.0 * g * g - 2.0 * e * w, -2.0 * w * g};
  a[0] = {e * e - g * g * g * g / (w * w), 2.0 * g * (g * g / w + e), 0.0};
  return a;
}

inline DiffOperator::Table two_photon_table(double w, double g, double q, double e, double v) {
  DiffOperator::Table a{};
  const double qh = q + 0.5;
  const double u = 1.0 - v;
  a[4] = {0.0, 0.0, 16.0 * g * g};
  a[3] = {0.0, 64.0 * g * g * qh, 16.0 * g * w * (v - 1.0)};
  a[2] = {64.0 * g * g * q * qh, 16.0 * w * g * (3.0 * qh * v - 3.0 * q - 1.0), 4.0 * w * w * (v * v - 3.0 * v + 1.0)};
  a[1] = {32.0 * w * g * q * (qh * v - q),
          8.0 * w * w * q * u + 8.0 * w * w * qh * u * u + 4.0 * w * (e - 2.0 * w * (q + 0.25)),
          2.0 * w * w * w / g * v * u};
  const double shifted = e - 2.0 * w * (q - 0.25);
  a[0] = {4.0 * w * w * q * q * u * u - shifted * shifted, w * w / g * u * (2.0 * q * w * v - 0.5 * w - e), 0.0};
  return a;
}

inline DiffOperator::Table two_mode_table(double w, double g, double kappa, double e, double v) {
  DiffOperator::Table a{};
  const double kh = kappa + 0.5;
  const double u = 1.0 - v;
  a[4] = {0.0, 0.0, g * g};
  a[3] = {0.0, 4.0 * g * g * kh, 4.0 * g * w * (v - 1.0)};
  a[2] = {4.0 * g * g * kappa * kh, 4.0 * w * g * (3.0 * kh * v - 3.0 * kappa - 1.0),
          4.0 * w * w * (v * v - 3.0 * v + 1.0)};
  a[1] = {8.0 * w * g * kappa * (kh * v - kappa),
          8.0 * w * w * kappa * u + 8.0 * w * w * kh * u * u + 4.0 * w * (e - 2.0 * w * kappa),
          8.0 * w * w * w / g * v * u};
  const double shifted = e - 2.0 * w * (kappa - 0.5);
  a[0] = {4.0 * w * w * kappa * kappa * u * u - shifted * shifted, 4.0 * w * w / g * u * (2.0 * kappa * w * v - w - e),
          0.0};
  return a;
}

}  // namespace detail

inline int delta_sq_sign(ModelKind kind) { return kind == ModelKind::Rabi ? -1 : 1; }

inline OdeStencil ode_stencil(const ModelSpec& spec, int degree, double energy) {
  validate(spec);
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  if (!std::isfinite(energy)) throw Error(ErrorCode::InvalidArgument, "energy must be finite");
  const double w = spec.omega;
  const double g = spec.g;
  const double v = squeeze_factor(spec).value;
  OdeStencil st;
  st.degree_ceiling = degree;
  st.delta_sq_sign = delta_sq_sign(spec.kind);
  switch (spec.kind) {
    case ModelKind::Rabi: st.op = DiffOperator(detail::rabi_table(w, g, energy)); break;
    case ModelKind::TwoPhoton: st.op = DiffOperator(detail::two_photon_table(w, g, spec.sector_value(), energy, v)); break;
    case ModelKind::TwoMode: st.op = DiffOperator(detail::two_mode_table(w, g, spec.sector_value(), energy, v)); break;
  }
  return st;
}

inline std::vector<double> apply_ode(const OdeStencil& stencil, double delta_sq, std::span<const double> coeffs) {
  if (coeffs.size() > static_cast<std::size_t>(stencil.degree_ceiling) + 1)
    throw Error(ErrorCode::InvalidArgument, "coefficient vector exceeds stencil degree ceiling");
  std::vector<double> out = stencil.op.apply(coeffs);
  for (std::size_t k = 0; k < coeffs.size(); ++k) out[k] += stencil.delta_sq_sign * delta_sq * coeffs[k];
  return out;
}

/// The two first-order-in-the-spin factors of the coupled system after the
/// exponential substitution:
///   exactly_solvable * phi_+ = -Delta phi_-
///   partner          * phi_- =  delta_sq_sign * Delta phi_+
/// so that partner * exactly_solvable = stencil operator + delta_sq_sign Delta^2.
struct CoupledFactors {
  DiffOperator exactly_solvable;
  DiffOperator partner;
  int delta_sq_sign = 1;
};

inline CoupledFactors coupled_factors(const ModelSpec& spec, double energy) {
  validate(spec);
  const double w = spec.omega;
  const double g = spec.g;
  const double v = squeeze_factor(spec).value;
  const double s = spec.sector_value();
  DiffOperator::Table l{};
  DiffOperator::Table p{};
  switch (spec.kind) {
    case ModelKind::Rabi:
      l[1] = {g, w, 0.0};
      l[0] = {-(g * g / w + energy), 0.0, 0.0};
      p[1] = {-g, w, 0.0};
      p[0] = {g * g / w - energy, -2.0 * g, 0.0};
      break;
    case ModelKind::TwoPhoton:
      l[2] = {0.0, 4.0 * g, 0.0};
      l[1] = {8.0 * g * s, 2.0 * w * v, 0.0};
      l[0] = {2.0 * s * w * v - 0.5 * w - energy, 0.0, 0.0};
      p[2] = {0.0, 4.0 * g, 0.0};
      p[1] = {8.0 * g * s, 2.0 * w * (v - 2.0), 0.0};
      p[0] = {2.0 * s * w * (v - 2.0) + 0.5 * w + energy, w * w / g * (1.0 - v), 0.0};
      break;
    case ModelKind::TwoMode:
      l[2] = {0.0, g, 0.0};
      l[1] = {2.0 * g * s, 2.0 * w * v, 0.0};
      l[0] = {2.0 * s * w * v - w - energy, 0.0, 0.0};
      p[2] = {0.0, g, 0.0};
      p[1] = {2.0 * g * s, 2.0 * w * (v - 2.0), 0.0};
      p[0] = {2.0 * s * w * (v - 2.0) + w + energy, 4.0 * w * w / g * (1.0 - v), 0.0};
      break;
  }
  return {DiffOperator(l), DiffOperator(p), delta_sq_sign(spec.kind)};
}

}  // namespace qes
