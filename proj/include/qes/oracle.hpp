#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "qes/error.hpp"
#include "qes/model.hpp"

namespace qes {

inline int default_nmax(ModelKind kind) { return kind == ModelKind::Rabi ? 64 : 256; }

/// Hamiltonian truncated to |sector, n> (x) {sigma_x = +1, -1}, n <= n_max.
/// Basis index is 2n for sigma_x = +1 and 2n + 1 for sigma_x = -1.
struct TruncatedHamiltonian {
  ModelSpec spec;
  int n_max = 0;
  Eigen::MatrixXd matrix;
  SectorBasisDescriptor basis;

  int dim() const { return 2 * (n_max + 1); }
  static int index(int n, int sx) { return 2 * n + (sx > 0 ? 0 : 1); }
};

namespace detail {

// Diagonal <n|H_field|n> and ladder amplitude t_n with <n+1,s|H|n,s> = s t_n.
struct LadderElements {
  double diagonal;
  double hop;
};

inline LadderElements ladder(const ModelSpec& spec, int n) {
  const double w = spec.omega;
  const double g = spec.g;
  switch (spec.kind) {
    case ModelKind::Rabi: return {w * n, g * std::sqrt(n + 1.0)};
    case ModelKind::TwoPhoton: {
      const Su11Elements k = su11_elements(spec, n);
      return {2.0 * w * (k.k0 - 0.25), 2.0 * g * k.kplus_amp};
    }
    case ModelKind::TwoMode: {
      const Su11Elements k = su11_elements(spec, n);
      return {2.0 * w * (k.k0 - 0.5), g * k.kplus_amp};
    }
  }
  return {0.0, 0.0};
}

inline const ModelSpec& require_oracle_spec(const ModelSpec& spec, int n_max) {
  validate(spec, CouplingPolicy::AllowZero);
  if (!spec.delta) throw Error(ErrorCode::InvalidArgument, "oracle requires delta");
  if (n_max < 4) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 4");
  return spec;
}

}  // namespace detail

inline TruncatedHamiltonian build_hamiltonian(const ModelSpec& spec, int n_max) {
  detail::require_oracle_spec(spec, n_max);
  TruncatedHamiltonian h{spec, n_max, Eigen::MatrixXd::Zero(2 * (n_max + 1), 2 * (n_max + 1)),
                         SectorBasisDescriptor(spec)};
  const double delta = *spec.delta;
  for (int n = 0; n <= n_max; ++n) {
    const detail::LadderElements e = detail::ladder(spec, n);
    for (int sx : {1, -1}) {
      const int i = TruncatedHamiltonian::index(n, sx);
      h.matrix(i, i) = e.diagonal;
      if (n < n_max) {
        const int j = TruncatedHamiltonian::index(n + 1, sx);
        h.matrix(i, j) = h.matrix(j, i) = sx * e.hop;
      }
    }
    const int p = TruncatedHamiltonian::index(n, 1);
    const int m = TruncatedHamiltonian::index(n, -1);
    h.matrix(p, m) = h.matrix(m, p) = delta;
  }
  return h;
}

/// k smallest eigenvalues, ascending (dense symmetric solve).
inline std::vector<double> spectrum(const TruncatedHamiltonian& h, int k) {
  if (k < 1 || k > h.dim()) throw Error(ErrorCode::InvalidArgument, "level count out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h.matrix, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::IllConditioned, "symmetric eigensolve failed");
  const Eigen::VectorXd& ev = eig.eigenvalues();
  return {ev.data(), ev.data() + k};
}

/// Full spectrum of the same truncated Hamiltonian via its two parity blocks.
///
/// The states (|n,+> + p(-1)^n |n,->)/sqrt(2) split the ladder into two
/// tridiagonal blocks with diagonal d_n + p(-1)^n Delta and off-diagonal t_n,
/// so this agrees with `spectrum(build_hamiltonian(spec, n_max), dim)` at
/// O(n^2) cost.
inline std::vector<double> parity_spectrum(const ModelSpec& spec, int n_max) {
  detail::require_oracle_spec(spec, n_max);
  const double delta = *spec.delta;
  const int n = n_max + 1;
  std::vector<double> all;
  all.reserve(2 * n);
  for (int parity : {1, -1}) {
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n - 1);
    for (int i = 0; i < n; ++i) {
      const detail::LadderElements e = detail::ladder(spec, i);
      diag[i] = e.diagonal + parity * (i % 2 == 0 ? 1.0 : -1.0) * delta;
      if (i + 1 < n) sub[i] = e.hop;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::IllConditioned, "tridiagonal eigensolve failed");
    all.insert(all.end(), eig.eigenvalues().data(), eig.eigenvalues().data() + n);
  }
  std::sort(all.begin(), all.end());
  return all;
}

struct EnergyMatch {
  bool matched = false;
  double gap = 0.0;               // min |E - eigenvalue| at n_max
  double truncation_drift = 0.0;  // |gap(n_max) - gap(2 n_max)|
  int multiplicity = 0;           // eigenvalues within tol of E at n_max
};

// Energies above (level spacing) * n_max / 4 are not trusted at this cutoff.
inline double reliable_window(const ModelSpec& spec, int n_max) {
  if (spec.kind == ModelKind::Rabi) return spec.omega * n_max / 4.0;
  return 2.0 * spec.omega * squeeze_factor(spec).value * n_max / 4.0;
}

inline EnergyMatch match_energy(double energy, const ModelSpec& spec, int n_max, double tol) {
  detail::require_oracle_spec(spec, n_max);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
  if (!(energy < reliable_window(spec, n_max)))
    throw Error(ErrorCode::WindowExceeded, "energy above the reliable window; raise n_max");
  auto gap_at = [&](int cutoff, int* count) {
    double best = INFINITY;
    for (double ev : parity_spectrum(spec, cutoff)) {
      const double d = std::abs(ev - energy);
      best = std::min(best, d);
      if (count && d <= tol) ++*count;
    }
    return best;
  };
  EnergyMatch m;
  m.gap = gap_at(n_max, &m.multiplicity);
  m.truncation_drift = std::abs(m.gap - gap_at(2 * n_max, nullptr));
  m.matched = m.gap <= tol && m.truncation_drift <= tol / 10.0;
  return m;
}

}  // namespace qes
