#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "qes/error.hpp"
#include "qes/rational.hpp"

namespace qes {

enum class ModelKind { Rabi, TwoPhoton, TwoMode };

constexpr std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Rabi: return "rabi";
    case ModelKind::TwoPhoton: return "two-photon";
    case ModelKind::TwoMode: return "two-mode";
  }
  return "unknown";
}

inline ModelKind parse_model_kind(std::string_view name) {
  if (name == "rabi") return ModelKind::Rabi;
  if (name == "two-photon") return ModelKind::TwoPhoton;
  if (name == "two-mode") return ModelKind::TwoMode;
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) + "'");
}

/// One of the three spin-boson models together with its parameters.
///
/// `sector` is the Bargmann index: absent for Rabi, q in {1/4, 3/4} for the
/// 2-photon model and kappa in {1/2, 1, 3/2, ...} for the two-mode model.
/// `delta` is half the atomic level splitting; it is an output of the
/// quasi-exact solver and an input of the Fock-space oracle.
struct ModelSpec {
  ModelKind kind = ModelKind::Rabi;
  std::optional<Rational> sector;
  double omega = 1.0;
  double g = 0.0;
  std::optional<double> delta;

  double sector_value() const { return sector ? sector->value() : 0.0; }
  std::string sector_string() const { return sector ? sector->str() : std::string(); }

  static ModelSpec rabi(double omega, double g, std::optional<double> delta = std::nullopt) {
    return {ModelKind::Rabi, std::nullopt, omega, g, delta};
  }
  static ModelSpec two_photon(Rational q, double omega, double g, std::optional<double> delta = std::nullopt) {
    return {ModelKind::TwoPhoton, q, omega, g, delta};
  }
  static ModelSpec two_mode(Rational kappa, double omega, double g, std::optional<double> delta = std::nullopt) {
    return {ModelKind::TwoMode, kappa, omega, g, delta};
  }
};

enum class CouplingPolicy {
  RequireNonzero,  // quasi-exact solver: prefactor rates divide by g
  AllowZero,       // Fock oracle: g = 0 is the decoupled atom + oscillator
};

struct ValidatedSpec {
  ModelSpec spec;
  bool degenerate_atom = false;  // delta given and equal to zero
};

inline bool is_valid_sector(ModelKind kind, const std::optional<Rational>& sector) {
  switch (kind) {
    case ModelKind::Rabi: return !sector.has_value();
    case ModelKind::TwoPhoton: return sector && (*sector == Rational(1, 4) || *sector == Rational(3, 4));
    case ModelKind::TwoMode:
      // 2*kappa must be a positive integer
      return sector && sector->num() > 0 && (sector->den() == 1 || sector->den() == 2);
  }
  return false;
}

inline ValidatedSpec validate(const ModelSpec& spec, CouplingPolicy policy = CouplingPolicy::RequireNonzero) {
  if (!(spec.omega > 0.0) || !std::isfinite(spec.omega))
    throw Error(ErrorCode::InvalidArgument, "omega must be finite and > 0");
  if (!std::isfinite(spec.g)) throw Error(ErrorCode::InvalidArgument, "g must be finite");
  if (spec.delta && (!std::isfinite(*spec.delta) || *spec.delta < 0.0))
    throw Error(ErrorCode::InvalidArgument, "delta must be finite and >= 0");
  if (!is_valid_sector(spec.kind, spec.sector)) {
    const std::string got = spec.sector ? spec.sector->str() : std::string("<none>");
    switch (spec.kind) {
      case ModelKind::Rabi: throw Error(ErrorCode::BadSector, "rabi model takes no sector, got " + got);
      case ModelKind::TwoPhoton: throw Error(ErrorCode::BadSector, "two-photon sector must be 1/4 or 3/4, got " + got);
      case ModelKind::TwoMode:
        throw Error(ErrorCode::BadSector, "two-mode sector must be a positive multiple of 1/2, got " + got);
    }
  }
  if (spec.g == 0.0 && policy == CouplingPolicy::RequireNonzero)
    throw Error(ErrorCode::ZeroCoupling, "g = 0 decouples atom and field");
  const double ratio = std::abs(spec.g) / spec.omega;
  if (spec.kind == ModelKind::TwoPhoton && 2.0 * ratio >= 1.0)
    throw Error(ErrorCode::CouplingOutOfRange, "two-photon model requires |2g/omega| < 1");
  if (spec.kind == ModelKind::TwoMode && ratio >= 1.0)
    throw Error(ErrorCode::CouplingOutOfRange, "two-mode model requires |g/omega| < 1");
  return {spec, spec.delta && *spec.delta == 0.0};
}

/// Squeeze factor (Omega for 2-photon, Lambda for two-mode, 1 for Rabi) and
/// the rate lambda of the Bargmann prefactor exp(-lambda z).
struct SqueezeFactor {
  double value = 1.0;
  double prefactor_rate = 0.0;
};

inline SqueezeFactor squeeze_factor(const ModelSpec& spec) {
  const double w = spec.omega;
  const double g = spec.g;
  switch (spec.kind) {
    case ModelKind::Rabi: return {1.0, g / w};
    case ModelKind::TwoPhoton: {
      const double v = std::sqrt(1.0 - 4.0 * g * g / (w * w));
      return {v, w / (4.0 * g) * (1.0 - v)};
    }
    case ModelKind::TwoMode: {
      const double v = std::sqrt(1.0 - g * g / (w * w));
      return {v, w / g * (1.0 - v)};
    }
  }
  return {};
}

/// Matrix elements of K0, K+ and K- in the positive discrete series with
/// Bargmann index `sector`:  K0|n> = (n+s)|n>,  K+|n> = kplus_amp |n+1>,
/// K-|n> = kminus_amp |n-1>.
struct Su11Elements {
  double k0 = 0.0;
  double kplus_amp = 0.0;
  double kminus_amp = 0.0;
};

inline Su11Elements su11_elements(double sector, std::int64_t n) {
  const double m = static_cast<double>(n);
  return {m + sector, std::sqrt((m + 1.0) * (m + 2.0 * sector)),
          n == 0 ? 0.0 : std::sqrt(m * (m + 2.0 * sector - 1.0))};
}

inline Su11Elements su11_elements(const ModelSpec& spec, std::int64_t n) {
  if (spec.kind == ModelKind::Rabi) throw Error(ErrorCode::WrongModel, "rabi model has no su(1,1) sector");
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 0");
  return su11_elements(spec.sector_value(), n);
}

inline double casimir_value(Rational sector) {
  const double s = sector.value();
  return s * (1.0 - s);
}

/// Fock content of the sector basis state with index n.
struct FockContent {
  std::int64_t mode1 = 0;
  std::int64_t mode2 = 0;  // always 0 unless the model is two-mode
};

class SectorBasisDescriptor {
 public:
  SectorBasisDescriptor(ModelKind kind, std::optional<Rational> sector) : kind_(kind), sector_(sector) {
    if (!is_valid_sector(kind, sector)) throw Error(ErrorCode::BadSector, "invalid sector for basis descriptor");
  }
  explicit SectorBasisDescriptor(const ModelSpec& spec) : SectorBasisDescriptor(spec.kind, spec.sector) {}

  ModelKind kind() const { return kind_; }
  const std::optional<Rational>& sector() const { return sector_; }

  FockContent fock_content(std::int64_t n) const {
    switch (kind_) {
      case ModelKind::Rabi: return {n, 0};
      case ModelKind::TwoPhoton: return {2 * n + (*sector_ == Rational(3, 4) ? 1 : 0), 0};
      case ModelKind::TwoMode: {
        const std::int64_t two_kappa = 2 * sector_->num() / sector_->den();
        return {n + two_kappa - 1, n};
      }
    }
    return {};
  }

  // log of the squared norm of the Bargmann monomial z^n in this basis,
  // i.e. log [2(n+q-1/4)]! or log (n+2k-1)! n! (log n! for Rabi).
  double log_norm_squared(std::int64_t n) const {
    const FockContent f = fock_content(n);
    return std::lgamma(static_cast<double>(f.mode1) + 1.0) + std::lgamma(static_cast<double>(f.mode2) + 1.0);
  }

 private:
  ModelKind kind_;
  std::optional<Rational> sector_;
};

}  // namespace qes
