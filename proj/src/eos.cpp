#include "juttner/eos.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "juttner/bessel.hpp"
#include "juttner/errors.hpp"

namespace juttner::eos {

namespace {

void require_positive(double x, const char* name) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite, got " << x;
    throw DomainError(msg.str());
  }
}

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(name) + " must be finite");
  }
}

// ln K_2(beta) - ln beta + beta K_1/K_2, the beta-dependent part of the
// entropy relation. With S_j = e^beta K_j the exponentials combine into
// ln S_2 - ln beta - beta (1 - K_1/K_2), which stays finite for any beta.
double entropy_beta_part(double beta) {
  const bessel::BesselTriple t = bessel::besselK_triple(beta);
  const double r = t.scaled[1] / t.scaled[2];
  return std::log(t.scaled[2]) - std::log(beta) - beta * (1.0 - r);
}

}  // namespace

void PhysicalConstants::validate() const {
  require_positive(m0, "m0");
  require_positive(c, "c");
  require_positive(kB, "kB");
  require_positive(h, "h");
}

double PhysicalConstants::log_entropy_prefactor() const {
  return std::log(4.0 * std::numbers::pi) + 4.0 + 3.0 * (std::log(m0) + std::log(c) - std::log(h));
}

double temperature(double beta, const PhysicalConstants& k) {
  require_positive(beta, "beta");
  k.validate();
  return k.rest_energy() / (k.kB * beta);
}

double pressure(double n, double beta, const PhysicalConstants& k) {
  require_positive(n, "n");
  require_positive(beta, "beta");
  k.validate();
  return k.rest_energy() * n / beta;
}

double energy_density(double n, double beta, const PhysicalConstants& k) {
  const double p = pressure(n, beta, k);
  return k.rest_energy() * n * bessel::ratio12(beta).ratio + 3.0 * p;
}

double entropy_per_particle(double n, double beta, const PhysicalConstants& k) {
  require_positive(n, "n");
  require_positive(beta, "beta");
  k.validate();
  return k.kB * (k.log_entropy_prefactor() + entropy_beta_part(beta) - std::log(n));
}

double specific_energy(double beta) {
  require_positive(beta, "beta");
  return 3.0 / beta + bessel::ratio12(beta).ratio;
}

double specific_energy_derivative(double beta) {
  require_positive(beta, "beta");
  return bessel::ratio12(beta).derivative - 3.0 / (beta * beta);
}

ForwardValues forward_map(double n, double beta, const PhysicalConstants& k) {
  return {entropy_per_particle(n, beta, k), energy_density(n, beta, k)};
}

double log_density_at_entropy(double beta, double eta, const PhysicalConstants& k) {
  require_positive(beta, "beta");
  require_finite(eta, "eta");
  k.validate();
  return k.log_entropy_prefactor() + entropy_beta_part(beta) - eta / k.kB;
}

namespace {

constexpr double kMinLogBeta = -30.0 * std::numbers::ln2;
constexpr double kMaxLogBeta = 30.0 * std::numbers::ln2;

// Residual of ln(m0 c^2 n(beta; eta) psi(beta)) - ln rho as a function of
// u = ln beta. Strictly decreasing: dG/du = beta psi'(beta) (beta + 1/psi).
struct LogEnergyResidual {
  double eta;
  double log_rho;
  const PhysicalConstants& k;

  double value(double u) const {
    const double beta = std::exp(u);
    return log_density_at_entropy(beta, eta, k) + std::log(k.rest_energy()) +
           std::log(specific_energy(beta)) - log_rho;
  }

  double slope(double u) const {
    const double beta = std::exp(u);
    const double psi = specific_energy(beta);
    return beta * specific_energy_derivative(beta) * (beta + 1.0 / psi);
  }
};

}  // namespace

InversionResult invert_map(double eta, double rho, const PhysicalConstants& k, double tol) {
  require_finite(eta, "eta");
  require_positive(rho, "rho");
  k.validate();
  if (!(tol >= 1e-13) || !std::isfinite(tol)) {
    throw DomainError("inversion tolerance must be >= 1e-13");
  }

  const LogEnergyResidual residual{eta, std::log(rho), k};

  // Expand outward from beta = 1 by doubling until the residual changes sign.
  double lo = 0.0, hi = 0.0;
  double g_lo = residual.value(0.0), g_hi = g_lo;
  if (g_lo > 0.0) {
    while (g_hi > 0.0) {
      lo = hi;
      g_lo = g_hi;
      hi += std::numbers::ln2;
      if (hi > kMaxLogBeta) {
        throw BracketError("inversion bracket expansion failed", std::exp(0.0), std::exp(kMaxLogBeta));
      }
      g_hi = residual.value(hi);
    }
  } else if (g_lo < 0.0) {
    while (g_lo < 0.0) {
      hi = lo;
      g_hi = g_lo;
      lo -= std::numbers::ln2;
      if (lo < kMinLogBeta) {
        throw BracketError("inversion bracket expansion failed", std::exp(kMinLogBeta), std::exp(0.0));
      }
      g_lo = residual.value(lo);
    }
  }

  InversionResult result;
  double u = std::fabs(g_lo) <= std::fabs(g_hi) ? lo : hi;
  for (int iter = 1; iter <= kMaxInversionIterations; ++iter) {
    result.iterations = iter;
    const double beta = std::exp(u);
    const double n = std::exp(log_density_at_entropy(beta, eta, k));
    result.n = n;
    result.beta = beta;
    result.residual_rho = (energy_density(n, beta, k) - rho) / rho;
    result.residual_eta = (entropy_per_particle(n, beta, k) - eta) / k.kB;
    if (std::fabs(result.residual_rho) < tol && std::fabs(result.residual_eta) < tol) {
      return result;
    }

    const double g = residual.value(u);
    if (g > 0.0) {
      lo = u;
    } else if (g < 0.0) {
      hi = u;
    }
    const double slope = residual.slope(u);
    double next = u - g / slope;
    if (!(slope < 0.0) || !(next >= lo && next <= hi)) {
      next = 0.5 * (lo + hi);
      result.bracket_used = true;
    }
    if (next == u) {
      break;
    }
    u = next;
  }
  std::ostringstream msg;
  msg << "inversion did not reach tolerance " << tol << " (residual_rho = " << result.residual_rho
      << ", residual_eta = " << result.residual_eta << ")";
  throw AccuracyError(msg.str());
}

double f_kinetic(double eta, double rho, const PhysicalConstants& k, double tol) {
  const InversionResult inv = invert_map(eta, rho, k, tol);
  return pressure(inv.n, inv.beta, k);
}

double inverse_sound_speed_squared(double beta) {
  require_positive(beta, "beta");
  const double r = bessel::ratio12(beta).ratio;
  const double denominator = 3.0 * r + beta * r * r - beta - 4.0 / beta;
  if (!(denominator < 0.0)) {
    std::ostringstream msg;
    msg << "sound speed denominator is not negative at beta = " << beta << " (" << denominator
        << "); Bessel ratio inaccurate";
    throw InvariantViolation(msg.str());
  }
  return 3.0 + beta * r + (4.0 * r + beta * r * r - beta) / denominator;
}

double sound_speed_squared(double beta) { return 1.0 / inverse_sound_speed_squared(beta); }

Jacobian jacobian(double n, double beta, const PhysicalConstants& k) {
  require_positive(n, "n");
  require_positive(beta, "beta");
  k.validate();
  const double psi = specific_energy(beta);
  const double dpsi = specific_energy_derivative(beta);
  // d(ln K_2)/dbeta = -K_1/K_2 - 2/beta, so the beta-part of eta/k_B has
  // derivative beta * (K_1/K_2)' - 3/beta = beta * psi'.
  return {{{-k.kB / n, k.kB * beta * dpsi}, {k.rest_energy() * psi, k.rest_energy() * n * dpsi}}};
}

double determinant(const Jacobian& j) { return j[0][0] * j[1][1] - j[0][1] * j[1][0]; }

ThermoState state(double n, double beta, const PhysicalConstants& k) {
  ThermoState s;
  s.n = n;
  s.beta = beta;
  s.theta = temperature(beta, k);
  s.p = pressure(n, beta, k);
  s.rho = energy_density(n, beta, k);
  s.eta = entropy_per_particle(n, beta, k);
  s.psi = s.rho / n;
  s.cs2 = sound_speed_squared(beta);
  return s;
}

}  // namespace juttner::eos
