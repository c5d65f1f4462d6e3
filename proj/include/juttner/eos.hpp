#pragma once

// Kinetic equation of state of a Juttner gas:
//
//   p   = k_B n theta = m0 c^2 n / beta
//   rho = m0 c^2 n K_1(beta)/K_2(beta) + 3 p
//   n   = 4 pi e^4 m0^3 c^3 h^-3 exp(-eta/k_B) K_2(beta)/beta exp(beta K_1/K_2)
//
// e^4 is Euler's number to the fourth power. All Bessel quantities are taken
// in scaled or log form so nothing overflows for large beta.

#include <array>

namespace juttner::eos {

struct PhysicalConstants {
  double m0 = 1.0;  // particle rest mass
  double c = 1.0;   // speed of light
  double kB = 1.0;  // Boltzmann constant
  double h = 1.0;   // Planck constant

  /// Throws DomainError unless all four are positive and finite.
  void validate() const;
  double rest_energy() const { return m0 * c * c; }
  /// ln(4 pi e^4 m0^3 c^3 / h^3)
  double log_entropy_prefactor() const;
};

inline constexpr PhysicalConstants kNondimensional{};

struct ThermoState {
  double n = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  double p = 0.0;
  double rho = 0.0;
  double eta = 0.0;
  double psi = 0.0;  // rho / n
  double cs2 = 0.0;  // (c_S / c)^2
};

struct InversionResult {
  double n = 0.0;
  double beta = 0.0;
  double residual_eta = 0.0;  // absolute, in units of k_B
  double residual_rho = 0.0;  // relative
  int iterations = 0;
  bool bracket_used = false;
};

struct ForwardValues {
  double eta = 0.0;
  double rho = 0.0;
};

/// Row-major d(eta, rho)/d(n, beta).
using Jacobian = std::array<std::array<double, 2>, 2>;

inline constexpr double kDefaultInversionTol = 1e-13;
inline constexpr int kMaxInversionIterations = 100;

double temperature(double beta, const PhysicalConstants& k = kNondimensional);
double pressure(double n, double beta, const PhysicalConstants& k = kNondimensional);
double energy_density(double n, double beta, const PhysicalConstants& k = kNondimensional);
double entropy_per_particle(double n, double beta, const PhysicalConstants& k = kNondimensional);

/// psi(beta) = 3/beta + K_1/K_2, energy per particle in units of m0 c^2.
double specific_energy(double beta);
/// d psi / d beta = K_1/K_2 derivative - 3/beta^2; strictly negative.
double specific_energy_derivative(double beta);

ForwardValues forward_map(double n, double beta, const PhysicalConstants& k = kNondimensional);

/// ln n as a function of beta at fixed entropy per particle.
double log_density_at_entropy(double beta, double eta, const PhysicalConstants& k = kNondimensional);

/// Recovers (n, beta) from (eta, rho). Eliminates n through the entropy
/// relation and solves the remaining scalar equation in ln beta with a
/// safeguarded Newton iteration. Throws DomainError, BracketError or
/// AccuracyError.
InversionResult invert_map(double eta, double rho, const PhysicalConstants& k = kNondimensional,
                           double tol = kDefaultInversionTol);

/// Pressure as a function of (eta, rho).
double f_kinetic(double eta, double rho, const PhysicalConstants& k = kNondimensional,
                 double tol = kDefaultInversionTol);

/// M(beta) = 3 + beta r + (4r + beta r^2 - beta) / (3r + beta r^2 - beta - 4/beta),
/// the reciprocal of dp/drho at constant entropy. Throws InvariantViolation if
/// the denominator is not strictly negative.
double inverse_sound_speed_squared(double beta);

double sound_speed_squared(double beta);

Jacobian jacobian(double n, double beta, const PhysicalConstants& k = kNondimensional);

double determinant(const Jacobian& j);

ThermoState state(double n, double beta, const PhysicalConstants& k = kNondimensional);

}  // namespace juttner::eos
