#pragma once

// Numerical verification of the Bessel-ratio inequalities behind the kinetic
// equation of state, with signed margins (positive = satisfied) and an
// evaluation-error budget per record.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace juttner::verify {

enum class Check {
  conjecture1,     // 3r + beta r^2 - beta - 4/beta < 0
  conjecture2,     // 3 < M(beta) < inf
  reformulation,   // r^2 < 1 - 3/(4 + beta r)
  kunik,           // r' < 3/beta^2
  ratio_bound,     // 0 < r < beta/2
  ratio_sandwich,  // rational bounds on r, beta >= 1/2
  envelopes,       // asymptotic envelopes of K_0 and K_0 + K_1
  polynomial,      // degree-6 polynomial positivity, beta >= 1/2
  taylor,          // Taylor sandwiches of 1/sqrt(1+x^2) and sqrt(1+x^2) at x = beta
};

enum class Status { pass, fail, inconclusive };

std::string_view check_name(Check check);
std::optional<Check> parse_check(std::string_view name);
std::span<const Check> all_checks();
std::string_view status_name(Status status);

/// Records with |margin| below this multiple of the error estimate are
/// reported inconclusive-at-precision.
inline constexpr double kInconclusiveFactor = 10.0;

/// fail for non-finite margins, inconclusive when |margin| is within
/// kInconclusiveFactor error estimates, otherwise by the sign of margin.
Status classify(double margin, double error_estimate);

struct CheckRecord {
  double beta = 0.0;
  std::string check_name;
  double value = 0.0;
  double margin = 0.0;          // min over slacks
  bool pass = false;            // margin > 0
  Status status = Status::fail;
  double error_estimate = 0.0;  // absolute, same units as margin
  std::vector<double> slacks;   // individual one-sided slacks
  std::string diagnostic;
};

CheckRecord check_conjecture1(double beta);
CheckRecord check_conjecture2(double beta);
CheckRecord check_reformulation(double beta);
CheckRecord check_kunik(double beta);
CheckRecord check_ratio_bound(double beta);
/// beta >= 1/2
CheckRecord check_ratio_sandwich(double beta);
CheckRecord check_envelopes(double beta);
/// beta >= 1/2. Slacks are (3/4) P(beta) and the last three terms
/// 6150 beta^2 - 540 beta - 360.
CheckRecord check_polynomial_positivity(double beta);
/// Gaps are evaluated in cancellation-free closed form, so tiny x still
/// resolves.
CheckRecord check_taylor(double x);

/// (3/4)(3072 b^6 + 20992 b^5 + 36936 b^4 + 25107 b^3 + 6150 b^2 - 540 b - 360)
double scaled_polynomial(double beta);

/// Smallest beta a check accepts (0 means any positive beta).
double domain_minimum(Check check);

/// Runs one check; nullopt when beta lies outside the check's domain.
/// Numerical failures inside the check become failed records.
std::optional<CheckRecord> run_check(Check check, double beta);

struct GridSpec {
  double beta_min = 1e-3;
  double beta_max = 1e3;
  int points = 10000;
};

/// Log-spaced grid with exact endpoints; a single point yields {beta_min}.
/// Throws DomainError for nonpositive/non-finite bounds, beta_min > beta_max,
/// or points < 1.
std::vector<double> make_grid(const GridSpec& spec);

struct WorstMargin {
  double beta = 0.0;
  double margin = 0.0;
};

struct InequalityReport {
  std::vector<double> grid;
  std::vector<Check> checks;
  std::vector<CheckRecord> records;  // grid-major, then check order
  std::map<std::string, WorstMargin> worst_margin_per_check;
  std::size_t failures = 0;
  std::size_t inconclusive = 0;
  bool all_pass = true;
};

/// threads == 0 picks the hardware concurrency. Output does not depend on the
/// thread count.
InequalityReport sweep(std::span<const double> grid, std::span<const Check> checks,
                       unsigned threads = 0);
InequalityReport sweep(const GridSpec& spec, std::span<const Check> checks, unsigned threads = 0);

}  // namespace juttner::verify
