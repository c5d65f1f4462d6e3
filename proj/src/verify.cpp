#include "juttner/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <thread>

#include "juttner/bessel.hpp"
#include "juttner/eos.hpp"
#include "juttner/errors.hpp"

namespace juttner::verify {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relative error budget of K_1/K_2 from two scaled Bessel values.
constexpr double kRatioRelErr = 2.0 * bessel::kFastPathRelTol;

constexpr std::array<Check, 9> kAllChecks = {
    Check::conjecture1,    Check::conjecture2, Check::reformulation,
    Check::kunik,          Check::ratio_bound, Check::ratio_sandwich,
    Check::envelopes,      Check::polynomial,  Check::taylor,
};

}  // namespace

Status classify(double margin, double error_estimate) {
  if (!std::isfinite(margin)) return Status::fail;
  if (std::fabs(margin) <= kInconclusiveFactor * error_estimate) return Status::inconclusive;
  return margin > 0.0 ? Status::pass : Status::fail;
}

namespace {

CheckRecord make_record(Check check, double beta, double value, std::vector<double> slacks,
                        double error_estimate) {
  CheckRecord rec;
  rec.beta = beta;
  rec.check_name = std::string(check_name(check));
  rec.value = value;
  rec.margin = slacks.empty() ? kNaN : *std::min_element(slacks.begin(), slacks.end());
  for (double s : slacks) {
    if (std::isnan(s)) rec.margin = kNaN;
  }
  rec.slacks = std::move(slacks);
  rec.pass = rec.margin > 0.0;
  rec.error_estimate = error_estimate;
  rec.status = classify(rec.margin, error_estimate);
  return rec;
}

// Worst-case change of f when the ratio moves by its relative error budget,
// plus a rounding allowance proportional to the magnitude of f's terms.
double propagate(const std::function<double(double)>& f, double r, double term_scale) {
  const double base = f(r);
  const double up = std::fabs(f(r * (1.0 + kRatioRelErr)) - base);
  const double down = std::fabs(f(r * (1.0 - kRatioRelErr)) - base);
  return std::max(up, down) + 16.0 * kEps * term_scale;
}

double conjecture1_lhs(double beta, double r) { return 3.0 * r + beta * r * r - beta - 4.0 / beta; }

}  // namespace

std::string_view check_name(Check check) {
  switch (check) {
    case Check::conjecture1: return "conjecture1";
    case Check::conjecture2: return "conjecture2";
    case Check::reformulation: return "reformulation";
    case Check::kunik: return "kunik";
    case Check::ratio_bound: return "ratio_bound";
    case Check::ratio_sandwich: return "ratio_sandwich";
    case Check::envelopes: return "envelopes";
    case Check::polynomial: return "polynomial";
    case Check::taylor: return "taylor";
  }
  return "unknown";
}

std::optional<Check> parse_check(std::string_view name) {
  for (Check c : kAllChecks) {
    if (check_name(c) == name) return c;
  }
  return std::nullopt;
}

std::span<const Check> all_checks() { return kAllChecks; }

std::string_view status_name(Status status) {
  switch (status) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "unknown";
}

CheckRecord check_conjecture1(double beta) {
  const double r = bessel::ratio12(beta).ratio;
  const double value = conjecture1_lhs(beta, r);
  const double err = propagate([beta](double x) { return conjecture1_lhs(beta, x); }, r,
                               3.0 * r + beta * r * r + beta + 4.0 / beta);
  return make_record(Check::conjecture1, beta, value, {-value}, err);
}

CheckRecord check_conjecture2(double beta) {
  const double r = bessel::ratio12(beta).ratio;
  // M - 3 without forming M, so the margin keeps its relative accuracy when
  // M is close to 3.
  auto excess = [beta](double x) {
    return beta * x + (4.0 * x + beta * x * x - beta) / conjecture1_lhs(beta, x);
  };
  const double margin = excess(r);
  const double denominator = conjecture1_lhs(beta, r);
  const double err = propagate(excess, r, std::fabs(beta * r) + std::fabs(margin) + 8.0);
  CheckRecord rec = make_record(Check::conjecture2, beta, 3.0 + margin, {margin}, err);
  if (!(denominator < 0.0)) {
    rec.margin = kNaN;
    rec.pass = false;
    rec.status = Status::fail;
    rec.diagnostic = "denominator not negative";
  }
  return rec;
}

CheckRecord check_reformulation(double beta) {
  const double r = bessel::ratio12(beta).ratio;
  auto slack = [beta](double x) { return 1.0 - 3.0 / (4.0 + beta * x) - x * x; };
  const double value = slack(r);
  const double err = propagate(slack, r, 2.0);
  return make_record(Check::reformulation, beta, value, {value}, err);
}

CheckRecord check_kunik(double beta) {
  const bessel::RatioValue rv = bessel::ratio12(beta);
  auto slack = [beta](double x) { return 3.0 / (beta * beta) - (x * x + 3.0 / beta * x - 1.0); };
  const double value = slack(rv.ratio);
  const double err =
      propagate(slack, rv.ratio, 3.0 / (beta * beta) + rv.ratio * rv.ratio + 3.0 / beta * rv.ratio + 1.0);
  return make_record(Check::kunik, beta, value, {value}, err);
}

CheckRecord check_ratio_bound(double beta) {
  const double r = bessel::ratio12(beta).ratio;
  const double err = kRatioRelErr * r + 4.0 * kEps * beta;
  return make_record(Check::ratio_bound, beta, r, {r, beta / 2.0 - r}, err);
}

CheckRecord check_ratio_sandwich(double beta) {
  const double r = bessel::ratio12(beta).ratio;
  const bessel::Bounds b = bessel::ratio_bounds(beta);
  const double err = kRatioRelErr * r + 16.0 * kEps;
  return make_record(Check::ratio_sandwich, beta, r, {r - b.lower, b.upper - r}, err);
}

CheckRecord check_envelopes(double beta) {
  // Compared in e^beta-scaled form so large beta does not underflow.
  const bessel::BesselTriple t = bessel::besselK_triple(beta);
  const double k0 = t.scaled[0];
  const double k01 = t.scaled[0] + t.scaled[1];
  const bessel::Bounds e0 = bessel::envelope_K0(beta, bessel::Scaling::scaled);
  const bessel::Bounds e01 = bessel::envelope_K0_plus_K1(beta, bessel::Scaling::scaled);
  const double err = bessel::kFastPathRelTol * k01 +
                     16.0 * kEps * (std::fabs(e0.lower) + e0.upper + std::fabs(e01.lower) + e01.upper);
  return make_record(Check::envelopes, beta, k0,
                     {k0 - e0.lower, e0.upper - k0, k01 - e01.lower, e01.upper - k01}, err);
}

double scaled_polynomial(double beta) {
  static constexpr std::array<std::int64_t, 7> coeffs = {3072, 20992, 36936, 25107, 6150, -540, -360};
  double acc = 0.0;
  for (std::int64_t c : coeffs) acc = acc * beta + static_cast<double>(c);
  return 0.75 * acc;
}

CheckRecord check_polynomial_positivity(double beta) {
  if (!std::isfinite(beta) || !(beta >= 0.5)) {
    throw DomainError("polynomial check requires beta >= 1/2");
  }
  const double value = scaled_polynomial(beta);
  const double tail = 6150.0 * beta * beta - 540.0 * beta - 360.0;
  const double b = beta;
  const double magnitude =
      ((((((3072.0 * b + 20992.0) * b + 36936.0) * b + 25107.0) * b + 6150.0) * b + 540.0) * b + 360.0);
  return make_record(Check::polynomial, beta, value, {value, tail}, 16.0 * kEps * magnitude);
}

CheckRecord check_taylor(double x) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw DomainError("Taylor check requires x > 0");
  }
  // s = sqrt(1+x^2), t = s - 1 = x^2/(1+s). Each gap is an exact rewrite of
  // bound minus function with positive factors only.
  const double x2 = x * x;
  const double x4 = x2 * x2;
  const double s = std::sqrt(1.0 + x2);
  const double t = x2 / (1.0 + s);
  const double sp1 = 1.0 + s;
  const double invsqrt_lower = x4 * (2.0 + s) / (2.0 * s * sp1 * sp1);
  const double invsqrt_upper = x4 * t * (20.0 + 15.0 * t + 3.0 * t * t) / (8.0 * s * sp1 * sp1);
  const double sqrt_lower = x4 * t * (s + 3.0) / (8.0 * sp1 * sp1);
  const double sqrt_upper = x2 * t / (2.0 * sp1);
  const double err = 0.0;  // all slacks are products of positive rounded factors
  return make_record(Check::taylor, x, 1.0 / s, {invsqrt_lower, invsqrt_upper, sqrt_lower, sqrt_upper},
                     err);
}

double domain_minimum(Check check) {
  switch (check) {
    case Check::ratio_sandwich:
    case Check::polynomial:
      return 0.5;
    default:
      return 0.0;
  }
}

std::optional<CheckRecord> run_check(Check check, double beta) {
  if (!(beta >= domain_minimum(check))) return std::nullopt;
  try {
    switch (check) {
      case Check::conjecture1: return check_conjecture1(beta);
      case Check::conjecture2: return check_conjecture2(beta);
      case Check::reformulation: return check_reformulation(beta);
      case Check::kunik: return check_kunik(beta);
      case Check::ratio_bound: return check_ratio_bound(beta);
      case Check::ratio_sandwich: return check_ratio_sandwich(beta);
      case Check::envelopes: return check_envelopes(beta);
      case Check::polynomial: return check_polynomial_positivity(beta);
      case Check::taylor: return check_taylor(beta);
    }
  } catch (const std::exception& e) {
    CheckRecord rec;
    rec.beta = beta;
    rec.check_name = std::string(check_name(check));
    rec.value = kNaN;
    rec.margin = kNaN;
    rec.pass = false;
    rec.status = Status::fail;
    rec.error_estimate = kNaN;
    rec.diagnostic = e.what();
    return rec;
  }
  return std::nullopt;
}

std::vector<double> make_grid(const GridSpec& spec) {
  if (!std::isfinite(spec.beta_min) || !std::isfinite(spec.beta_max) || !(spec.beta_min > 0.0) ||
      !(spec.beta_max >= spec.beta_min) || spec.points < 1) {
    throw DomainError("grid needs 0 < beta_min <= beta_max and points >= 1");
  }
  std::vector<double> grid(static_cast<std::size_t>(spec.points));
  if (spec.points == 1) {
    grid[0] = spec.beta_min;
    return grid;
  }
  const double lo = std::log(spec.beta_min);
  const double hi = std::log(spec.beta_max);
  const int last = spec.points - 1;
  for (int i = 0; i <= last; ++i) {
    grid[i] = std::exp(lo + (hi - lo) * i / last);
  }
  grid.front() = spec.beta_min;
  grid.back() = spec.beta_max;
  return grid;
}

namespace {

bool worse(double candidate, double current) {
  if (std::isnan(current)) return false;
  if (std::isnan(candidate)) return true;
  return candidate < current;
}

}  // namespace

InequalityReport sweep(std::span<const double> grid, std::span<const Check> checks, unsigned threads) {
  for (double beta : grid) {
    if (!std::isfinite(beta) || !(beta > 0.0)) {
      throw DomainError("sweep grid must be positive and finite");
    }
  }
  InequalityReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.checks.assign(checks.begin(), checks.end());

  std::vector<std::vector<CheckRecord>> per_point(grid.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (Check c : checks) {
        if (auto rec = run_check(c, grid[i])) per_point[i].push_back(std::move(*rec));
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, grid.size())));
  if (threads <= 1 || checks.empty()) {
    work(0, grid.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (grid.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(grid.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
  }

  for (auto& point : per_point) {
    for (auto& rec : point) {
      auto [it, inserted] = report.worst_margin_per_check.try_emplace(rec.check_name,
                                                                      WorstMargin{rec.beta, rec.margin});
      if (!inserted && worse(rec.margin, it->second.margin)) it->second = {rec.beta, rec.margin};
      if (!rec.pass) report.all_pass = false;
      if (rec.status == Status::fail) ++report.failures;
      if (rec.status == Status::inconclusive) ++report.inconclusive;
      report.records.push_back(std::move(rec));
    }
  }
  return report;
}

InequalityReport sweep(const GridSpec& spec, std::span<const Check> checks, unsigned threads) {
  const std::vector<double> grid = make_grid(spec);
  return sweep(std::span<const double>(grid), checks, threads);
}

}  // namespace juttner::verify
