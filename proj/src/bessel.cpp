#include "juttner/bessel.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "juttner/errors.hpp"

namespace juttner::bessel {

namespace {

constexpr int kRuleNodes = 20;
constexpr int kInitialPanels = 16;
constexpr int kPanelBudget = 4000;
constexpr std::size_t kCacheLimit = std::size_t{1} << 18;

// ln(1e40): the scaled integrand at the truncation point is below 1e-40 of
// its peak.
const double kTailExponent = 40.0 * std::log(10.0);

struct GaussLegendre {
  std::array<double, kRuleNodes> nodes{};
  std::array<double, kRuleNodes> weights{};

  GaussLegendre() {
    // Newton on P_n in long double; nodes symmetric on [-1, 1].
    const int n = kRuleNodes;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
      long double dp = 0.0L;
      for (int iter = 0; iter < 100; ++iter) {
        long double p0 = 1.0L, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0L);
        const long double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-19L) break;
      }
      const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
      nodes[i] = static_cast<double>(-x);
      nodes[n - 1 - i] = static_cast<double>(x);
      weights[i] = weights[n - 1 - i] = static_cast<double>(w);
    }
  }
};

const GaussLegendre& rule() {
  static const GaussLegendre instance;
  return instance;
}

using Triple = std::array<double, 3>;

// e^beta times the integrand of K_0, K_1, K_2. cosh r - 1 is written as
// 2 sinh^2(r/2) so the exponent keeps full relative accuracy near r = 0.
Triple scaled_integrand(double beta, double r) {
  const double s = std::sinh(0.5 * r);
  const double weight = std::exp(-2.0 * beta * s * s);
  return {weight, std::cosh(r) * weight, std::cosh(2.0 * r) * weight};
}

Triple integrate_panel(double beta, double a, double b) {
  const auto& gl = rule();
  const double half = 0.5 * (b - a);
  const double centre = 0.5 * (a + b);
  Triple sum{};
  for (int i = 0; i < kRuleNodes; ++i) {
    const Triple f = scaled_integrand(beta, centre + half * gl.nodes[i]);
    for (int j = 0; j < 3; ++j) sum[j] += gl.weights[i] * f[j];
  }
  for (double& v : sum) v *= half;
  return sum;
}

struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double total() const { return sum + carry; }
};

std::string describe(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_positive_beta(double beta) {
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    throw DomainError("Bessel argument must be positive and finite, got " + describe(beta));
  }
}

void require_order(int order) {
  if (order < 0 || order > 2) {
    throw DomainError("Bessel order must be 0, 1 or 2, got " + std::to_string(order));
  }
}

struct Cache {
  std::mutex mutex;
  std::unordered_map<std::uint64_t, Triple> entries;
};

Cache& cache() {
  static Cache instance;
  return instance;
}

}  // namespace

double BesselTriple::value(int order) const {
  require_order(order);
  return scaled[order] * std::exp(-argument);
}

double BesselTriple::log_value(int order) const {
  require_order(order);
  return std::log(scaled[order]) - argument;
}

BesselValue BesselTriple::at(int order) const {
  return {order, argument, value(order), scaled[order], log_value(order)};
}

double truncation_point(double beta, int order) {
  require_positive_beta(beta);
  require_order(order);
  auto excess = [&](double r) {
    const double s = std::sinh(0.5 * r);
    return 2.0 * beta * s * s - kTailExponent - order * r;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (excess(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

BesselTriple reference_triple(double beta, double target_rel_err) {
  require_positive_beta(beta);
  if (!(target_rel_err >= kMinRelTol)) {
    throw DomainError("Bessel target relative error must be >= 1e-15");
  }

  // Shared nodes for all orders: truncate where the order-2 integrand dies.
  const double length = truncation_point(beta, 2);

  struct Panel {
    double a, b;
    Triple whole;
  };
  std::vector<Panel> pending;
  pending.reserve(64);
  Triple coarse{};
  const double width0 = length / kInitialPanels;
  for (int i = kInitialPanels - 1; i >= 0; --i) {
    const double a = width0 * i;
    const double b = (i + 1 == kInitialPanels) ? length : width0 * (i + 1);
    const Triple whole = integrate_panel(beta, a, b);
    for (int j = 0; j < 3; ++j) coarse[j] += whole[j];
    pending.push_back({a, b, whole});
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::array<CompensatedSum, 3> total{};
  int panels = kInitialPanels;
  while (!pending.empty()) {
    const Panel p = pending.back();
    pending.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    const Triple left = integrate_panel(beta, p.a, mid);
    const Triple right = integrate_panel(beta, mid, p.b);

    bool converged = true;
    for (int j = 0; j < 3; ++j) {
      const double refined = left[j] + right[j];
      const double allowed = std::max(target_rel_err * coarse[j] * (p.b - p.a) / length,
                                      4.0 * eps * (std::fabs(left[j]) + std::fabs(right[j])));
      if (std::fabs(refined - p.whole[j]) > allowed) {
        converged = false;
        break;
      }
    }
    if (converged) {
      for (int j = 0; j < 3; ++j) {
        total[j].add(left[j]);
        total[j].add(right[j]);
      }
      continue;
    }
    panels += 2;
    if (panels > kPanelBudget || mid == p.a || mid == p.b) {
      throw AccuracyError("Bessel quadrature exhausted its subdivision budget at beta = " +
                          describe(beta));
    }
    pending.push_back({mid, p.b, right});
    pending.push_back({p.a, mid, left});
  }

  BesselTriple out;
  out.argument = beta;
  for (int j = 0; j < 3; ++j) {
    out.scaled[j] = total[j].total();
    if (!std::isfinite(out.scaled[j]) || !(out.scaled[j] > 0.0)) {
      throw AccuracyError("Bessel quadrature produced a non-finite value at beta = " + describe(beta));
    }
  }
  return out;
}

BesselValue reference_besselK(int order, double beta, double target_rel_err) {
  require_order(order);
  return reference_triple(beta, target_rel_err).at(order);
}

BesselTriple besselK_triple(double beta) {
  require_positive_beta(beta);
  const auto key = std::bit_cast<std::uint64_t>(beta);
  Cache& c = cache();
  {
    std::lock_guard lock(c.mutex);
    if (auto it = c.entries.find(key); it != c.entries.end()) {
      return {beta, it->second};
    }
  }
  const BesselTriple computed = reference_triple(beta, kFastPathRelTol);
  std::lock_guard lock(c.mutex);
  if (c.entries.size() >= kCacheLimit) c.entries.clear();
  c.entries.emplace(key, computed.scaled);
  return computed;
}

BesselValue besselK(int order, double beta) {
  require_order(order);
  return besselK_triple(beta).at(order);
}

RatioValue ratio12(double beta) {
  const BesselTriple t = besselK_triple(beta);
  const double r = t.scaled[1] / t.scaled[2];
  return {beta, r, r * r + 3.0 / beta * r - 1.0};
}

std::size_t cache_size() {
  Cache& c = cache();
  std::lock_guard lock(c.mutex);
  return c.entries.size();
}

void clear_cache() {
  Cache& c = cache();
  std::lock_guard lock(c.mutex);
  c.entries.clear();
}

Bounds ratio_bounds(double beta) {
  if (!std::isfinite(beta) || !(beta >= 0.5)) {
    throw DomainError("ratio bounds require beta >= 1/2");
  }
  const double b = beta;
  const double lower = (128.0 * b * b * b + 48.0 * b * b - 15.0 * b) /
                       (128.0 * b * b * b + 240.0 * b * b + 105.0 * b - 30.0);
  const double upper = (4.0 * b * b + 1.5 * b) / (4.0 * b * b + 7.5 * b + 3.0);
  return {lower, upper};
}

namespace {

double envelope_prefactor(double beta, Scaling scaling) {
  const double base = std::sqrt(std::numbers::pi / 2.0) / std::sqrt(beta);
  return scaling == Scaling::scaled ? base : base * std::exp(-beta);
}

}  // namespace

Bounds envelope_K0(double beta, Scaling scaling) {
  require_positive_beta(beta);
  const double pre = envelope_prefactor(beta, scaling);
  const double inv = 1.0 / beta;
  return {pre * (1.0 - inv / 8.0), pre * (1.0 - inv / 8.0 + 9.0 * inv * inv / 128.0)};
}

Bounds envelope_K0_plus_K1(double beta, Scaling scaling) {
  require_positive_beta(beta);
  const double pre = 2.0 * envelope_prefactor(beta, scaling);
  const double inv = 1.0 / beta;
  return {pre * (1.0 + inv / 8.0 - 3.0 * inv * inv / 128.0), pre * (1.0 + inv / 8.0)};
}

namespace {

void require_positive_x(double x) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw DomainError("Taylor sandwich requires x > 0");
  }
}

}  // namespace

Sandwich taylor_sandwich_invsqrt(double x) {
  require_positive_x(x);
  const double x2 = x * x;
  return {1.0 - x2 / 2.0, 1.0 / std::sqrt(1.0 + x2), 1.0 - x2 / 2.0 + 3.0 * x2 * x2 / 8.0};
}

Sandwich taylor_sandwich_sqrt(double x) {
  require_positive_x(x);
  const double x2 = x * x;
  return {1.0 + x2 / 2.0 - x2 * x2 / 8.0, std::sqrt(1.0 + x2), 1.0 + x2 / 2.0};
}

}  // namespace juttner::bessel
