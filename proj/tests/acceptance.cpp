// Acceptance suite. Runs every criterion (or the ones named on the command
// line by number) and prints one PASS/FAIL line each. Exit status is nonzero
// if any selected criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "juttner/bessel.hpp"
#include "juttner/cli.hpp"
#include "juttner/eos.hpp"
#include "juttner/verify.hpp"
#include "oracles.hpp"

namespace {

using namespace juttner;
using juttner::testing::central_difference;
using juttner::testing::log_grid;
using juttner::testing::relative_error;

constexpr int kGridPoints = 10000;
constexpr double kGridMin = 1e-3;
constexpr double kGridMax = 1e3;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

const std::vector<double>& default_grid() {
  static const std::vector<double> grid = verify::make_grid({kGridMin, kGridMax, kGridPoints});
  return grid;
}

Outcome recurrence_identity() {
  double worst = 0.0;
  for (double beta : default_grid()) {
    const bessel::BesselTriple t = bessel::besselK_triple(beta);
    const double residual = std::fabs(t.scaled[2] - 2.0 / beta * t.scaled[1] - t.scaled[0]) / t.scaled[2];
    worst = std::max(worst, residual);
  }
  return {worst < 1e-12, fmt("max |K2 - (2/b)K1 - K0|/K2 = %.3e (< 1e-12)", worst)};
}

Outcome ratio_ode() {
  double worst = 0.0;
  for (double beta : default_grid()) {
    const double h = std::max(beta, 1.0) * 1e-5;
    const double fd = central_difference([](double b) { return bessel::ratio12(b).ratio; }, beta, h);
    worst = std::max(worst, relative_error(fd, bessel::ratio12(beta).derivative));
  }
  return {worst < 1e-6, fmt("max relative FD mismatch = %.3e (< 1e-6)", worst)};
}

Outcome theorem_conjecture1() {
  int failures = 0, inconclusive_low = 0, inconclusive_high = 0;
  for (double beta : default_grid()) {
    const verify::CheckRecord rec = verify::check_conjecture1(beta);
    if (!(rec.value < 0.0) || rec.status == verify::Status::fail) ++failures;
    if (rec.status == verify::Status::inconclusive) (beta <= 100.0 ? inconclusive_low : inconclusive_high)++;
  }
  return {failures == 0 && inconclusive_low == 0,
          fmt("failures = %.0f, inconclusive (beta <= 100) = %.0f, inconclusive (beta > 100) = %.0f", failures,
              inconclusive_low, inconclusive_high)};
}

Outcome theorem_conjecture2() {
  int bad = 0;
  double min_excess = INFINITY;
  for (double beta : default_grid()) {
    const verify::CheckRecord rec = verify::check_conjecture2(beta);
    const double cs2 = eos::sound_speed_squared(beta);
    if (!std::isfinite(rec.value) || !(rec.value > 3.0) || !rec.pass) ++bad;
    if (!(cs2 > 0.0 && cs2 < 1.0 / 3.0)) ++bad;
    min_excess = std::min(min_excess, rec.margin);
  }
  return {bad == 0, fmt("violations = %.0f, min (M - 3) = %.3e", bad, min_excess)};
}

Outcome reformulation_equivalence() {
  int disagree = 0, failing = 0;
  for (double beta : default_grid()) {
    const bool a = verify::check_reformulation(beta).pass;
    const bool b = verify::check_conjecture2(beta).pass;
    if (a != b) ++disagree;
    if (!a || !b) ++failing;
  }
  return {disagree == 0 && failing == 0, fmt("disagreements = %.0f, non-passing points = %.0f", disagree, failing)};
}

Outcome lemma_ratio_bound() {
  int bad = 0;
  for (double beta : default_grid()) {
    const double r = bessel::ratio12(beta).ratio;
    if (!(r > 0.0 && r < beta / 2.0)) ++bad;
  }
  return {bad == 0, fmt("violations of 0 < K1/K2 < beta/2 = %.0f", bad)};
}

Outcome lemma_sandwich_envelopes() {
  int sandwich_bad = 0, envelope_bad = 0, sandwich_points = 0;
  for (double beta : default_grid()) {
    if (beta >= 0.5) {
      ++sandwich_points;
      const double r = bessel::ratio12(beta).ratio;
      const bessel::Bounds b = bessel::ratio_bounds(beta);
      if (!(b.lower <= r && r <= b.upper)) ++sandwich_bad;
    }
    const bessel::BesselTriple t = bessel::besselK_triple(beta);
    const bessel::Bounds e0 = bessel::envelope_K0(beta, bessel::Scaling::scaled);
    const bessel::Bounds e01 = bessel::envelope_K0_plus_K1(beta, bessel::Scaling::scaled);
    const double k0 = t.scaled[0];
    const double k01 = t.scaled[0] + t.scaled[1];
    if (!(e0.lower <= k0 && k0 <= e0.upper && e01.lower <= k01 && k01 <= e01.upper)) ++envelope_bad;
  }
  return {sandwich_bad == 0 && envelope_bad == 0,
          fmt("sandwich violations = %.0f of %.0f points, envelope violations = %.0f", sandwich_bad,
              sandwich_points, envelope_bad)};
}

Outcome polynomial_positivity() {
  int bad = 0;
  double min_poly = INFINITY, min_tail = INFINITY;
  for (double beta : verify::make_grid({0.5, 1e3, 1000})) {
    const double p = verify::scaled_polynomial(beta);
    const double tail = 6150.0 * beta * beta - 540.0 * beta - 360.0;
    if (!(p > 0.0) || !(tail > 0.0)) ++bad;
    min_poly = std::min(min_poly, p);
    min_tail = std::min(min_tail, tail);
  }
  return {bad == 0, fmt("violations = %.0f, min (3/4)P = %.6g, min tail = %.6g", bad, min_poly, min_tail)};
}

Outcome conjecture1_operational() {
  double worst_round_trip = 0.0;
  int sign = 0;
  bool constant_sign = true;
  for (double n : log_grid(1e-3, 1e3, 20)) {
    for (double beta : log_grid(0.05, 50.0, 20)) {
      const eos::ForwardValues f = eos::forward_map(n, beta);
      const eos::InversionResult inv = eos::invert_map(f.eta, f.rho);
      worst_round_trip = std::max({worst_round_trip, relative_error(inv.n, n), relative_error(inv.beta, beta)});
      const double det = eos::determinant(eos::jacobian(n, beta));
      const int s = det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
      if (s == 0) constant_sign = false;
      if (sign == 0) sign = s;
      if (s != sign) constant_sign = false;
    }
  }
  double worst_entry = 0.0;
  for (double beta : {0.1, 1.0, 10.0}) {
    const double n = 1.0;
    const eos::Jacobian j = eos::jacobian(n, beta);
    const double hn = 1e-5 * n, hb = 1e-5 * beta;
    const double fd[2][2] = {
        {central_difference([&](double x) { return eos::forward_map(x, beta).eta; }, n, hn),
         central_difference([&](double x) { return eos::forward_map(n, x).eta; }, beta, hb)},
        {central_difference([&](double x) { return eos::forward_map(x, beta).rho; }, n, hn),
         central_difference([&](double x) { return eos::forward_map(n, x).rho; }, beta, hb)}};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) worst_entry = std::max(worst_entry, relative_error(j[a][b], fd[a][b]));
    }
  }
  return {worst_round_trip < 1e-10 && constant_sign && worst_entry < 1e-6,
          fmt("round trip max rel err = %.3e (< 1e-10), det sign constant = %.0f, Jacobian FD mismatch = %.3e "
              "(< 1e-6)",
              worst_round_trip, constant_sign ? 1.0 : 0.0, worst_entry)};
}

Outcome limits() {
  const double low = std::fabs(eos::sound_speed_squared(0.01) - 1.0 / 3.0);
  const double high = std::fabs(100.0 * eos::sound_speed_squared(100.0) - 5.0 / 3.0);
  return {low < 0.01 && high < 0.05,
          fmt("|cs2(0.01) - 1/3| = %.3e (< 0.01), |100 cs2(100) - 5/3| = %.5f (< 0.05)", low, high)};
}

Outcome bessel_two_routes() {
  double worst = 0.0;
  for (double beta : log_grid(1e-3, 1e3, 50)) {
    const bessel::BesselTriple direct = bessel::reference_triple(beta, 1e-15);
    const auto substituted = juttner::testing::scaled_triple_substituted(beta);
    for (int j = 0; j < 3; ++j) worst = std::max(worst, relative_error(direct.scaled[j], substituted[j]));
  }
  return {worst < 1e-12, fmt("max relative disagreement over 50 points x 3 orders = %.3e (< 1e-12)", worst)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  std::ostringstream out, err;
  const int code = cli::run({"verify"}, out, err);

  struct Golden {
    std::vector<std::string> args;
    const char* file;
  };
  const std::vector<Golden> cases = {
      {{"bessel", "--order", "2", "--beta", "1"}, "bessel.csv"},
      {{"table", "--beta-min", "0.5", "--beta-max", "50", "--points", "4", "--format", "json"}, "table.json"},
      {{"invert", "--eta", "7.3868740931663549", "--rho", "3.3704411746314179"}, "invert.csv"},
      {{"sound-speed", "--beta-min", "0.01", "--beta-max", "100", "--points", "5"}, "sound_speed.csv"},
      {{"verify", "--points", "50", "--format", "json"}, "verify.json"},
  };
  int mismatches = 0;
  for (const auto& g : cases) {
    std::ostringstream o, e;
    cli::run(g.args, o, e);
    if (o.str() != read_file(std::string(JUTTNER_GOLDEN_DIR) + "/" + g.file)) ++mismatches;
  }
  return {code == 0 && mismatches == 0,
          fmt("default verify exit = %.0f, golden mismatches = %.0f of %.0f", code, mismatches,
              static_cast<double>(cases.size()))};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "recurrence identity", recurrence_identity},
      {2, "ratio derivative identity", ratio_ode},
      {3, "conjecture 1 inequality", theorem_conjecture1},
      {4, "conjecture 2 inequality / 0 < cs2 < 1/3", theorem_conjecture2},
      {5, "reformulation co-passes with conjecture 2", reformulation_equivalence},
      {6, "0 < K1/K2 < beta/2", lemma_ratio_bound},
      {7, "ratio sandwich and K0, K0+K1 envelopes", lemma_sandwich_envelopes},
      {8, "degree-6 polynomial and its last three terms positive", polynomial_positivity},
      {9, "inversion round trip, Jacobian sign and entries", conjecture1_operational},
      {10, "sound-speed limits", limits},
      {11, "two independent Bessel quadratures agree", bessel_two_routes},
      {12, "CLI determinism and golden files", cli_determinism},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const Outcome o = c.run();
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
