#include "juttner/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>

#include "juttner/bessel.hpp"
#include "juttner/eos.hpp"
#include "juttner/errors.hpp"
#include "juttner/output.hpp"
#include "juttner/verify.hpp"

namespace juttner::cli {

namespace {

using output::Cell;
using output::Table;

enum class Format { csv, json };

struct CommonOptions {
  Format format = Format::csv;
  eos::PhysicalConstants constants{};
};

void add_format(CLI::App* cmd, CommonOptions& common) {
  const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
  cmd->add_option("--format", common.format, "Output encoding (csv or json)")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

void add_constants(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--m0", common.constants.m0, "Particle rest mass");
  cmd->add_option("--c", common.constants.c, "Speed of light");
  cmd->add_option("--kB", common.constants.kB, "Boltzmann constant");
  cmd->add_option("--h", common.constants.h, "Planck constant");
}

void constants_params(const eos::PhysicalConstants& k, Table& t) {
  t.params.emplace_back("m0", k.m0);
  t.params.emplace_back("c", k.c);
  t.params.emplace_back("kB", k.kB);
  t.params.emplace_back("h", k.h);
}

void emit(const Table& t, Format format, std::ostream& out) {
  if (format == Format::json) {
    output::write_json(t, out);
  } else {
    output::write_csv(t, out);
  }
}

struct GridOptions {
  double beta_min;
  double beta_max;
  int points;
};

void add_grid(CLI::App* cmd, GridOptions& grid) {
  cmd->add_option("--beta-min", grid.beta_min, "Smallest beta of the log-spaced grid");
  cmd->add_option("--beta-max", grid.beta_max, "Largest beta of the log-spaced grid");
  cmd->add_option("--points", grid.points, "Number of grid points");
}

void grid_params(const GridOptions& g, Table& t) {
  t.params.emplace_back("beta_min", g.beta_min);
  t.params.emplace_back("beta_max", g.beta_max);
  t.params.emplace_back("points", static_cast<std::int64_t>(g.points));
}

std::vector<double> build_grid(const GridOptions& g) {
  return verify::make_grid({g.beta_min, g.beta_max, g.points});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinetic equation of state of a Juttner gas: Bessel functions, thermodynamic maps, "
               "sound speed and inequality verification"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  CommonOptions common;

  // bessel
  int order = 0;
  double bessel_beta = 1.0;
  double bessel_tol = 0.0;
  auto* bessel_cmd = app.add_subcommand("bessel", "Evaluate K_0, K_1 or K_2");
  bessel_cmd->add_option("--order", order, "Order 0, 1 or 2")->required();
  bessel_cmd->add_option("--beta", bessel_beta, "Argument")->required();
  bessel_cmd->add_option("--tol", bessel_tol, "Reference quadrature target (default: cached fast path)");
  add_format(bessel_cmd, common);

  // table
  GridOptions table_grid{0.1, 10.0, 5};
  double table_n = 1.0;
  auto* table_cmd = app.add_subcommand("table", "Tabulate the equation of state over a beta grid");
  add_grid(table_cmd, table_grid);
  table_cmd->add_option("--n", table_n, "Number density");
  add_format(table_cmd, common);
  add_constants(table_cmd, common);

  // invert
  double inv_eta = 0.0;
  double inv_rho = 0.0;
  double inv_tol = eos::kDefaultInversionTol;
  auto* invert_cmd = app.add_subcommand("invert", "Recover (n, beta) and p from (eta, rho)");
  invert_cmd->add_option("--eta", inv_eta, "Entropy per particle")->required();
  invert_cmd->add_option("--rho", inv_rho, "Energy density")->required();
  invert_cmd->add_option("--tol", inv_tol, "Residual tolerance (>= 1e-13)");
  add_format(invert_cmd, common);
  add_constants(invert_cmd, common);

  // sound-speed
  GridOptions ss_grid{0.1, 10.0, 5};
  double ss_beta = 0.0;
  auto* ss_cmd = app.add_subcommand("sound-speed", "Squared sound speed c_S^2/c^2 and c_S/c");
  auto* ss_beta_opt = ss_cmd->add_option("--beta", ss_beta, "Single beta (overrides the grid)");
  add_grid(ss_cmd, ss_grid);
  add_format(ss_cmd, common);

  // verify
  verify::GridSpec defaults;
  GridOptions verify_grid{defaults.beta_min, defaults.beta_max, defaults.points};
  std::vector<std::string> check_names;
  bool with_records = false;
  unsigned threads = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Sweep the inequality checks over a beta grid");
  add_grid(verify_cmd, verify_grid);
  verify_cmd->add_option("--checks", check_names, "Comma-separated checks (default: all)")->delimiter(',');
  verify_cmd->add_flag("--records", with_records, "Emit every record instead of the per-check summary");
  verify_cmd->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  add_format(verify_cmd, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    common.constants.validate();
    Table t;

    if (*bessel_cmd) {
      const bessel::BesselValue v = bessel_tol > 0.0 ? bessel::reference_besselK(order, bessel_beta, bessel_tol)
                                                     : bessel::besselK(order, bessel_beta);
      t.command = "bessel";
      t.params = {{"order", static_cast<std::int64_t>(order)}, {"beta", bessel_beta}};
      if (bessel_tol > 0.0) t.params.emplace_back("tol", bessel_tol);
      t.columns = {"order", "beta", "value", "scaled_value", "log_value"};
      t.rows.push_back({static_cast<std::int64_t>(v.order), v.argument, v.value, v.scaled_value, v.log_value});
    } else if (*table_cmd) {
      const std::vector<double> grid = build_grid(table_grid);
      t.command = "table";
      grid_params(table_grid, t);
      t.params.emplace_back("n", table_n);
      constants_params(common.constants, t);
      t.columns = {"beta", "theta", "p", "rho", "eta", "psi", "cs2"};
      for (double beta : grid) {
        const eos::ThermoState s = eos::state(table_n, beta, common.constants);
        t.rows.push_back({s.beta, s.theta, s.p, s.rho, s.eta, s.psi, s.cs2});
      }
    } else if (*invert_cmd) {
      t.command = "invert";
      t.params = {{"eta", inv_eta}, {"rho", inv_rho}, {"tol", inv_tol}};
      constants_params(common.constants, t);
      eos::InversionResult r;
      try {
        r = eos::invert_map(inv_eta, inv_rho, common.constants, inv_tol);
      } catch (const BracketError& e) {
        err << "error: " << e.what() << " (searched beta in [" << output::format_real(e.searched_lo) << ", "
            << output::format_real(e.searched_hi) << "])\n";
        return kInversionFailure;
      } catch (const AccuracyError& e) {
        err << "error: " << e.what() << '\n';
        return kInversionFailure;
      }
      const double p = eos::pressure(r.n, r.beta, common.constants);
      t.columns = {"n", "beta", "p", "residual_eta", "residual_rho", "iterations", "bracket_used"};
      t.rows.push_back({r.n, r.beta, p, r.residual_eta, r.residual_rho, static_cast<std::int64_t>(r.iterations),
                        r.bracket_used});
    } else if (*ss_cmd) {
      t.command = "sound-speed";
      std::vector<double> grid;
      if (ss_beta_opt->count() > 0) {
        t.params.emplace_back("beta", ss_beta);
        grid = {ss_beta};
      } else {
        grid_params(ss_grid, t);
        grid = build_grid(ss_grid);
      }
      t.columns = {"beta", "cs2", "cs_over_c"};
      for (double beta : grid) {
        const double cs2 = eos::sound_speed_squared(beta);
        t.rows.push_back({beta, cs2, std::sqrt(cs2)});
      }
    } else if (*verify_cmd) {
      std::vector<verify::Check> checks;
      if (check_names.empty()) {
        const auto all = verify::all_checks();
        checks.assign(all.begin(), all.end());
      }
      for (const std::string& name : check_names) {
        const auto c = verify::parse_check(name);
        if (!c) {
          err << "error: unknown check '" << name << "'\n";
          return kUsageError;
        }
        checks.push_back(*c);
      }
      const std::vector<double> grid = build_grid(verify_grid);
      const verify::InequalityReport report = verify::sweep(grid, checks, threads);

      t.command = "verify";
      grid_params(verify_grid, t);
      std::string joined;
      for (verify::Check c : checks) {
        if (!joined.empty()) joined += ',';
        joined += verify::check_name(c);
      }
      t.params.emplace_back("checks", joined);
      t.summary = {{"all_pass", report.all_pass},
                   {"records", static_cast<std::int64_t>(report.records.size())},
                   {"failures", static_cast<std::int64_t>(report.failures)},
                   {"inconclusive", static_cast<std::int64_t>(report.inconclusive)}};

      if (with_records) {
        t.columns = {"beta", "check", "value", "margin", "error_estimate", "status"};
        for (const auto& rec : report.records) {
          t.rows.push_back({rec.beta, rec.check_name, rec.value, rec.margin, rec.error_estimate,
                            std::string(verify::status_name(rec.status))});
        }
      } else {
        t.columns = {"check", "records", "failures", "inconclusive", "worst_beta", "worst_margin"};
        for (verify::Check c : checks) {
          const std::string name(verify::check_name(c));
          std::int64_t count = 0, failed = 0, unsure = 0;
          for (const auto& rec : report.records) {
            if (rec.check_name != name) continue;
            ++count;
            failed += rec.status == verify::Status::fail;
            unsure += rec.status == verify::Status::inconclusive;
          }
          const auto it = report.worst_margin_per_check.find(name);
          const double nan = std::nan("");
          t.rows.push_back({name, count, failed, unsure, it == report.worst_margin_per_check.end() ? nan : it->second.beta,
                            it == report.worst_margin_per_check.end() ? nan : it->second.margin});
        }
      }
      for (const auto& rec : report.records) {
        if (!rec.diagnostic.empty()) {
          err << "warning: " << rec.check_name << " at beta = " << output::format_real(rec.beta) << ": "
              << rec.diagnostic << '\n';
        }
      }
      emit(t, common.format, out);
      if (report.failures > 0) return kVerificationFailure;
      if (report.inconclusive > 0) return kInconclusive;
      return kSuccess;
    }

    emit(t, common.format, out);
    return kSuccess;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace juttner::cli
