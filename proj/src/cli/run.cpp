#include "dicke/cli/run.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dicke/cli/csv.hpp"
#include "dicke/cli/self_test.hpp"
#include "dicke/cli/svg.hpp"
#include "dicke/eigen.hpp"
#include "dicke/spectral.hpp"
#include "dicke/sweep.hpp"

namespace dicke::cli {

namespace {

// Raised for invalid flag values or combinations; message names the flag.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PhysicsFlags {
  double j = 5.0;
  int n_cut = 40;
  double omega = 1.0;
  double omega0 = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--j", j, "Total spin j (positive half-integer)")->capture_default_str();
    cmd->add_option("--ncut", n_cut, "Boson truncation n_cut")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--omega", omega, "Field frequency omega")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--omega0", omega0, "Spin splitting omega0")->check(CLI::PositiveNumber)->capture_default_str();
  }

  DickeParams params(double lambda = 0.0) const {
    DickeParams p;
    try {
      p.twice_j = twice_spin(j);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--j: ") + e.what());
    }
    p.n_cut = n_cut;
    p.omega = omega;
    p.omega0 = omega0;
    p.lambda = lambda;
    return p;
  }

  void describe(RunManifest& m) const {
    m.add("j", j);
    m.add("n_cut", static_cast<long long>(n_cut));
    m.add("omega", omega);
    m.add("omega0", omega0);
  }
};

struct GridFlags {
  double lambda_min = 0.0;
  double lambda_max = 1.2;
  int points = 601;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda-min", lambda_min, "First coupling of the grid")->capture_default_str();
    cmd->add_option("--lambda-max", lambda_max, "Last coupling of the grid")->capture_default_str();
    cmd->add_option("--points", points, "Number of grid points (>= 2)")->capture_default_str();
  }

  void validate() const {
    if (points < 2) throw UsageError("--points must be >= 2 (got " + std::to_string(points) + ")");
    if (!(lambda_min >= 0.0)) throw UsageError("--lambda-min must be >= 0");
    if (!(lambda_min < lambda_max)) throw UsageError("--lambda-min must be smaller than --lambda-max");
  }

  void describe(RunManifest& m) const {
    m.add("lambda_min", lambda_min);
    m.add("lambda_max", lambda_max);
    m.add("points", static_cast<long long>(points));
  }
};

unsigned threads_from_env() {
  const char* raw = std::getenv("DICKE_THREADS");
  if (!raw || !*raw) return 0;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > 4096) {
    throw UsageError(std::string("DICKE_THREADS must be a positive integer (got '") + raw + "')");
  }
  return static_cast<unsigned>(v);
}

// Content is fully rendered before the file is opened.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("--out: cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw UsageError("--out: failed writing '" + path + "'");
}

void emit_file(const std::string& path, const std::string& flag, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError(flag + ": cannot open '" + path + "' for writing");
  f << content;
}

Parity parse_parity(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  throw UsageError("--parity must be 'even' or 'odd' (got '" + s + "')");
}

std::string sweep_svg(const std::vector<SweepRecord>& records, const SweepConfig& config) {
  LineChart chart;
  chart.title = "Ground-state fidelity, j=" + format_double(config.params.j()) +
                ", n_cut=" + std::to_string(config.params.n_cut);
  chart.x_axis.label = "lambda0";
  chart.left_axis.label = "F";
  chart.right_axis.label = "|E0(even) - E0(odd)|";
  chart.right_axis.log_scale = true;
  Series naive{"F naive", "#d62728", {}, {}};
  Series parity{"F parity-resolved", "black", {}, {}};
  Series gap{"gap", "#1f77b4", {}, {}, true, true};
  const double nan = std::nan("");
  for (const auto& r : records) {
    naive.x.push_back(r.lambda0);
    naive.y.push_back(r.f_naive.value_or(nan));
    parity.x.push_back(r.lambda0);
    parity.y.push_back(r.f_parity.value_or(nan));
    gap.x.push_back(r.lambda0);
    gap.y.push_back(r.gap);
  }
  if (config.mode != SweepMode::Parity) chart.series.push_back(std::move(naive));
  if (config.mode != SweepMode::Naive) chart.series.push_back(std::move(parity));
  chart.series.push_back(std::move(gap));
  std::ostringstream s;
  chart.write_svg(s);
  return s.str();
}

std::string energy_svg(const std::vector<EnergyPoint>& pts, const DickeParams& p) {
  LineChart chart;
  chart.title = "Sector ground energies, j=" + format_double(p.j()) + ", n_cut=" + std::to_string(p.n_cut);
  chart.x_axis.label = "lambda0";
  chart.left_axis.label = "E0";
  Series even{"E0 even", "black", {}, {}};
  Series odd{"E0 odd", "#d62728", {}, {}, true};
  for (const auto& e : pts) {
    even.x.push_back(e.lambda0);
    even.y.push_back(e.e0_even);
    odd.x.push_back(e.lambda0);
    odd.y.push_back(e.e0_odd);
  }
  chart.series = {std::move(even), std::move(odd)};
  std::ostringstream s;
  chart.write_svg(s);
  return s.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact diagonalization of the Dicke model: parity-resolved ground states, "
               "fidelity sweeps and level statistics",
               "dicke"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Fidelity sweep (naive and parity-resolved) with sector gap");
  PhysicsFlags sweep_phys;
  GridFlags sweep_grid;
  double dlambda = 1e-3;
  std::string mode = "both";
  std::uint64_t seed = 42;
  double gap_tol = 1e-12;
  std::string sweep_out, sweep_svg_path;
  sweep_phys.attach(sweep_cmd);
  sweep_grid.attach(sweep_cmd);
  sweep_cmd->add_option("--dlambda", dlambda, "Forward coupling step of the fidelity")->capture_default_str();
  sweep_cmd->add_option("--mode", mode, "naive | parity | both")
      ->check(CLI::IsMember({"naive", "parity", "both"}))
      ->capture_default_str();
  sweep_cmd->add_option("--seed", seed, "Seed of the degenerate-doublet mixing")->capture_default_str();
  sweep_cmd->add_option("--gap-tol", gap_tol, "Relative doublet degeneracy tolerance")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Output CSV (stdout when omitted)");
  sweep_cmd->add_option("--svg", sweep_svg_path, "Also render an SVG chart to this path");

  // energies
  auto* energies_cmd = app.add_subcommand("energies", "Even and odd sector ground energies on a coupling grid");
  PhysicsFlags energy_phys;
  GridFlags energy_grid;
  std::string energy_out, energy_svg_path;
  energy_phys.attach(energies_cmd);
  energy_grid.attach(energies_cmd);
  energies_cmd->add_option("--out", energy_out, "Output CSV (stdout when omitted)");
  energies_cmd->add_option("--svg", energy_svg_path, "Also render an SVG chart to this path");

  // spectrum
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Eigenvalues of one parity sector at one coupling");
  PhysicsFlags spec_phys;
  double spec_lambda = 1.0;
  std::string spec_parity = "even", spec_out, dump_path;
  spec_phys.attach(spectrum_cmd);
  spectrum_cmd->add_option("--lambda", spec_lambda, "Coupling")->capture_default_str();
  spectrum_cmd->add_option("--parity", spec_parity, "even | odd")->capture_default_str();
  spectrum_cmd->add_option("--out", spec_out, "Output CSV (stdout when omitted)");
  spectrum_cmd->add_option("--dump-matrix", dump_path, "Write the sector Hamiltonian as a text dump");

  // levels
  auto* levels_cmd = app.add_subcommand("levels", "Consecutive-spacing ratio statistics of one sector");
  PhysicsFlags lev_phys;
  double lev_lambda = 2.0, trim = 0.1;
  int bins = 32;
  std::string lev_parity = "even", lev_out;
  lev_phys.attach(levels_cmd);
  levels_cmd->add_option("--lambda", lev_lambda, "Coupling")->capture_default_str();
  levels_cmd->add_option("--parity", lev_parity, "even | odd")->capture_default_str();
  levels_cmd->add_option("--trim", trim, "Fraction of levels dropped at each spectral edge")->capture_default_str();
  levels_cmd->add_option("--bins", bins, "Histogram bins (>= 4)")->capture_default_str();
  levels_cmd->add_option("--out", lev_out, "Histogram output (stdout when omitted)");

  // check
  auto* check_cmd = app.add_subcommand("check", "Truncation convergence check and invariant self-test");
  PhysicsFlags chk_phys;
  double chk_lambda = 1.0, growth = 1.25, tol = 1e-8;
  chk_phys.attach(check_cmd);
  check_cmd->add_option("--lambda", chk_lambda, "Coupling")->capture_default_str();
  check_cmd->add_option("--growth", growth, "n_cut growth factor (> 1)")->capture_default_str();
  check_cmd->add_option("--tol", tol, "Tolerance on the ground-energy change")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*sweep_cmd) {
      sweep_grid.validate();
      if (!(dlambda > 0.0) || !(dlambda < sweep_grid.lambda_max - sweep_grid.lambda_min)) {
        throw UsageError("--dlambda must satisfy 0 < dlambda < lambda-max - lambda-min");
      }
      if (!(gap_tol > 0.0)) throw UsageError("--gap-tol must be > 0");
      SweepConfig cfg;
      cfg.params = sweep_phys.params();
      cfg.lambda_min = sweep_grid.lambda_min;
      cfg.lambda_max = sweep_grid.lambda_max;
      cfg.points = sweep_grid.points;
      cfg.dlambda = dlambda;
      cfg.mode = parse_sweep_mode(mode);
      cfg.seed = seed;
      cfg.gap_tol = gap_tol;
      cfg.threads = threads_from_env();
      const auto records = sweep(cfg);

      RunManifest m{"sweep", {}};
      sweep_phys.describe(m);
      sweep_grid.describe(m);
      m.add("dlambda", dlambda);
      m.add("mode", mode);
      m.add("seed", std::to_string(seed));
      m.add("gap_tol", gap_tol);
      m.add("output", sweep_out.empty() ? "-" : sweep_out);
      std::ostringstream csv;
      write_sweep_csv(csv, m, records);
      emit(sweep_out, csv.str(), out);
      if (!sweep_svg_path.empty()) emit_file(sweep_svg_path, "--svg", sweep_svg(records, cfg));
      for (const auto& r : records) {
        if (r.error) {
          err << "numerical failure at lambda0=" << format_double(r.lambda0) << ": " << *r.error << '\n';
          return kNumericalFailure;
        }
      }
      return kOk;
    }

    if (*energies_cmd) {
      energy_grid.validate();
      SweepConfig cfg;
      cfg.params = energy_phys.params();
      cfg.lambda_min = energy_grid.lambda_min;
      cfg.lambda_max = energy_grid.lambda_max;
      cfg.points = energy_grid.points;
      cfg.threads = threads_from_env();
      const auto pts = energy_curves(cfg);

      RunManifest m{"energies", {}};
      energy_phys.describe(m);
      energy_grid.describe(m);
      m.add("output", energy_out.empty() ? "-" : energy_out);
      std::ostringstream csv;
      write_energy_csv(csv, m, pts);
      emit(energy_out, csv.str(), out);
      if (!energy_svg_path.empty()) emit_file(energy_svg_path, "--svg", energy_svg(pts, cfg.params));
      for (const auto& p : pts) {
        if (p.error) {
          err << "numerical failure at lambda0=" << format_double(p.lambda0) << ": " << *p.error << '\n';
          return kNumericalFailure;
        }
      }
      return kOk;
    }

    if (*spectrum_cmd) {
      if (!(spec_lambda >= 0.0)) throw UsageError("--lambda must be >= 0");
      const DickeParams p = spec_phys.params(spec_lambda);
      const Parity parity = parse_parity(spec_parity);
      const Basis basis(p.twice_j, p.n_cut);
      const auto [even, odd] = split_sectors(basis);
      SymmetricMatrix h = build_sector(p, basis, parity == Parity::Even ? even : odd);
      if (!dump_path.empty()) {
        std::ostringstream dump;
        write_matrix(dump, h);
        emit_file(dump_path, "--dump-matrix", dump.str());
      }
      const auto values = eigvalsh(std::move(h));
      RunManifest m{"spectrum", {}};
      spec_phys.describe(m);
      m.add("lambda", spec_lambda);
      m.add("parity", spec_parity);
      m.add("output", spec_out.empty() ? "-" : spec_out);
      std::ostringstream csv;
      write_spectrum_csv(csv, m, values);
      emit(spec_out, csv.str(), out);
      return kOk;
    }

    if (*levels_cmd) {
      if (!(lev_lambda >= 0.0)) throw UsageError("--lambda must be >= 0");
      if (!(trim >= 0.0 && trim < 0.5)) throw UsageError("--trim must lie in [0, 0.5)");
      if (bins < 4) throw UsageError("--bins must be >= 4");
      const DickeParams p = lev_phys.params(lev_lambda);
      const Parity parity = parse_parity(lev_parity);
      const Basis basis(p.twice_j, p.n_cut);
      const auto [even, odd] = split_sectors(basis);
      const auto values = eigvalsh(build_sector(p, basis, parity == Parity::Even ? even : odd));
      const IndexWindow window = trimmed_window(values.size(), trim);
      SpacingStats stats;
      SpacingHistogram hist;
      try {
        stats = spacing_ratios(values, window);
        hist = spacing_histogram(values, bins, window);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--trim/--ncut: ") + e.what());
      }

      RunManifest m{"levels", {}};
      lev_phys.describe(m);
      m.add("lambda", lev_lambda);
      m.add("parity", lev_parity);
      m.add("trim", trim);
      m.add("bins", static_cast<long long>(bins));
      m.add("window", std::to_string(window.begin) + ".." + std::to_string(window.end));
      m.add("mean_r", stats.mean_r);
      m.add("mean_spacing", hist.mean_spacing);
      m.add("overflow", static_cast<long long>(hist.overflow));
      m.add("output", lev_out.empty() ? "-" : lev_out);
      std::ostringstream txt;
      m.write(txt);
      txt << "# columns: bin_center density\n";
      write_histogram(txt, hist);
      emit(lev_out, txt.str(), out);
      if (!lev_out.empty()) out << "mean_r " << format_double(stats.mean_r) << '\n';
      return kOk;
    }

    if (*check_cmd) {
      if (!(chk_lambda >= 0.0)) throw UsageError("--lambda must be >= 0");
      if (!(growth > 1.0)) throw UsageError("--growth must be > 1");
      if (!(tol >= 0.0)) throw UsageError("--tol must be >= 0");
      const DickeParams p = chk_phys.params(chk_lambda);
      const auto rep = truncation_check(p, growth, tol);
      out << "truncation n_cut " << rep.n_cut << " -> " << rep.n_cut_grown << '\n';
      out << "  even: E0 " << format_double(rep.e0_even) << " -> " << format_double(rep.e0_even_grown)
          << "  |dE0| " << format_double(rep.delta_even) << '\n';
      out << "  odd:  E0 " << format_double(rep.e0_odd) << " -> " << format_double(rep.e0_odd_grown)
          << "  |dE0| " << format_double(rep.delta_odd) << '\n';
      out << "  tol " << format_double(tol) << ": " << (rep.passed ? "PASS" : "FAIL") << '\n';
      bool all = rep.passed;
      for (const auto& c : run_self_test(p)) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) out << " (" << c.detail << ")";
        out << '\n';
        all = all && c.passed;
      }
      return all ? kOk : kNumericalFailure;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsageError;
}

}  // namespace dicke::cli
