// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--expect-fail N]...
// Exit status is 0 when the set of failing criteria equals the set declared
// with --expect-fail (empty by default), 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dicke/eigen.hpp"
#include "dicke/spectral.hpp"
#include "dicke/sweep.hpp"
#include "oracles.hpp"

using namespace dicke;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  int id;
  bool passed;
  std::string detail;
  double seconds;
  double budget;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

DickeParams fig_params(double lambda = 0.0) {
  DickeParams p;
  p.lambda = lambda;
  return p;
}

Outcome exact_small_case() {
  const auto t0 = Clock::now();
  const SweepEngine engine(fig_params());
  const auto r = engine.evaluate(0.0, 1e-3, 0, SweepMode::Parity, 42, 1e-12);
  const double de = std::abs(r.e0_even + 5.0), dodd = std::abs(r.e0_odd + 4.0), dg = std::abs(r.gap - 1.0);
  const bool ok = !r.error && de <= 1e-10 && dodd <= 1e-10 && dg <= 1e-10;
  return {1, ok,
          "e0_even=" + fmt("%.17g", r.e0_even) + " e0_odd=" + fmt("%.17g", r.e0_odd) +
              " gap=" + fmt("%.17g", r.gap),
          since(t0), 1};
}

Outcome sector_union() {
  const auto t0 = Clock::now();
  double worst_rel = 0.0;
  const Basis b(10, 40);
  const auto [even, odd] = split_sectors(b);
  for (double lambda : {0.2, 0.5, 1.0}) {
    const auto p = fig_params(lambda);
    const auto full = build_full(p, b);
    const double scale = full.max_abs();
    auto all = eigvalsh(full);
    auto merged = eigvalsh(build_sector(p, b, even));
    const auto o = eigvalsh(build_sector(p, b, odd));
    merged.insert(merged.end(), o.begin(), o.end());
    std::sort(merged.begin(), merged.end());
    if (merged.size() != all.size()) return {2, false, "size mismatch", since(t0), 5};
    for (std::size_t i = 0; i < all.size(); ++i)
      worst_rel = std::max(worst_rel, std::abs(all[i] - merged[i]) / scale);
  }
  return {2, worst_rel <= 1e-9, "max|dev|/max|H|=" + fmt("%.3g", worst_rel), since(t0), 5};
}

Outcome eigensolver_contract() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<std::size_t> dims(1, 100);
  double worst_rec = 0.0, worst_orth = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = dims(rng);
    const auto dense = oracle::random_symmetric(n, rng);
    std::vector<double> flat;
    for (const auto& row : dense) flat.insert(flat.end(), row.begin(), row.end());
    const auto h = SymmetricMatrix::from_row_major(n, std::move(flat));
    const auto r = eigh(h);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        double rec = 0.0, orth = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
          rec += r.vector(c)[i] * r.values[c] * r.vector(c)[k];
        }
        for (std::size_t q = 0; q < n; ++q) orth += r.vector(i)[q] * r.vector(k)[q];
        worst_rec = std::max(worst_rec, std::abs(rec - h(i, k)) / h.max_abs());
        worst_orth = std::max(worst_orth, std::abs(orth - (i == k ? 1.0 : 0.0)));
      }
  }
  return {3, worst_rec <= 1e-8 && worst_orth <= 1e-10,
          "reconstruction/max|H|=" + fmt("%.3g", worst_rec) + " orthonormality=" + fmt("%.3g", worst_orth),
          since(t0), 10};
}

// First grid point where gap < threshold, or -1.
long onset_index(const std::vector<double>& gaps, double threshold) {
  for (std::size_t i = 0; i < gaps.size(); ++i)
    if (gaps[i] < threshold) return static_cast<long>(i);
  return -1;
}

std::vector<double> gaps_of(const std::vector<SweepRecord>& recs) {
  std::vector<double> g;
  for (const auto& r : recs) g.push_back(r.gap);
  return g;
}

// Gap column of a sweep CSV written by the CLI.
std::vector<double> gaps_from_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<double> out;
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string field;
    for (int col = 0; col < 6 && std::getline(row, field, ','); ++col)
      if (col == 5) out.push_back(field.empty() ? NAN : std::stod(field));
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Onset of gap < 1e-13 on the default grid, measured on the first run of this
// suite and frozen as a regression value.
constexpr long kFrozenOnsetIndex = 587;  // lambda* = 1.174

Outcome gap_curve(const std::vector<SweepRecord>& recs, const SweepConfig& cfg,
                  const std::vector<std::vector<double>>& reruns, double seconds) {
  bool wide = true;
  double min_low = INFINITY;
  bool closes = false;
  for (const auto& r : recs) {
    if (r.lambda0 <= 0.4 + 1e-12) {
      min_low = std::min(min_low, r.gap);
      if (!(r.gap >= 0.5)) wide = false;
    }
    if (r.lambda0 <= 1.2 && r.gap < 1e-12) closes = true;
  }
  const long onset = onset_index(gaps_of(recs), 1e-13);
  bool stable = onset >= 0;
  std::string rerun_txt;
  for (const auto& g : reruns) {
    const long o = onset_index(g, 1e-13);
    rerun_txt += " " + (o >= 0 ? fmt("%.3f", cfg.lambda_at(o)) : std::string("none"));
    if (o < 0 || std::labs(o - onset) > 1) stable = false;
  }
  if (kFrozenOnsetIndex >= 0 && std::labs(onset - kFrozenOnsetIndex) > 1) stable = false;
  const std::string detail =
      "min gap on [0,0.4]=" + fmt("%.6f", min_low) + (wide ? " (>=0.5)" : " (<0.5)") +
      "; gap<1e-12 reached=" + (closes ? "yes" : "no") +
      "; onset lambda*(gap<1e-13)=" + (onset >= 0 ? fmt("%.3f", cfg.lambda_at(onset)) : std::string("none")) +
      " reruns:" + rerun_txt;
  return {4, wide && closes && stable, detail, seconds, 120};
}

Outcome fidelity_curves(const std::vector<SweepRecord>& recs, double seconds) {
  // (a) parity-resolved fidelity: points below 0.9 must form one contiguous
  // window of width <= 0.1 around the critical coupling.
  long first = -1, last = -1;
  std::size_t below = 0;
  double min_fp = INFINITY;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const double f = recs[i].f_parity.value_or(NAN);
    min_fp = std::min(min_fp, f);
    if (!(f >= 0.9)) {
      if (first < 0) first = static_cast<long>(i);
      last = static_cast<long>(i);
      ++below;
    }
  }
  bool a_ok = true;
  std::string a_txt = "min f_parity=" + fmt("%.6f", min_fp);
  if (first >= 0) {
    const double lo = recs[first].lambda0, hi = recs[last].lambda0;
    const bool contiguous = below == static_cast<std::size_t>(last - first + 1);
    a_ok = contiguous && hi - lo <= 0.1 + 1e-12 && lo <= 0.5 + 0.1 && hi >= 0.5 - 0.1;
    a_txt += " window [" + fmt("%.3f", lo) + "," + fmt("%.3f", hi) + "]";
  } else {
    a_txt += " (no point below 0.9)";
  }
  // (b) naive fidelity collapses in the degenerate region and agrees elsewhere.
  std::size_t degenerate = 0, collapsed = 0;
  double worst_agree = 0.0;
  for (const auto& r : recs) {
    if (r.gap < 1e-13) {
      ++degenerate;
      if (r.f_naive.value_or(NAN) < 0.5) ++collapsed;
    }
    if (r.gap > 1e-9) worst_agree = std::max(worst_agree, std::abs(*r.f_naive - *r.f_parity));
  }
  const double frac = degenerate ? static_cast<double>(collapsed) / degenerate : 0.0;
  const bool b_ok = degenerate > 0 && frac >= 0.2 && worst_agree <= 1e-10;
  const std::string detail = "(a) " + a_txt + "; (b) f_naive<0.5 at " + std::to_string(collapsed) + "/" +
                             std::to_string(degenerate) + " gap<1e-13 points (" + fmt("%.1f", 100 * frac) +
                             "%), max|f_naive-f_parity| where gap>1e-9 = " + fmt("%.3g", worst_agree);
  return {5, a_ok && b_ok, detail, seconds, 180};
}

Outcome concavity(const std::vector<SweepRecord>& recs, double seconds) {
  double worst = -INFINITY;
  for (std::size_t i = 1; i + 1 < recs.size(); ++i) {
    worst = std::max(worst, recs[i + 1].e0_even - 2 * recs[i].e0_even + recs[i - 1].e0_even);
    worst = std::max(worst, recs[i + 1].e0_odd - 2 * recs[i].e0_odd + recs[i - 1].e0_odd);
  }
  return {6, worst <= 1e-9, "max second difference=" + fmt("%.3g", worst), seconds, 180};
}

Outcome spacing_calibration() {
  const auto t0 = Clock::now();
  const auto poisson = spacing_ratios(oracle::poisson_levels(6000, 42));
  auto [diag, off] = oracle::goe_tridiagonal(6000, 42);
  const auto goe = spacing_ratios(tridiagonal_eigenvalues(diag, off));
  const bool synth_ok = std::abs(poisson.mean_r - kPoissonMeanRatio) <= 0.02 &&
                        std::abs(goe.mean_r - kGoeMeanRatio) <= 0.02;

  DickeParams p;
  p.twice_j = 40;
  p.lambda = 2.0;
  const int start = suggested_n_cut(p);
  const auto rep = select_n_cut(p, start);
  p.n_cut = rep.n_cut;
  const Basis b(p.twice_j, p.n_cut);
  const auto [even, odd] = split_sectors(b);
  const double strong = spacing_ratios(eigvalsh(build_sector(p, b, even))).mean_r;
  p.lambda = 0.2;
  const double weak = spacing_ratios(eigvalsh(build_sector(p, b, even))).mean_r;
  const bool dicke_ok = rep.passed && strong - weak >= 0.05;
  const std::string detail = "poisson=" + fmt("%.4f", poisson.mean_r) + " goe=" + fmt("%.4f", goe.mean_r) +
                             "; j=20 n_cut=" + std::to_string(rep.n_cut) + " (truncation " +
                             (rep.passed ? "converged" : "NOT converged") + ", |dE0|=" +
                             fmt("%.2g", std::max(rep.delta_even, rep.delta_odd)) + ") even sector dim " +
                             std::to_string(even.size()) + ": mean_r(2.0)=" + fmt("%.4f", strong) +
                             " mean_r(0.2)=" + fmt("%.4f", weak);
  return {7, synth_ok && dicke_ok, detail, since(t0), 120};
}

Outcome cli_determinism(const fs::path& dir, std::vector<std::vector<double>>& gaps) {
  const auto t0 = Clock::now();
  std::vector<std::string> files;
  for (const char* threads : {"1", "8"}) {
    // Identical flags, output path included, since the manifest records it.
    const fs::path out = dir / "sweep.csv";
    const std::string cmd = std::string("DICKE_THREADS=") + threads + " '" + DICKE_TOOL_PATH +
                            "' sweep --j 5 --ncut 40 --omega 1 --omega0 1 --lambda-min 0 --lambda-max 1.2"
                            " --points 601 --dlambda 1e-3 --mode both --seed 42 --out '" +
                            out.string() + "'";
    if (std::system(cmd.c_str()) != 0) return {8, false, "CLI run failed: " + cmd, since(t0), 360};
    files.push_back(slurp(out));
    gaps.push_back(gaps_from_csv(out));
  }
  const bool same = !files[0].empty() && files[0] == files[1];
  return {8, same,
          std::string(same ? "byte-identical" : "outputs differ") + " (" + std::to_string(files[0].size()) +
              " bytes)",
          since(t0), 360};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      expected.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--expect-fail N]...\n";
      return 2;
    }
  }

  const fs::path dir = fs::temp_directory_path() / "dicke_acceptance";
  fs::create_directories(dir);

  std::vector<Outcome> results;
  results.push_back(exact_small_case());
  results.push_back(sector_union());
  results.push_back(eigensolver_contract());

  SweepConfig cfg;
  const auto t0 = Clock::now();
  const auto recs = sweep(cfg);
  const double sweep_seconds = since(t0);
  for (const auto& r : recs)
    if (r.error) std::cout << "note: solver failure at lambda0=" << r.lambda0 << ": " << *r.error << '\n';

  std::vector<std::vector<double>> cli_gaps;
  const Outcome det = cli_determinism(dir, cli_gaps);
  results.push_back(gap_curve(recs, cfg, cli_gaps, sweep_seconds));
  results.push_back(fidelity_curves(recs, sweep_seconds));
  results.push_back(concavity(recs, sweep_seconds));
  results.push_back(spacing_calibration());
  results.push_back(det);

  std::set<int> failed;
  for (const auto& o : results) {
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << o.id << ": " << o.detail << " ["
              << fmt("%.1f", o.seconds) << " s, budget " << fmt("%.0f", o.budget) << " s"
              << (o.seconds > o.budget ? ", OVER BUDGET" : "") << "]\n";
    if (!o.passed) failed.insert(o.id);
  }
  std::cout << results.size() - failed.size() << "/" << results.size() << " criteria passed\n";
  if (failed == expected) {
    if (!expected.empty()) {
      std::cout << "failures match the declared known failures:";
      for (int id : expected) std::cout << ' ' << id;
      std::cout << '\n';
    }
    return 0;
  }
  for (int id : expected)
    if (!failed.count(id)) std::cout << "criterion " << id << " was declared failing but passed\n";
  return 1;
}
