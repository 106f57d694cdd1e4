#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dicke/basis.hpp"
#include "dicke/eigen.hpp"
#include "dicke/hamiltonian.hpp"

namespace dicke {

enum class SweepMode { Naive, Parity, Both };

const char* to_string(SweepMode mode);
SweepMode parse_sweep_mode(const std::string& text);

struct SweepConfig {
  DickeParams params;  // params.lambda is ignored
  double lambda_min = 0.0;
  double lambda_max = 1.2;
  int points = 601;
  double dlambda = 1e-3;
  SweepMode mode = SweepMode::Both;
  std::uint64_t seed = 42;
  // Relative: the naive solve treats the doublet as degenerate when
  // E1 - E0 < gap_tol * max(1, |E0|).
  double gap_tol = 1e-12;
  // Worker count; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
  // Everything except dlambda, gap_tol and mode (all the energy curves need).
  void validate_grid() const;
  double lambda_at(std::size_t index) const;
};

struct SweepRecord {
  double lambda0 = 0.0;
  std::optional<double> f_naive;
  std::optional<double> f_parity;
  double e0_even = 0.0;
  double e0_odd = 0.0;
  double gap = 0.0;
  Parity gs_parity = Parity::Even;
  // Set when the solver failed at this point; the numeric fields are then NaN.
  std::optional<std::string> error;
};

// |<v|w>|^2 for unit vectors.
double fidelity(std::span<const double> v, std::span<const double> w);

// Basis and sectors for one (j, n_cut, omega, omega0); evaluates single grid
// points. Immutable after construction, so one engine serves every worker.
class SweepEngine {
 public:
  explicit SweepEngine(const DickeParams& params);

  const Basis& basis() const { return basis_; }
  const SectorBasis& sector(Parity p) const { return p == Parity::Even ? even_ : odd_; }

  GroundState sector_ground_state(double lambda, Parity p) const;
  double sector_ground_energy(double lambda, Parity p) const;
  // Two lowest full-space eigenpairs as ground-state candidates.
  std::pair<GroundState, GroundState> full_doublet(double lambda) const;

  // One grid point. dlambda may be zero here (the sweep itself requires > 0).
  SweepRecord evaluate(double lambda0, double dlambda, std::size_t index, SweepMode mode,
                       std::uint64_t seed, double gap_tol) const;

 private:
  DickeParams with_lambda(double lambda) const;
  GroundState naive_ground_state(double lambda, double gap_tol, const MixKey& key) const;

  DickeParams params_;
  Basis basis_;
  SectorBasis even_;
  SectorBasis odd_;
};

// Records in ascending lambda0 order, independent of the worker count.
std::vector<SweepRecord> sweep(const SweepConfig& config);

struct EnergyPoint {
  double lambda0 = 0.0;
  double e0_even = 0.0;
  double e0_odd = 0.0;
  std::optional<std::string> error;
};

std::vector<EnergyPoint> energy_curves(const SweepConfig& config);

struct TruncationReport {
  int n_cut = 0;
  int n_cut_grown = 0;
  double e0_even = 0.0;
  double e0_odd = 0.0;
  double e0_even_grown = 0.0;
  double e0_odd_grown = 0.0;
  double delta_even = 0.0;
  double delta_odd = 0.0;
  double tol = 0.0;
  bool passed = false;
};

// Re-solves both sectors with n_cut' = ceil(growth * n_cut) and compares the
// ground energies against tol.
TruncationReport truncation_check(const DickeParams& params, double growth = 1.25,
                                  double tol = 1e-8);

// Mean-field boson number estimate used as a starting point when searching
// for an adequate truncation.
int suggested_n_cut(const DickeParams& params);

// Smallest n_cut on the ladder start, ceil(growth*start), ... that passes
// truncation_check; gives up after max_rounds and returns the last report.
TruncationReport select_n_cut(DickeParams params, int start, double growth = 1.25,
                              double tol = 1e-8, int max_rounds = 6);

}  // namespace dicke
