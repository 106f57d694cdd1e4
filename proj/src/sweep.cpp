#include "dicke/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <thread>

namespace dicke {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
}

}  // namespace

const char* to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::Naive: return "naive";
    case SweepMode::Parity: return "parity";
    case SweepMode::Both: break;
  }
  return "both";
}

SweepMode parse_sweep_mode(const std::string& text) {
  if (text == "naive") return SweepMode::Naive;
  if (text == "parity") return SweepMode::Parity;
  if (text == "both") return SweepMode::Both;
  throw std::invalid_argument("unknown sweep mode '" + text + "' (expected naive, parity or both)");
}

void SweepConfig::validate_grid() const {
  DickeParams p = params;
  p.lambda = 0.0;
  p.validate();
  if (!std::isfinite(lambda_min) || !std::isfinite(lambda_max) || !(lambda_min < lambda_max)) {
    throw std::invalid_argument("lambda_min must be < lambda_max");
  }
  if (lambda_min < 0.0) throw std::invalid_argument("lambda_min must be >= 0");
  if (points < 2) throw std::invalid_argument("points must be >= 2");
}

void SweepConfig::validate() const {
  validate_grid();
  if (!(dlambda > 0.0) || !(dlambda < lambda_max - lambda_min)) {
    throw std::invalid_argument("dlambda must satisfy 0 < dlambda < lambda_max - lambda_min");
  }
  if (!(gap_tol > 0.0) || !std::isfinite(gap_tol)) throw std::invalid_argument("gap_tol must be > 0");
}

double SweepConfig::lambda_at(std::size_t index) const {
  if (index + 1 == static_cast<std::size_t>(points)) return lambda_max;
  return lambda_min + (lambda_max - lambda_min) * static_cast<double>(index) / (points - 1);
}

double fidelity(std::span<const double> v, std::span<const double> w) {
  if (v.size() != w.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  double vv = 0.0, ww = 0.0, vw = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    vv += v[i] * v[i];
    ww += w[i] * w[i];
    vw += v[i] * w[i];
  }
  if (std::abs(vv - 1.0) > 1e-10 || std::abs(ww - 1.0) > 1e-10) {
    throw std::invalid_argument("fidelity: inputs must be unit vectors");
  }
  return vw * vw;
}

SweepEngine::SweepEngine(const DickeParams& params)
    : params_(params), basis_(params.twice_j, params.n_cut) {
  params_.validate();
  auto [even, odd] = split_sectors(basis_);
  even_ = std::move(even);
  odd_ = std::move(odd);
}

DickeParams SweepEngine::with_lambda(double lambda) const {
  DickeParams p = params_;
  p.lambda = lambda;
  return p;
}

GroundState SweepEngine::sector_ground_state(double lambda, Parity p) const {
  const SectorBasis& s = sector(p);
  return ground_state(build_sector(with_lambda(lambda), basis_, s), s);
}

double SweepEngine::sector_ground_energy(double lambda, Parity p) const {
  return eigvalsh(build_sector(with_lambda(lambda), basis_, sector(p))).front();
}

std::pair<GroundState, GroundState> SweepEngine::full_doublet(double lambda) const {
  const auto r = eigh_lowest(build_full(with_lambda(lambda), basis_), 2);
  auto make = [&](std::size_t i) {
    auto v = r.vector(i);
    return GroundState{r.values[i], {v.begin(), v.end()}, infer_parity(basis_, v)};
  };
  return {make(0), make(1)};
}

GroundState SweepEngine::naive_ground_state(double lambda, double gap_tol, const MixKey& key) const {
  auto [g0, g1] = full_doublet(lambda);
  const double threshold = gap_tol * std::max(1.0, std::abs(g0.energy));
  if (g1.energy - g0.energy < threshold) return degenerate_mix(g0, g1, threshold, key);
  return g0;
}

SweepRecord SweepEngine::evaluate(double lambda0, double dlambda, std::size_t index,
                                  SweepMode mode, std::uint64_t seed, double gap_tol) const {
  SweepRecord rec;
  rec.lambda0 = lambda0;
  const double probe = lambda0 + dlambda;
  try {
    GroundState even = sector_ground_state(lambda0, Parity::Even);
    GroundState odd = sector_ground_state(lambda0, Parity::Odd);
    rec.e0_even = even.energy;
    rec.e0_odd = odd.energy;
    rec.gap = std::abs(even.energy - odd.energy);
    rec.gs_parity = odd.energy < even.energy ? Parity::Odd : Parity::Even;

    if (mode != SweepMode::Naive) {
      // Stay in the sector that holds the ground state at lambda0.
      const GroundState& here = rec.gs_parity == Parity::Even ? even : odd;
      const GroundState there = sector_ground_state(probe, rec.gs_parity);
      rec.f_parity = fidelity(here.vector, there.vector);
    }
    if (mode != SweepMode::Parity) {
      const GroundState a = naive_ground_state(lambda0, gap_tol, {seed, index, 0});
      const GroundState b = naive_ground_state(probe, gap_tol, {seed, index, 1});
      rec.f_naive = fidelity(a.vector, b.vector);
    }
  } catch (const std::exception& e) {
    rec.f_naive.reset();
    rec.f_parity.reset();
    rec.e0_even = rec.e0_odd = rec.gap = kNaN;
    rec.error = e.what();
  }
  return rec;
}

std::vector<SweepRecord> sweep(const SweepConfig& config) {
  config.validate();
  const SweepEngine engine(config.params);
  std::vector<SweepRecord> records(static_cast<std::size_t>(config.points));
  parallel_for(records.size(), config.threads, [&](std::size_t i) {
    records[i] = engine.evaluate(config.lambda_at(i), config.dlambda, i, config.mode, config.seed,
                                 config.gap_tol);
  });
  return records;
}

std::vector<EnergyPoint> energy_curves(const SweepConfig& config) {
  config.validate_grid();
  const SweepEngine engine(config.params);
  std::vector<EnergyPoint> out(static_cast<std::size_t>(config.points));
  parallel_for(out.size(), config.threads, [&](std::size_t i) {
    EnergyPoint& pt = out[i];
    pt.lambda0 = config.lambda_at(i);
    try {
      pt.e0_even = engine.sector_ground_energy(pt.lambda0, Parity::Even);
      pt.e0_odd = engine.sector_ground_energy(pt.lambda0, Parity::Odd);
    } catch (const std::exception& e) {
      pt.e0_even = pt.e0_odd = kNaN;
      pt.error = e.what();
    }
  });
  return out;
}

TruncationReport truncation_check(const DickeParams& params, double growth, double tol) {
  params.validate();
  if (!(growth > 1.0)) throw std::invalid_argument("growth must be > 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
  TruncationReport rep;
  rep.n_cut = params.n_cut;
  rep.n_cut_grown = static_cast<int>(std::ceil(growth * params.n_cut));
  if (rep.n_cut_grown <= rep.n_cut) rep.n_cut_grown = rep.n_cut + 1;
  rep.tol = tol;

  DickeParams grown = params;
  grown.n_cut = rep.n_cut_grown;
  // Only ground energies are needed, so the sparse solver keeps large
  // truncations affordable.
  auto ground_energies = [](const DickeParams& p) {
    const Basis basis(p.twice_j, p.n_cut);
    const auto [even, odd] = split_sectors(basis);
    return std::pair{lowest_eigenvalue(build_sector_sparse(p, basis, even)),
                     lowest_eigenvalue(build_sector_sparse(p, basis, odd))};
  };
  std::tie(rep.e0_even, rep.e0_odd) = ground_energies(params);
  std::tie(rep.e0_even_grown, rep.e0_odd_grown) = ground_energies(grown);
  rep.delta_even = std::abs(rep.e0_even_grown - rep.e0_even);
  rep.delta_odd = std::abs(rep.e0_odd_grown - rep.e0_odd);
  rep.passed = rep.delta_even <= tol && rep.delta_odd <= tol;
  return rep;
}

int suggested_n_cut(const DickeParams& params) {
  params.validate();
  // Superradiant displacement alpha^2 = 2 lambda^2 j (1 - mu^2) / omega^2,
  // mu = lambda_c^2 / lambda^2; zero in the normal phase.
  const double lc = params.critical_coupling();
  double alpha2 = 0.0;
  if (params.lambda > lc) {
    const double mu = (lc * lc) / (params.lambda * params.lambda);
    alpha2 = 2.0 * params.lambda * params.lambda * params.j() * (1.0 - mu * mu) /
             (params.omega * params.omega);
  }
  const double alpha = std::sqrt(alpha2);
  return static_cast<int>(std::ceil(alpha2 + 8.0 * std::max(alpha, 1.0) + 16.0));
}

TruncationReport select_n_cut(DickeParams params, int start, double growth, double tol,
                              int max_rounds) {
  params.n_cut = std::max(1, start);
  TruncationReport rep;
  for (int round = 0; round < max_rounds; ++round) {
    rep = truncation_check(params, growth, tol);
    if (rep.passed) return rep;
    params.n_cut = rep.n_cut_grown;
  }
  return rep;
}

}  // namespace dicke
