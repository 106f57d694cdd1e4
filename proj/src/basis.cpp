#include "dicke/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dicke {

const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

int twice_spin(double j) {
  if (!std::isfinite(j) || j <= 0.0) {
    throw std::invalid_argument("spin j must be positive, got " + std::to_string(j));
  }
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (twice != rounded || rounded > 1e6) {
    throw std::invalid_argument("spin j must be a half-integer, got " + std::to_string(j));
  }
  return static_cast<int>(rounded);
}

Parity parity_of(const BasisState& state, int twice_j) {
  // m + j = (twice_m + twice_j) / 2 is a non-negative integer for valid states.
  const int total = state.n + (state.twice_m + twice_j) / 2;
  return total % 2 == 0 ? Parity::Even : Parity::Odd;
}

Basis::Basis(int twice_j, int n_cut) : twice_j_(twice_j), n_cut_(n_cut) {
  if (twice_j < 1) throw std::invalid_argument("2j must be >= 1");
  if (n_cut < 1) throw std::invalid_argument("n_cut must be >= 1, got " + std::to_string(n_cut));
  states_.reserve(static_cast<std::size_t>(n_cut + 1) * static_cast<std::size_t>(twice_j + 1));
  for (int n = 0; n <= n_cut; ++n) {
    for (int tm = -twice_j; tm <= twice_j; tm += 2) states_.push_back({n, tm});
  }
}

bool Basis::contains(int n, int twice_m) const {
  return n >= 0 && n <= n_cut_ && twice_m >= -twice_j_ && twice_m <= twice_j_ &&
         (twice_m + twice_j_) % 2 == 0;
}

std::size_t Basis::index(int n, int twice_m) const {
  if (!contains(n, twice_m)) {
    throw std::out_of_range("state (n=" + std::to_string(n) + ", 2m=" + std::to_string(twice_m) +
                            ") outside basis");
  }
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(spin_dim()) +
         static_cast<std::size_t>((twice_m + twice_j_) / 2);
}

Basis build_basis(double j, int n_cut) { return Basis(twice_spin(j), n_cut); }

std::vector<std::size_t> SectorBasis::local_index() const {
  std::vector<std::size_t> local(parent_size, npos);
  for (std::size_t k = 0; k < positions.size(); ++k) local[positions[k]] = k;
  return local;
}

std::pair<SectorBasis, SectorBasis> split_sectors(const Basis& basis) {
  SectorBasis even{Parity::Even, basis.size(), {}};
  SectorBasis odd{Parity::Odd, basis.size(), {}};
  even.positions.reserve(basis.size() / 2 + 1);
  odd.positions.reserve(basis.size() / 2 + 1);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    (basis.parity(i) == Parity::Even ? even : odd).positions.push_back(i);
  }
  return {std::move(even), std::move(odd)};
}

std::vector<double> embed(const SectorBasis& sector, const std::vector<double>& local) {
  if (local.size() != sector.size()) {
    throw std::invalid_argument("embed: vector length does not match sector size");
  }
  std::vector<double> full(sector.parent_size, 0.0);
  for (std::size_t k = 0; k < local.size(); ++k) full[sector.positions[k]] = local[k];
  return full;
}

}  // namespace dicke
