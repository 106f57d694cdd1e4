#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace dicke {

// |n> (x) |j, m> with m stored as 2m so half-integer spins stay exact.
struct BasisState {
  int n = 0;
  int twice_m = 0;

  friend bool operator==(const BasisState&, const BasisState&) = default;
};

enum class Parity : std::uint8_t { Even, Odd };

const char* to_string(Parity p);

// Converts a total spin given as a real number into 2j; throws if j is not a
// positive half-integer.
int twice_spin(double j);

// Parity of exp(i*pi*(a^dag a + Jz + j)): even iff n + m + j is even.
Parity parity_of(const BasisState& state, int twice_j);

// Ordered product basis, lexicographic in (n, twice_m).
class Basis {
 public:
  Basis(int twice_j, int n_cut);

  int twice_j() const { return twice_j_; }
  double j() const { return 0.5 * twice_j_; }
  int n_cut() const { return n_cut_; }
  int spin_dim() const { return twice_j_ + 1; }
  std::size_t size() const { return states_.size(); }

  const BasisState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<BasisState>& states() const { return states_; }
  Parity parity(std::size_t i) const { return parity_of(states_[i], twice_j_); }

  bool contains(int n, int twice_m) const;
  // Position of (n, twice_m); throws std::out_of_range outside the truncated space.
  std::size_t index(int n, int twice_m) const;

 private:
  int twice_j_;
  int n_cut_;
  std::vector<BasisState> states_;
};

Basis build_basis(double j, int n_cut);

struct SectorBasis {
  Parity parity = Parity::Even;
  std::size_t parent_size = 0;
  std::vector<std::size_t> positions;

  std::size_t size() const { return positions.size(); }
  // Parent index -> local index, or npos when the state belongs to the other sector.
  std::vector<std::size_t> local_index() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Returns (even, odd).
std::pair<SectorBasis, SectorBasis> split_sectors(const Basis& basis);

// Lifts a sector-local coefficient vector into the parent basis (zeros elsewhere).
std::vector<double> embed(const SectorBasis& sector, const std::vector<double>& local);

}  // namespace dicke
