#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/basis.hpp"
#include "dicke/hamiltonian.hpp"

namespace dicke {

// Solver failure: QL did not converge, or a post-solve check was violated.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenResult {
  std::size_t dim = 0;
  // Ascending. Holds the full spectrum even when only some vectors were computed.
  std::vector<double> values;
  // Column-major: vector i occupies [i*dim, (i+1)*dim).
  std::vector<double> vectors;
  // max_i ||H v_i - E_i v_i||_inf over the computed vectors.
  double residual_bound = 0.0;

  std::size_t vector_count() const { return dim == 0 ? 0 : vectors.size() / dim; }
  std::span<const double> vector(std::size_t i) const {
    return {vectors.data() + i * dim, dim};
  }
};

// Acceptance thresholds for the post-solve checks.
inline constexpr double kResidualTolerance = 1e-9;      // relative to max|H|
inline constexpr double kOrthonormalityTolerance = 1e-10;
inline constexpr int kMaxQlIterations = 64;             // per eigenvalue

// Full decomposition: Householder tridiagonalization, explicit Q, implicit QL.
// Each eigenvector's largest-magnitude entry is positive.
EigenResult eigh(const SymmetricMatrix& matrix);

// Full spectrum plus the `count` lowest eigenvectors, recovered from the same
// tridiagonal form by inverse iteration with in-cluster reorthogonalization.
EigenResult eigh_lowest(const SymmetricMatrix& matrix, std::size_t count);

// Spectrum only; consumes the matrix storage.
std::vector<double> eigvalsh(SymmetricMatrix matrix);

// Spectrum of the symmetric tridiagonal matrix with the given diagonal and
// off-diagonal (off[i] couples i and i+1), ascending.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off);

// Lowest eigenvalue only, by Lanczos with full reorthogonalization on the
// sparse form. The converged Ritz pair is checked against the matrix with the
// same residual tolerance as the dense solvers. A matrix without couplings
// returns its smallest diagonal entry exactly.
double lowest_eigenvalue(const SparseSymmetric& matrix);

enum class ParityTag : std::uint8_t { Even, Odd, Mixed };

const char* to_string(ParityTag p);
ParityTag tag_of(Parity p);

struct GroundState {
  double energy = 0.0;
  std::vector<double> vector;  // unit norm, in the coordinates of the solved matrix
  ParityTag parity = ParityTag::Mixed;
};

// Sector solve: vector is in sector-local coordinates, tagged with the sector parity.
GroundState ground_state(const SymmetricMatrix& sector_matrix, const SectorBasis& sector);
// Full-space solve: tag inferred from the even-parity weight of the vector.
GroundState ground_state(const SymmetricMatrix& full_matrix, const Basis& basis);

// Even-sector weight threshold for tagging a full-space vector.
inline constexpr double kParityWeightTolerance = 1e-8;
ParityTag infer_parity(const Basis& basis, std::span<const double> vector);

// Identifies one random draw: all randomness in a sweep is a pure function of
// (seed, point, probe), never of scheduling.
struct MixKey {
  std::uint64_t seed = 0;
  std::uint64_t point = 0;
  std::uint32_t probe = 0;
};

// Uniform angle in [0, 2*pi) derived from the key alone.
double mix_angle(const MixKey& key);

// cos(theta) v0 + sin(theta) v1, energy of g0, tagged Mixed.
GroundState rotate_pair(const GroundState& g0, const GroundState& g1, double theta);

// Models the solver's arbitrary choice inside a numerically degenerate doublet.
// Throws std::invalid_argument when |E1 - E0| >= gap_tol.
GroundState degenerate_mix(const GroundState& g0, const GroundState& g1, double gap_tol,
                           const MixKey& key);

}  // namespace dicke
