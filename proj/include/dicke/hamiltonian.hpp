#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "dicke/basis.hpp"

namespace dicke {

// H = omega0 Jz + omega a^dag a + lambda / sqrt(2j) (a^dag + a)(J+ + J-)
struct DickeParams {
  double omega = 1.0;
  double omega0 = 1.0;
  double lambda = 0.0;
  int twice_j = 10;
  int n_cut = 40;

  double j() const { return 0.5 * twice_j; }
  double critical_coupling() const;
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Dense row-major storage. Off-diagonal entries are only written in
// (i,k)/(k,i) pairs so the matrix is symmetric bit for bit.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t k) const { return data_[i * dim_ + k]; }

  void set_diagonal(std::size_t i, double v) { data_[i * dim_ + i] = v; }
  void set_pair(std::size_t i, std::size_t k, double v) {
    data_[i * dim_ + k] = v;
    data_[k * dim_ + i] = v;
  }

  const double* row(std::size_t i) const { return data_.data() + i * dim_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& mutable_data() { return data_; }

  double max_abs() const;
  double trace() const;
  bool is_symmetric() const;
  bool all_finite() const;

  // Builds a matrix from row-major entries; throws unless exactly symmetric.
  static SymmetricMatrix from_row_major(std::size_t dim, std::vector<double> entries);

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Compressed sparse rows holding both triangles of the off-diagonal part.
struct SparseSymmetric {
  std::size_t dim = 0;
  std::vector<double> diag;
  std::vector<std::size_t> row_start;  // dim + 1 entries
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  double max_abs() const;
  bool has_couplings() const { return !vals.empty(); }
  // y = H x
  void multiply(const double* x, double* y) const;
};

enum class Ladder { Raise, Lower };

// <m +/- 1| J+/- |m> = sqrt(j(j+1) - m(m +/- 1)); zero at the ends of the ladder.
double ladder_coeff(int twice_j, int twice_m, Ladder direction);

SymmetricMatrix build_full(const DickeParams& params, const Basis& basis);
SymmetricMatrix build_sector(const DickeParams& params, const Basis& basis,
                             const SectorBasis& sector);

SparseSymmetric build_sector_sparse(const DickeParams& params, const Basis& basis,
                                   const SectorBasis& sector);

// Text dump: "dim" on the first line, then one row per line, 17 significant digits.
void write_matrix(std::ostream& out, const SymmetricMatrix& m);
SymmetricMatrix read_matrix(std::istream& in);

}  // namespace dicke
