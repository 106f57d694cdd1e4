#include "dicke/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dicke {

double DickeParams::critical_coupling() const { return 0.5 * std::sqrt(omega * omega0); }

void DickeParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be > 0");
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("omega0 must be > 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be >= 0");
  if (twice_j < 1) throw std::invalid_argument("j must be a positive half-integer");
  if (n_cut < 1) throw std::invalid_argument("n_cut must be >= 1");
}

double SymmetricMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool SymmetricMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < i; ++k)
      if ((*this)(i, k) != (*this)(k, i)) return false;
  return true;
}

bool SymmetricMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SymmetricMatrix SymmetricMatrix::from_row_major(std::size_t dim, std::vector<double> entries) {
  if (entries.size() != dim * dim) {
    throw std::invalid_argument("expected " + std::to_string(dim * dim) + " entries, got " +
                                std::to_string(entries.size()));
  }
  SymmetricMatrix m;
  m.dim_ = dim;
  m.data_ = std::move(entries);
  if (!m.is_symmetric()) throw std::invalid_argument("matrix is not symmetric");
  return m;
}

double ladder_coeff(int twice_j, int twice_m, Ladder direction) {
  const int step = direction == Ladder::Raise ? 2 : -2;
  const int target = twice_m + step;
  if (twice_m < -twice_j || twice_m > twice_j || target < -twice_j || target > twice_j) return 0.0;
  // 4 * (j(j+1) - m(m +/- 1)) in exact integer arithmetic.
  const long long four_x = static_cast<long long>(twice_j) * (twice_j + 2) -
                           static_cast<long long>(twice_m) * target;
  return 0.5 * std::sqrt(static_cast<double>(four_x));
}

namespace {

void check_consistent(const DickeParams& params, const Basis& basis) {
  params.validate();
  if (params.twice_j != basis.twice_j() || params.n_cut != basis.n_cut()) {
    throw std::invalid_argument("basis (2j=" + std::to_string(basis.twice_j()) +
                                ", n_cut=" + std::to_string(basis.n_cut()) +
                                ") does not match params (2j=" + std::to_string(params.twice_j) +
                                ", n_cut=" + std::to_string(params.n_cut) + ")");
  }
}

// Calls emit(i, k, value) once per nonzero coupling with n_k = n_i + 1.
template <typename Emit>
void for_each_coupling(const DickeParams& params, const Basis& basis, Emit&& emit) {
  const double g = params.lambda / std::sqrt(static_cast<double>(basis.twice_j()));
  if (g == 0.0) return;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const BasisState& s = basis[i];
    if (s.n == basis.n_cut()) continue;
    const double boson = std::sqrt(static_cast<double>(s.n + 1));
    for (Ladder dir : {Ladder::Lower, Ladder::Raise}) {
      const double spin = ladder_coeff(basis.twice_j(), s.twice_m, dir);
      if (spin == 0.0) continue;
      const int tm = s.twice_m + (dir == Ladder::Raise ? 2 : -2);
      emit(i, basis.index(s.n + 1, tm), g * boson * spin);
    }
  }
}

double diagonal(const DickeParams& params, const BasisState& s) {
  return params.omega0 * 0.5 * s.twice_m + params.omega * s.n;
}

}  // namespace

SymmetricMatrix build_full(const DickeParams& params, const Basis& basis) {
  check_consistent(params, basis);
  SymmetricMatrix h(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) h.set_diagonal(i, diagonal(params, basis[i]));
  for_each_coupling(params, basis, [&](std::size_t i, std::size_t k, double v) { h.set_pair(i, k, v); });
  return h;
}

namespace {

void check_sector(const Basis& basis, const SectorBasis& sector) {
  if (sector.parent_size != basis.size()) throw std::invalid_argument("sector was built from a different basis");
  for (std::size_t p : sector.positions) {
    if (p >= basis.size() || basis.parity(p) != sector.parity) {
      throw std::invalid_argument("sector positions inconsistent with basis parities");
    }
  }
}

}  // namespace

SymmetricMatrix build_sector(const DickeParams& params, const Basis& basis,
                             const SectorBasis& sector) {
  check_consistent(params, basis);
  check_sector(basis, sector);
  const auto local = sector.local_index();
  SymmetricMatrix h(sector.size());
  for (std::size_t k = 0; k < sector.size(); ++k) h.set_diagonal(k, diagonal(params, basis[sector.positions[k]]));
  for_each_coupling(params, basis, [&](std::size_t i, std::size_t k, double v) {
    const std::size_t li = local[i];
    if (li == SectorBasis::npos) return;
    // Couplings never leave a parity sector.
    h.set_pair(li, local[k], v);
  });
  return h;
}

double SparseSymmetric::max_abs() const {
  double m = 0.0;
  for (double v : diag) m = std::max(m, std::abs(v));
  for (double v : vals) m = std::max(m, std::abs(v));
  return m;
}

void SparseSymmetric::multiply(const double* x, double* y) const {
  for (std::size_t i = 0; i < dim; ++i) {
    double s = diag[i] * x[i];
    for (std::size_t p = row_start[i]; p < row_start[i + 1]; ++p) s += vals[p] * x[cols[p]];
    y[i] = s;
  }
}

SparseSymmetric build_sector_sparse(const DickeParams& params, const Basis& basis,
                                   const SectorBasis& sector) {
  check_consistent(params, basis);
  check_sector(basis, sector);
  const auto local = sector.local_index();
  SparseSymmetric h;
  h.dim = sector.size();
  h.diag.resize(h.dim);
  for (std::size_t k = 0; k < h.dim; ++k) h.diag[k] = diagonal(params, basis[sector.positions[k]]);
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(h.dim);
  for_each_coupling(params, basis, [&](std::size_t i, std::size_t k, double v) {
    const std::size_t li = local[i];
    if (li == SectorBasis::npos) return;
    rows[li].emplace_back(local[k], v);
    rows[local[k]].emplace_back(li, v);
  });
  h.row_start.assign(1, 0);
  for (auto& r : rows) {
    std::sort(r.begin(), r.end());
    for (const auto& [c, v] : r) {
      h.cols.push_back(c);
      h.vals.push_back(v);
    }
    h.row_start.push_back(h.cols.size());
  }
  return h;
}

void write_matrix(std::ostream& out, const SymmetricMatrix& m) {
  const auto old_prec = out.precision(std::numeric_limits<double>::max_digits10);
  out << m.dim() << '\n';
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t k = 0; k < m.dim(); ++k) {
      if (k) out << ' ';
      out << m(i, k);
    }
    out << '\n';
  }
  out.precision(old_prec);
}

SymmetricMatrix read_matrix(std::istream& in) {
  std::size_t dim = 0;
  if (!(in >> dim)) throw std::runtime_error("matrix dump: missing dimension");
  std::vector<double> entries(dim * dim);
  for (double& v : entries) {
    if (!(in >> v)) throw std::runtime_error("matrix dump: truncated entries");
  }
  return SymmetricMatrix::from_row_major(dim, std::move(entries));
}

}  // namespace dicke
