#include "dicke/cli/self_test.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dicke/basis.hpp"
#include "dicke/eigen.hpp"

namespace dicke::cli {

namespace {

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

}  // namespace

std::vector<InvariantCheck> run_self_test(DickeParams params, int max_n_cut) {
  params.n_cut = std::min(params.n_cut, max_n_cut);
  params.validate();
  std::vector<InvariantCheck> out;
  const Basis basis(params.twice_j, params.n_cut);
  const auto [even, odd] = split_sectors(basis);

  {
    std::vector<int> seen(basis.size(), 0);
    for (auto p : even.positions) ++seen[p];
    for (auto p : odd.positions) ++seen[p];
    const bool ok = std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
    out.push_back({"sector partition", ok,
                   std::to_string(even.size()) + " even + " + std::to_string(odd.size()) + " odd = " +
                       std::to_string(basis.size())});
  }
  {
    bool ok = true;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto s = basis[i];
      for (int dn : {-1, 1})
        for (int dm : {-2, 2})
          if (basis.contains(s.n + dn, s.twice_m + dm))
            ok = ok && basis.parity(basis.index(s.n + dn, s.twice_m + dm)) == basis.parity(i);
    }
    out.push_back({"parity conserved by coupling stencil", ok, ""});
  }
  const SymmetricMatrix h = build_full(params, basis);
  out.push_back({"exact symmetry", h.is_symmetric(), "dim " + std::to_string(h.dim())});
  {
    double worst = 0.0;
    for (auto i : even.positions)
      for (auto k : odd.positions) worst = std::max(worst, std::abs(h(i, k)));
    out.push_back({"even/odd blocks decoupled", worst == 0.0, "max cross entry " + sci(worst)});
  }
  try {
    const auto full = eigh(h);
    std::vector<double> joined = eigvalsh(build_sector(params, basis, even));
    const auto vo = eigvalsh(build_sector(params, basis, odd));
    joined.insert(joined.end(), vo.begin(), vo.end());
    std::sort(joined.begin(), joined.end());
    double dev = 0.0;
    for (std::size_t i = 0; i < joined.size(); ++i) dev = std::max(dev, std::abs(joined[i] - full.values[i]));
    const double scale = h.max_abs();
    out.push_back({"sector spectra union equals full spectrum", dev <= 1e-9 * scale,
                   "max deviation " + sci(dev) + " vs " + sci(1e-9 * scale)});

    const std::size_t n = h.dim();
    double recon = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t c = 0; c < n; ++c) s += full.vector(c)[i] * full.values[c] * full.vector(c)[k];
        recon = std::max(recon, std::abs(s - h(i, k)));
      }
    }
    out.push_back({"eigendecomposition reconstructs H", recon <= 1e-8 * scale,
                   "max deviation " + sci(recon) + ", residual bound " + sci(full.residual_bound)});
  } catch (const NumericalError& e) {
    out.push_back({"eigendecomposition", false, e.what()});
  }
  return out;
}

}  // namespace dicke::cli
