#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace dicke {

// Half-open range [begin, end) of eigenvalue indices.
struct IndexWindow {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end > begin ? end - begin : 0; }
};

// Drops floor(trim * count) levels from each edge of the spectrum.
IndexWindow trimmed_window(std::size_t count, double trim = 0.1);

struct SpacingStats {
  // r_i = min(s_i, s_{i+1}) / max(s_i, s_{i+1}), s_i = E_{i+1} - E_i, over the window.
  // Three coincident levels (both spacings zero) count as r = 0.
  std::vector<double> ratios;
  double mean_r = 0.0;
  IndexWindow window;
};

// Reference mean ratios: Poisson (2 ln 2 - 1) and large-N GOE.
inline constexpr double kPoissonMeanRatio = 0.3863;
inline constexpr double kGoeMeanRatio = 0.5307;

// `values` must be ascending and belong to a single symmetry sector.
SpacingStats spacing_ratios(std::span<const double> values, IndexWindow window);
SpacingStats spacing_ratios(std::span<const double> values, double trim = 0.1);

struct SpacingHistogram {
  std::vector<double> edges;    // bins + 1 entries over [0, s_max]
  std::vector<double> density;  // normalized so that sum(density * width) = in-range fraction
  std::size_t overflow = 0;     // spacings >= s_max
  std::size_t samples = 0;
  double mean_spacing = 0.0;    // raw mean spacing used for normalization

  double center(std::size_t bin) const { return 0.5 * (edges[bin] + edges[bin + 1]); }
};

// Spacings inside the window divided by their mean (no unfolding).
SpacingHistogram spacing_histogram(std::span<const double> values, int bins, IndexWindow window,
                                   double s_max = 4.0);

// Two columns: bin center, density.
void write_histogram(std::ostream& out, const SpacingHistogram& h);

}  // namespace dicke
