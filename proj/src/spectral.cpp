#include "dicke/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dicke {

namespace {

void check_window(std::span<const double> values, IndexWindow window) {
  if (window.end > values.size() || window.begin > window.end) {
    throw std::invalid_argument("window [" + std::to_string(window.begin) + ", " +
                                std::to_string(window.end) + ") outside spectrum of " +
                                std::to_string(values.size()) + " levels");
  }
  if (window.size() < 3) {
    throw std::invalid_argument("spacing window holds " + std::to_string(window.size()) +
                                " levels; at least 3 are required");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] >= values[i - 1])) throw std::invalid_argument("levels must be ascending");
  }
}

}  // namespace

IndexWindow trimmed_window(std::size_t count, double trim) {
  if (!(trim >= 0.0 && trim < 0.5)) throw std::invalid_argument("trim must lie in [0, 0.5)");
  const auto cut = static_cast<std::size_t>(std::floor(trim * static_cast<double>(count)));
  return {cut, count - cut};
}

SpacingStats spacing_ratios(std::span<const double> values, IndexWindow window) {
  check_window(values, window);
  SpacingStats st;
  st.window = window;
  st.ratios.reserve(window.size() - 2);
  double sum = 0.0;
  for (std::size_t i = window.begin; i + 2 < window.end; ++i) {
    const double s0 = values[i + 1] - values[i];
    const double s1 = values[i + 2] - values[i + 1];
    const double hi = std::max(s0, s1);
    const double r = hi > 0.0 ? std::min(s0, s1) / hi : 0.0;
    st.ratios.push_back(r);
    sum += r;
  }
  st.mean_r = sum / static_cast<double>(st.ratios.size());
  return st;
}

SpacingStats spacing_ratios(std::span<const double> values, double trim) {
  return spacing_ratios(values, trimmed_window(values.size(), trim));
}

SpacingHistogram spacing_histogram(std::span<const double> values, int bins, IndexWindow window,
                                   double s_max) {
  if (bins < 4) throw std::invalid_argument("bins must be >= 4");
  if (!(s_max > 0.0)) throw std::invalid_argument("s_max must be > 0");
  check_window(values, window);

  std::vector<double> spacings;
  spacings.reserve(window.size() - 1);
  double total = 0.0;
  for (std::size_t i = window.begin; i + 1 < window.end; ++i) {
    spacings.push_back(values[i + 1] - values[i]);
    total += spacings.back();
  }
  if (!(total > 0.0)) throw std::invalid_argument("window is fully degenerate; mean spacing is zero");

  SpacingHistogram h;
  h.samples = spacings.size();
  h.mean_spacing = total / static_cast<double>(h.samples);
  const double width = s_max / bins;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = b * width;
  h.density.assign(static_cast<std::size_t>(bins), 0.0);
  for (double s : spacings) {
    const double x = s / h.mean_spacing;
    const auto b = static_cast<std::size_t>(std::floor(x / width));
    if (b >= h.density.size()) {
      ++h.overflow;
      continue;
    }
    h.density[b] += 1.0;
  }
  for (double& d : h.density) d /= static_cast<double>(h.samples) * width;
  return h;
}

void write_histogram(std::ostream& out, const SpacingHistogram& h) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t b = 0; b < h.density.size(); ++b) out << h.center(b) << ' ' << h.density[b] << '\n';
  out.precision(old);
}

}  // namespace dicke
