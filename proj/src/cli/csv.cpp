#include "dicke/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace dicke::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void RunManifest::add(std::string key, std::string value) {
  entries.emplace_back(std::move(key), std::move(value));
}

void RunManifest::add(std::string key, double value) { add(std::move(key), format_double(value)); }

void RunManifest::add(std::string key, long long value) {
  add(std::move(key), std::to_string(value));
}

void RunManifest::write(std::ostream& out) const {
  out << "# tool: " << kToolVersion << '\n';
  out << "# command: " << command << '\n';
  for (const auto& [k, v] : entries) out << "# " << k << ": " << v << '\n';
}

namespace {

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

void write_sweep_csv(std::ostream& out, const RunManifest& manifest,
                     const std::vector<SweepRecord>& records) {
  manifest.write(out);
  std::size_t failures = 0;
  for (const auto& r : records) failures += r.error.has_value();
  out << "# failures: " << failures << '\n';
  for (const auto& r : records) {
    if (r.error) out << "# failure at lambda0=" << format_double(r.lambda0) << ": " << *r.error << '\n';
  }
  out << "lambda0,f_naive,f_parity,e0_even,e0_odd,gap,gs_parity\n";
  for (const auto& r : records) {
    out << format_double(r.lambda0) << ',' << optional_field(r.f_naive) << ','
        << optional_field(r.f_parity) << ',' << format_double(r.e0_even) << ','
        << format_double(r.e0_odd) << ',' << format_double(r.gap) << ','
        << (r.error ? "" : to_string(r.gs_parity)) << '\n';
  }
}

void write_energy_csv(std::ostream& out, const RunManifest& manifest,
                      const std::vector<EnergyPoint>& points) {
  manifest.write(out);
  std::size_t failures = 0;
  for (const auto& p : points) failures += p.error.has_value();
  out << "# failures: " << failures << '\n';
  for (const auto& p : points) {
    if (p.error) out << "# failure at lambda0=" << format_double(p.lambda0) << ": " << *p.error << '\n';
  }
  out << "lambda0,e0_even,e0_odd\n";
  for (const auto& p : points) {
    out << format_double(p.lambda0) << ',' << format_double(p.e0_even) << ','
        << format_double(p.e0_odd) << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const RunManifest& manifest,
                        const std::vector<double>& values) {
  manifest.write(out);
  out << "index,energy\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_double(values[i]) << '\n';
}

}  // namespace dicke::cli
