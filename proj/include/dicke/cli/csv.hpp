#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dicke/sweep.hpp"

namespace dicke::cli {

inline constexpr const char* kToolVersion = "dicke-ed 0.1.0";

// Shortest decimal that round-trips to the same double (at most 17 significant digits).
std::string format_double(double v);

// Self-describing header block: every line starts with "# ".
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value);
  void add(std::string key, double value);
  void add(std::string key, long long value);
  void write(std::ostream& out) const;
};

// Header: lambda0,f_naive,f_parity,e0_even,e0_odd,gap,gs_parity
void write_sweep_csv(std::ostream& out, const RunManifest& manifest,
                     const std::vector<SweepRecord>& records);
// Header: lambda0,e0_even,e0_odd
void write_energy_csv(std::ostream& out, const RunManifest& manifest,
                      const std::vector<EnergyPoint>& points);
// Header: index,energy
void write_spectrum_csv(std::ostream& out, const RunManifest& manifest,
                        const std::vector<double>& values);

}  // namespace dicke::cli
