#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slowlight/propagation.hpp"
#include "slowlight/spectroscopy.hpp"

namespace slowlight {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;  // throws if absent
  std::vector<double> column_values(std::string_view name) const;
};

// 17 significant digits: parses back to the identical double.
std::string format_double(double v);

std::string to_csv(const Table& t);
Table parse_csv(std::string_view text);

using KeyValues = std::vector<std::pair<std::string, double>>;
std::string to_csv(const KeyValues& kv);

// Writes via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

Table spectrum_table(const SusceptibilitySpectrum& s);
Table pulse_table(const Pulse& p);
Table sweep_table(const PumpSweep& s);

}  // namespace slowlight
