#pragma once

// Minimal CSV emission: header row, comma separator, LF line endings, numbers
// with 15 significant digits (round-trip stable for the values we write).

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "lpai/spectrum.hpp"
#include "lpai/wavepacket.hpp"

namespace lpai::csv {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Shortest of fixed/scientific at 15 significant digits; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_number(double x);

class Table {
 public:
  explicit Table(std::vector<std::string> header);

  /// Throws DomainError when the row width differs from the header.
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  void write(std::ostream& os) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

/// Columns v, value.
Table density_table(const wavepacket::Density& d);

/// Columns detuning_hz, intensity.
Table spectrum_table(const spectrum::SpectrumProfile& p);

}  // namespace lpai::csv
