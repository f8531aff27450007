#include "lpai/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "lpai/errors.hpp"

namespace lpai::csv {

namespace {

constexpr int kSignificantDigits = 15;

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render(const Cell& cell) {
  struct Visitor {
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return quote_if_needed(s); }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general,
                                 kSignificantDigits);
  return {buf.data(), res.ptr};
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) throw DomainError("csv", "row width does not match header");
  rows_.push_back(std::move(row));
}

void Table::write(std::ostream& os) const {
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << quote_if_needed(header_[i]);
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << render(row[i]);
    os << '\n';
  }
}

std::string Table::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

Table density_table(const wavepacket::Density& d) {
  Table t({"v", "value"});
  for (std::size_t i = 0; i < d.grid().size(); ++i) t.add_row({d.grid().at(i), d.values()[i]});
  return t;
}

Table spectrum_table(const spectrum::SpectrumProfile& p) {
  Table t({"detuning_hz", "intensity"});
  for (std::size_t i = 0; i < p.grid.size(); ++i) t.add_row({p.grid.at(i), p.intensity[i]});
  return t;
}

}  // namespace lpai::csv
