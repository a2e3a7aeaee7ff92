#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "aqec/types.hpp"

namespace aqec::cli {

std::string format_number(double value) {
  if (!std::isfinite(value)) {
    throw PreconditionError("non-finite value in a result column",
                            value);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

CsvTable::Row& CsvTable::Row::col(const std::string& name, double value) {
  names_.push_back(name);
  cells_.push_back(format_number(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::col(const std::string& name, long long value) {
  names_.push_back(name);
  cells_.push_back(std::to_string(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::col(const std::string& name,
                                  std::uint64_t value) {
  names_.push_back(name);
  cells_.push_back(std::to_string(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::col(const std::string& name,
                                  const std::string& value) {
  if (value.find_first_of(",\n\"") != std::string::npos) {
    throw std::logic_error("CSV cell would need quoting: " + value);
  }
  names_.push_back(name);
  cells_.push_back(value);
  return *this;
}

void CsvTable::Row::done() {
  if (table_.header_.empty()) {
    table_.header_ = names_;
  } else if (table_.header_ != names_) {
    throw std::logic_error("CSV rows disagree on the column schema");
  }
  table_.rows_.push_back(std::move(cells_));
}

std::string CsvTable::text() const {
  std::string out;
  for (size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace aqec::cli
