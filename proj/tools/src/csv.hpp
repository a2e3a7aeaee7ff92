#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aqec::cli {

// Column-ordered CSV assembly with bit-stable numeric formatting: 12
// significant digits, '.' separator, LF line endings. Every row must fill
// the same columns in the same order; non-finite values are rejected so
// failures surface as exit codes instead of NaN cells.
class CsvTable {
 public:
  class Row {
   public:
    Row(CsvTable& table) : table_(table) {}
    Row& col(const std::string& name, double value);
    Row& col(const std::string& name, long long value);
    Row& col(const std::string& name, std::uint64_t value);
    Row& col(const std::string& name, int value) {
      return col(name, (long long)value);
    }
    Row& col(const std::string& name, bool value) {
      return col(name, (long long)(value ? 1 : 0));
    }
    Row& col(const std::string& name, const std::string& value);
    void done();

   private:
    CsvTable& table_;
    std::vector<std::string> names_;
    std::vector<std::string> cells_;
  };

  Row row() { return Row(*this); }
  std::string text() const;

 private:
  friend class Row;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_number(double value);

}  // namespace aqec::cli
