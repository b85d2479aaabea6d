// Minimal CSV reading/writing. Numbers are printed with 17 significant digits
// so re-reading reproduces values bit-exactly and reruns diff clean.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace emopt {

std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& columns);

  void field(const std::string& v);
  void field(double v);
  void field(long long v);
  void field(int v) { field(static_cast<long long>(v)); }
  void end_row();

 private:
  std::ostream& out_;
  bool row_open_ = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static CsvTable read_file(const std::string& path);

  int column(const std::string& name) const;  // -1 when absent
  int require_column(const std::string& name) const;
  double number(std::size_t row, int col) const;
};

}  // namespace emopt
