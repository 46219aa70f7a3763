#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace levsim {

// Shortest round-trip representation, locale independent.
std::string format_double(double value);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();

  void row(const std::vector<double>& values);
  // Mixed rows (e.g. trailing enum label); cells are written verbatim.
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
};

}  // namespace levsim
