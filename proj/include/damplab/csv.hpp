#ifndef DAMPLAB_CSV_HPP
#define DAMPLAB_CSV_HPP

// CSV emission with 17 significant digits so reruns are byte-identical.

#include <fstream>
#include <string>
#include <vector>

#include "damplab/errors.hpp"

namespace damplab {

std::string csv_number(double x);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::string path_;
};

}  // namespace damplab

#endif
