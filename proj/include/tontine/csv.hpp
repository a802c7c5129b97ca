#pragma once

#include <string>
#include <vector>

namespace tontine::csv {

// RFC-4180 field quoting; '.' decimal separator comes from the C locale
std::string escape(const std::string& field);

// full precision, 17 significant digits
std::string full(double v);

// fixed decimals, for table-facsimile columns
std::string fixed(double v, int decimals);

class Table {
public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace tontine::csv
