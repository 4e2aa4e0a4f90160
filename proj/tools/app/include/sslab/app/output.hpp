#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace sslab::app {

std::string sha256_hex(std::string_view data);
/// Throws UsageError when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`, so the final path
/// either holds the complete content or is untouched.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// 12 significant digits; the CSV precision.
std::string csv_number(double x);

/// Rows of a CSV file with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void row(std::initializer_list<std::string> cells);
  void row(const std::vector<std::string>& cells);
  [[nodiscard]] std::string str() const { return text_; }
  [[nodiscard]] std::size_t rows() const { return rows_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

}  // namespace sslab::app
