#include "sslab/app/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <memory>
#include <sstream>

#include <unistd.h>

#include "sslab/errors.hpp"

namespace sslab::app {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += fmt::format(".tmp.{}.{}", ::getpid(), counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error(fmt::format("short write to '{}'", tmp.string()));
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  // Print -0 as 0 so that equal values give equal bytes.
  return fmt::format("{:.12g}", x == 0.0 ? 0.0 : x);
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) { row(header); rows_ = 0; }

void CsvTable::row(std::initializer_list<std::string> cells) { row(std::vector<std::string>(cells)); }

void CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
  ++rows_;
}

}  // namespace sslab::app
