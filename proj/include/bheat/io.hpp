#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace bheat {

/// Doubles rendered with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// Minimal CSV builder: comma separator, '.' decimal point, %.17g numbers.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  void add_row_mixed(const std::vector<std::string>& values);
  const std::string& content() const { return buf_; }

 private:
  std::string buf_;
  std::size_t columns_;
};

/// Write-then-rename so partial files are never observed.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace bheat
