#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace turingrad::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// 17 significant digits, "nan"/"inf"/"-inf" for non-finite values.
std::string format_number(double x);

class CsvWriter {
public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);

private:
  std::ostream& out_;
  std::size_t width_;
};

// ISO-8601 UTC; honours SOURCE_DATE_EPOCH for reproducible manifests.
std::string utc_timestamp();

nlohmann::json manifest(const std::string& command, const nlohmann::json& options,
                        const std::string& system_hash);

} // namespace turingrad::cli
