#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace vper::tools {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchema = 1;
/// Default output directory when --out is not given.
inline constexpr const char* kOutDirEnv = "VPER_OUT_DIR";

/// Finite doubles as numbers; inf and nan as strings (JSON has neither).
Json num(double x);

/// Column table, emitted as CSV or as an array of row objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  Json to_json() const;
  std::string to_csv() const;
};

/// Envelope shared by every report. status: "pass", "fail" or "completed".
struct Report {
  std::string command;
  Json config = Json::object();
  std::uint64_t seed = 0;
  std::string status = "completed";
  Json results = Json::object();
  std::optional<Table> table;

  Json to_json() const;
};

/// Write-temp-then-rename; the temp file sits next to the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// --out if given, else $VPER_OUT_DIR/<command>.<ext>, else empty (stdout).
std::filesystem::path resolve_output(const std::string& out_flag, const std::string& command, const std::string& ext);

/// Serializes the report in the requested format and writes it. Throws
/// std::invalid_argument for csv on a report without a table.
void emit(const Report& report, const std::string& format, const std::string& out_flag);

}  // namespace vper::tools
