#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <gfalm/flow.hpp>
#include <gfalm/solver.hpp>

namespace gfalm::app {

/// "%.17g"; round-trips every double.
std::string format_double(double v);

/// Append-only CSV writer. Every row is flushed, so an interrupted run leaves
/// a parseable prefix. Empty optionals become empty cells.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream os_;
  std::size_t columns_;
};

std::string cell(double v);
std::string cell(std::int64_t v);
std::string cell(const std::optional<double>& v);

/// n, Q, residual_linf, residual_hm1, lp1_norm, err_h1, lojasiewicz_q
class IterationCsv {
 public:
  explicit IterationCsv(const std::filesystem::path& path);
  void write(const IterationRecord& r);

 private:
  CsvWriter csv_;
};

/// step, t, Q, drift, err_h1
class FlowCsv {
 public:
  explicit FlowCsv(const std::filesystem::path& path);
  void write(const FlowRecord& r);

 private:
  CsvWriter csv_;
};

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

}  // namespace gfalm::app
