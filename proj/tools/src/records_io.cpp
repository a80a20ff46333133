#include "gfalm_app/records_io.hpp"

#include <cstdio>
#include <stdexcept>

namespace gfalm::app {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(double v) { return format_double(v); }
std::string cell(std::int64_t v) { return std::to_string(v); }
std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : os_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!os_) throw std::runtime_error("cannot write " + path.string());
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("CsvWriter: wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << cells[i];
  }
  os_ << '\n';
  os_.flush();
}

IterationCsv::IterationCsv(const std::filesystem::path& path)
    : csv_(path, {"n", "Q", "residual_linf", "residual_hm1", "lp1_norm", "err_h1", "lojasiewicz_q"}) {}

void IterationCsv::write(const IterationRecord& r) {
  csv_.row({cell(r.n), cell(r.Q), cell(r.residual_linf), cell(r.residual_hm1), cell(r.lp1_norm),
            cell(r.err_h1), cell(r.lojasiewicz_q)});
}

FlowCsv::FlowCsv(const std::filesystem::path& path)
    : csv_(path, {"step", "t", "Q", "drift", "err_h1"}) {}

void FlowCsv::write(const FlowRecord& r) {
  csv_.row({cell(r.step), cell(r.t), cell(r.Q), cell(r.drift), cell(r.err_h1)});
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << doc.dump(2) << '\n';
  if (!os) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace gfalm::app
