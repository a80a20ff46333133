#include "gfalm/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "gfalm/error.hpp"

namespace gfalm {
namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
}

void put_double(std::ostream& out, double x) {
  const auto bits = to_little_endian(std::bit_cast<std::uint64_t>(x));
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.write(buf, 8);
}

double get_double(std::istream& in) {
  char buf[8];
  if (!in.read(buf, 8)) throw DomainError("read_field: truncated payload");
  std::uint64_t bits = 0;
  std::memcpy(&bits, buf, 8);
  return std::bit_cast<double>(to_little_endian(bits));
}

}  // namespace

void write_field(std::ostream& out, const GridField& field) {
  const GridSpec& g = field.grid();
  nlohmann::ordered_json header;
  header["dims"] = g.dims();
  header["M"] = nlohmann::json::array();
  header["x0"] = nlohmann::json::array();
  header["L"] = nlohmann::json::array();
  for (int d = 0; d < g.dims(); ++d) {
    header["M"].push_back(g.axis(d).points);
    header["x0"].push_back(g.axis(d).x0);
    header["L"].push_back(g.axis(d).length);
  }
  header["dtype"] = "c128";
  out << header.dump() << '\n';
  for (const auto& z : field.values()) {
    put_double(out, z.real());
    put_double(out, z.imag());
  }
  if (!out) throw DomainError("write_field: stream failure");
}

GridField read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("read_field: missing header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("read_field: malformed header: ") + e.what());
  }
  try {
    if (header.at("dtype").get<std::string>() != "c128")
      throw DomainError("read_field: unsupported dtype");
    const int dims = header.at("dims").get<int>();
    if (dims < 1 || dims > GridSpec::kMaxDims) throw DomainError("read_field: bad dims");
    std::vector<Axis> axes;
    for (int d = 0; d < dims; ++d) {
      Axis a;
      a.points = header.at("M").at(static_cast<std::size_t>(d)).get<int>();
      a.x0 = header.at("x0").at(static_cast<std::size_t>(d)).get<double>();
      a.length = header.at("L").at(static_cast<std::size_t>(d)).get<double>();
      axes.push_back(a);
    }
    const GridSpec grid{std::span<const Axis>(axes)};
    std::vector<Complex> values(grid.size());
    for (auto& z : values) {
      const double re = get_double(in);
      const double im = get_double(in);
      z = Complex(re, im);
    }
    return GridField(grid, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("read_field: malformed header: ") + e.what());
  }
}

void write_field(const std::filesystem::path& path, const GridField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("write_field: cannot open " + path.string());
  write_field(out, field);
}

GridField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("read_field: cannot open " + path.string());
  return read_field(in);
}

}  // namespace gfalm
