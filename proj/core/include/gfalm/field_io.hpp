#pragma once

#include <filesystem>
#include <iosfwd>

#include "gfalm/grid.hpp"

namespace gfalm {

// Field file layout: one JSON header line
//   {"dims":1,"M":[512],"x0":[-32.0],"L":[64.0],"dtype":"c128"}
// terminated by '\n', followed by size() little-endian float64 pairs (re, im)
// in axis-major order. Writing then reading reproduces every bit.

void write_field(std::ostream& out, const GridField& field);
GridField read_field(std::istream& in);

void write_field(const std::filesystem::path& path, const GridField& field);
/// Throws DomainError when the file is missing or malformed.
GridField read_field(const std::filesystem::path& path);

}  // namespace gfalm
