#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "phi3/spectral/field.hpp"

namespace phi3::spectral {

// Binary container, little-endian:
//   "PHI3" | u32 version | f64 L | f64 N | u32 M | u64 count
//   count x (i32 n1 | i32 n2 | f64 re | f64 im), lattice order.
// Several fields may be stored back to back in one file.

inline constexpr std::uint32_t kFieldFormatVersion = 1;

void write_field(std::ostream& out, const Field& field);
Field read_field(std::istream& in);

void save_fields(const std::filesystem::path& path, const std::vector<Field>& fields);
std::vector<Field> load_fields(const std::filesystem::path& path);

}  // namespace phi3::spectral
