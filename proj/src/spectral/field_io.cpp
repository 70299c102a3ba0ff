#include "phi3/spectral/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "phi3/errors.hpp"

namespace phi3::spectral {

static_assert(std::endian::native == std::endian::little, "field container assumes a little-endian host");

namespace {

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw FormatError("field container: truncated");
  return v;
}

}  // namespace

void write_field(std::ostream& out, const Field& field) {
  const auto& lat = field.lattice();
  out.write("PHI3", 4);
  put<std::uint32_t>(out, kFieldFormatVersion);
  put<double>(out, lat.L());
  put<double>(out, lat.N());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(lat.M()));
  put<std::uint64_t>(out, lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    put<std::int32_t>(out, lat.mode(i).n1);
    put<std::int32_t>(out, lat.mode(i).n2);
    put<double>(out, field[i].real());
    put<double>(out, field[i].imag());
  }
  if (!out) throw FormatError("field container: write failed");
}

Field read_field(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "PHI3", 4) != 0) {
    throw FormatError("field container: bad magic");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kFieldFormatVersion) throw FormatError("field container: unsupported version");
  const double L = get<double>(in);
  const double N = get<double>(in);
  const auto M = get<std::uint32_t>(in);
  const auto count = get<std::uint64_t>(in);
  auto lattice = FourierLattice::build(L, N, static_cast<int>(M));
  if (count != lattice->size()) throw FormatError("field container: mode count does not match lattice");
  std::vector<Complex> c(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto n1 = get<std::int32_t>(in);
    const auto n2 = get<std::int32_t>(in);
    const double re = get<double>(in);
    const double im = get<double>(in);
    if (lattice->mode(i).n1 != n1 || lattice->mode(i).n2 != n2) {
      throw FormatError("field container: modes out of lattice order");
    }
    c[i] = {re, im};
  }
  return Field(lattice, std::move(c));
}

void save_fields(const std::filesystem::path& path, const std::vector<Field>& fields) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  for (const auto& f : fields) write_field(out, f);
}

std::vector<Field> load_fields(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<Field> out;
  while (in.peek() != std::char_traits<char>::eof()) out.push_back(read_field(in));
  return out;
}

}  // namespace phi3::spectral
