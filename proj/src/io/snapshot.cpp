#include <bit>
#include <cstring>
#include <fstream>

#include "shnw/errors.hpp"
#include "shnw/io.hpp"

namespace shnw {
namespace {

constexpr char kMagic[4] = {'S', 'H', 'N', 'W'};
constexpr std::uint8_t kVersion = 1;

template <class T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw FormatError("snapshot truncated");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_field(std::ostream& out, const Field& f) {
  const Field p = to_physical(f);
  const SpectralGrid& g = p.grid();
  out.write(kMagic, 4);
  put<std::uint8_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  for (int i = 0; i < g.dim(); ++i) put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points()));
  put<double>(out, g.length());
  put<std::uint8_t>(out, p.is_real() ? 0 : 1);
  for (const cplx& z : p.values()) {
    put<double>(out, z.real());
    if (!p.is_real()) put<double>(out, z.imag());
  }
  if (!out) throw FormatError("snapshot write failed");
}

Field read_field(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw FormatError("bad snapshot magic");
  const auto version = get<std::uint8_t>(in);
  if (version != kVersion) throw FormatError("unsupported snapshot version " + std::to_string(version));
  const auto d = get<std::uint32_t>(in);
  if (d < 1 || d > static_cast<std::uint32_t>(kMaxDim)) throw FormatError("snapshot dimension out of range");
  std::uint32_t m = 0;
  for (std::uint32_t i = 0; i < d; ++i) {
    const auto mi = get<std::uint32_t>(in);
    if (i > 0 && mi != m) throw FormatError("snapshot grid is not cubic");
    m = mi;
  }
  const auto length = get<double>(in);
  const auto dtype = get<std::uint8_t>(in);
  if (dtype > 1) throw FormatError("unknown snapshot dtype");
  SpectralGrid grid = [&] {
    try {
      return SpectralGrid(static_cast<int>(d), static_cast<int>(m), length);
    } catch (const ConfigError& e) {
      throw FormatError(std::string("snapshot grid invalid: ") + e.what());
    }
  }();
  CVector values(grid.size());
  for (auto& z : values) {
    const double re = get<double>(in);
    const double im = dtype == 1 ? get<double>(in) : 0.0;
    z = cplx(re, im);
  }
  return Field(grid, Representation::physical, std::move(values), dtype == 0);
}

void write_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string());
  write_field(out, f);
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_field(in);
}

void write_state(const std::filesystem::path& path, const WaveState& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string());
  write_field(out, s.u);
  write_field(out, s.ut);
}

WaveState read_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  Field u = read_field(in);
  Field ut = read_field(in);
  if (!(u.grid() == ut.grid())) throw FormatError("u and ut grids differ in " + path.string());
  return WaveState{std::move(u), std::move(ut), 0.0};
}

}  // namespace shnw
