#include "tfz/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace tfz {

namespace {

constexpr char kMagic[4] = {'T', 'F', 'Z', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
  // Little-endian hosts only; asserted at build time by the payload format.
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw std::runtime_error("field container: truncated file");
  return v;
}

}  // namespace

std::string float_repr(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field(const SampledField& f, const std::string& path,
                 const std::string& provenance) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.dim()));
  for (int k = 0; k < f.dim(); ++k) {
    const Axis& ax = f.axis(k);
    put<double>(os, ax.origin);
    put<double>(os, ax.step);
    put<std::uint64_t>(os, ax.count);
    put<std::uint8_t>(os, ax.kind == AxisKind::torus ? 1 : 0);
  }
  put<std::uint32_t>(os, static_cast<std::uint32_t>(provenance.size()));
  os.write(provenance.data(), static_cast<std::streamsize>(provenance.size()));
  for (const auto& v : f.values()) {
    put<float>(os, static_cast<float>(v.real()));
    put<float>(os, static_cast<float>(v.imag()));
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

SampledField read_field(const std::string& path, std::string* provenance) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a field container: " + path);
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) throw std::runtime_error("unsupported container version");
  const auto dim = get<std::uint32_t>(is);
  std::vector<Axis> axes;
  std::size_t total = 1;
  for (std::uint32_t k = 0; k < dim; ++k) {
    Axis ax;
    ax.origin = get<double>(is);
    ax.step = get<double>(is);
    ax.count = static_cast<std::size_t>(get<std::uint64_t>(is));
    ax.kind = get<std::uint8_t>(is) ? AxisKind::torus : AxisKind::line;
    total *= ax.count;
    axes.push_back(ax);
  }
  const auto plen = get<std::uint32_t>(is);
  std::string prov(plen, '\0');
  is.read(prov.data(), plen);
  if (provenance) *provenance = prov;
  std::vector<cplx> values(total);
  for (auto& v : values) {
    const float re = get<float>(is);
    const float im = get<float>(is);
    v = cplx(re, im);
  }
  return SampledField(std::move(axes), std::move(values));
}

void write_field_csv(const SampledField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // binary: keep \n on every platform
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  for (int k = 0; k < f.dim(); ++k) os << "i" << k << ",";
  for (int k = 0; k < f.dim(); ++k) os << "x" << k << ",";
  os << "re,im\n";
  std::vector<std::size_t> idx(static_cast<std::size_t>(f.dim()), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::size_t rem = i;
    for (int k = f.dim() - 1; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = rem % f.axis(k).count;
      rem /= f.axis(k).count;
    }
    for (int k = 0; k < f.dim(); ++k) os << idx[static_cast<std::size_t>(k)] << ",";
    for (int k = 0; k < f.dim(); ++k)
      os << float_repr(f.axis(k).coord(idx[static_cast<std::size_t>(k)])) << ",";
    os << float_repr(f.values()[i].real()) << "," << float_repr(f.values()[i].imag())
       << "\n";
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace tfz
