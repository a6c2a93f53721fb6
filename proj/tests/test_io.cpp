#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tfz/fields.hpp"
#include "tfz/io.hpp"

namespace fs = std::filesystem;
using tfz::cplx;
using tfz::SampledField;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tfz-io-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("float_repr round-trips doubles exactly") {
  for (double v : {0.0, 1.0, -1.5, 0.1, 3.141592653589793, 1e-300, -2.2250738585072014e-308}) {
    CHECK(std::stod(tfz::float_repr(v)) == v);
  }
  CHECK(tfz::float_repr(1.0) == "1");
}

TEST_CASE("binary field container round trip") {
  TempDir tmp;
  const std::vector<double> lo{-2.0, 0.0}, hi{2.0, 1.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) { return cplx(x[0], x[1] * x[1]); }, lo, hi, 0.25);
  const std::string path = (tmp.path / "f.tfzf").string();
  tfz::write_field(f, path, "unit-test");
  std::string prov;
  const SampledField g = tfz::read_field(path, &prov);
  CHECK(prov == "unit-test");
  REQUIRE(g.dim() == 2);
  CHECK(g.axis(0).count == f.axis(0).count);
  CHECK(g.axis(1).step == f.axis(1).step);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    worst = std::max(worst, std::abs(f.values()[i] - g.values()[i]));
  CHECK(worst < 1e-6);  // payload is stored in single precision
}

TEST_CASE("CSV export is deterministic and carries the header") {
  TempDir tmp;
  const std::vector<double> lo{0.0}, hi{1.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) { return cplx(std::sin(x[0]), 0.1); }, lo, hi,
      0.25);
  const std::string a = (tmp.path / "a.csv").string();
  const std::string b = (tmp.path / "b.csv").string();
  tfz::write_field_csv(f, a);
  tfz::write_field_csv(f, b);
  const std::string body = slurp(a);
  CHECK(body == slurp(b));
  CHECK(body.substr(0, body.find('\n')).find("re") != std::string::npos);
  // One header line plus one row per sample.
  std::size_t lines = 0;
  for (char c : body)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + f.size());
}

TEST_CASE("reading a corrupt container fails loudly") {
  TempDir tmp;
  const std::string path = (tmp.path / "bad.tfzf").string();
  std::ofstream(path, std::ios::binary) << "not a field container";
  CHECK_THROWS(tfz::read_field(path));
}
