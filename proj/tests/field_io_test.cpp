#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"

#include "blz/families.hpp"
#include "blz/field_io.hpp"

using namespace blz;

namespace {

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path("/tmp/blz_io_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("field files round-trip bit-exactly") {
  const auto g = make_grid(8, 4.0);
  Distribution f(g);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (auto& x : f.values) x = uni(rng);

  TempPath tmp("roundtrip.fld");
  write_field(tmp.path, f, "random test field");
  const auto loaded = read_field(tmp.path);
  CHECK(loaded.label == "random test field");
  CHECK(loaded.f.grid.n() == 8);
  CHECK(loaded.f.grid.half_width() == doctest::Approx(4.0));
  for (std::size_t i = 0; i < f.values.size(); ++i)
    CHECK(loaded.f.values[i] == f.values[i]);
}

TEST_CASE("identical fields produce identical files") {
  const auto g = make_grid(8, 4.0);
  const auto f = make_maxwellian(g);
  TempPath a("det_a.fld"), b("det_b.fld");
  write_field(a.path, f, "equilibrium");
  write_field(b.path, f, "equilibrium");
  std::ifstream fa(a.path, std::ios::binary), fb(b.path, std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(fa)),
                       std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(fb)),
                       std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(!sa.empty());
}

TEST_CASE("corrupted payloads are rejected by the checksum") {
  const auto g = make_grid(8, 4.0);
  const auto f = make_maxwellian(g);
  TempPath tmp("corrupt.fld");
  write_field(tmp.path, f, "victim");
  {
    std::fstream io(tmp.path, std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(-9, std::ios::end);  // flip a byte inside the payload
    char c;
    io.seekg(-9, std::ios::end);
    io.get(c);
    io.seekp(-9, std::ios::end);
    io.put(static_cast<char>(c ^ 0x40));
  }
  CHECK_THROWS_AS(read_field(tmp.path), FieldIoError);
}

TEST_CASE("non-field files and missing files are io errors") {
  CHECK_THROWS_AS(read_field("/tmp/blz_io_does_not_exist.fld"), FieldIoError);
  TempPath tmp("not_a_field.fld");
  std::ofstream(tmp.path) << "just some text\n";
  CHECK_THROWS_AS(read_field(tmp.path), FieldIoError);
}
