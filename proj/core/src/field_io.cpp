#include "blz/field_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "blz/config.hpp"

namespace blz {

static_assert(std::endian::native == std::endian::little,
              "field payloads are written little-endian without byte swapping");

namespace {
constexpr const char* kMagic = "BLZFIELD";
constexpr int kVersion = 1;
}  // namespace

void write_field(const std::string& path, const Distribution& f,
                 const std::string& label) {
  if (f.grid.size() == 0 || f.values.size() != f.grid.size())
    throw FieldIoError("write_field: field and grid sizes disagree");
  if (label.find('\n') != std::string::npos)
    throw FieldIoError("write_field: label must be a single line");
  for (double x : f.values)
    if (!std::isfinite(x)) throw FieldIoError("write_field: non-finite value");
  const std::size_t bytes = f.values.size() * sizeof(double);
  const std::uint64_t checksum = fnv1a(f.values.data(), bytes);
  std::ostringstream header;
  header.precision(17);
  header << kMagic << " " << kVersion << "\n"
         << "n_points " << f.grid.n() << "\n"
         << "half_width " << f.grid.half_width() << "\n"
         << "endian little\n"
         << "label " << label << "\n"
         << "nonnegative " << (f.nonnegative ? 1 : 0) << "\n"
         << "checksum " << std::hex << checksum << std::dec << "\n"
         << "payload_bytes " << bytes << "\n"
         << "END\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FieldIoError("write_field: cannot open " + path);
  out << header.str();
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(bytes));
  if (!out) throw FieldIoError("write_field: short write to " + path);
}

LoadedField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FieldIoError("read_field: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw FieldIoError(path + ": empty file");
  {
    std::istringstream first(line);
    std::string magic;
    int version = 0;
    first >> magic >> version;
    if (magic != kMagic) throw FieldIoError(path + ": not a field file");
    if (version != kVersion)
      throw FieldIoError(path + ": unsupported format version " +
                         std::to_string(version));
  }
  int n_points = 0, nonneg = 0;
  double half_width = 0.0;
  std::uint64_t checksum = 0;
  std::size_t payload_bytes = 0;
  std::string label, endian;
  bool ended = false;
  while (std::getline(in, line)) {
    if (line == "END") {
      ended = true;
      break;
    }
    const auto sp = line.find(' ');
    if (sp == std::string::npos)
      throw FieldIoError(path + ": malformed header line '" + line + "'");
    const std::string key = line.substr(0, sp);
    const std::string val = line.substr(sp + 1);
    std::istringstream vs(val);
    if (key == "n_points") vs >> n_points;
    else if (key == "half_width") vs >> half_width;
    else if (key == "endian") endian = val;
    else if (key == "label") label = val;
    else if (key == "nonnegative") vs >> nonneg;
    else if (key == "checksum") vs >> std::hex >> checksum;
    else if (key == "payload_bytes") vs >> payload_bytes;
    else throw FieldIoError(path + ": unknown header key '" + key + "'");
    if (vs.fail()) throw FieldIoError(path + ": bad value for '" + key + "'");
  }
  if (!ended) throw FieldIoError(path + ": header not terminated");
  if (endian != "little")
    throw FieldIoError(path + ": unsupported byte order '" + endian + "'");
  VelocityGrid grid;
  try {
    grid = make_grid(n_points, half_width);
  } catch (const std::exception& e) {
    throw FieldIoError(path + ": bad grid spec: " + e.what());
  }
  if (payload_bytes != grid.size() * sizeof(double))
    throw FieldIoError(path + ": payload size disagrees with grid spec");
  LoadedField out;
  out.f = Distribution(grid);
  out.f.nonnegative = nonneg != 0;
  out.label = label;
  in.read(reinterpret_cast<char*>(out.f.values.data()),
          static_cast<std::streamsize>(payload_bytes));
  if (static_cast<std::size_t>(in.gcount()) != payload_bytes)
    throw FieldIoError(path + ": truncated payload");
  if (fnv1a(out.f.values.data(), payload_bytes) != checksum)
    throw FieldIoError(path + ": checksum mismatch (corrupt payload)");
  return out;
}

}  // namespace blz
