#pragma once

#include <string>

#include "blz/grid.hpp"

namespace blz {

struct FieldIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Field container format: a short text header (magic, format version, grid
/// spec, endianness tag, semantic label, payload checksum) followed by the
/// row-major little-endian double payload.
void write_field(const std::string& path, const Distribution& f,
                 const std::string& label);

struct LoadedField {
  Distribution f;
  std::string label;
};

LoadedField read_field(const std::string& path);

}  // namespace blz
