#pragma once

#include <string>

#include "tfz/fields.hpp"

namespace tfz {

// Round-trip decimal representation used by every CSV emitter, so reruns are
// byte-identical.
std::string float_repr(double v);

// Binary field container: magic + axis metadata + provenance string +
// little-endian complex64 payload.
void write_field(const SampledField& f, const std::string& path,
                 const std::string& provenance = "");
SampledField read_field(const std::string& path, std::string* provenance = nullptr);

// CSV export with one row per grid point: index columns, coordinate columns,
// then re/im.  UTF-8, comma separated, header row.
void write_field_csv(const SampledField& f, const std::string& path);

void write_text(const std::string& path, const std::string& content);

}  // namespace tfz
