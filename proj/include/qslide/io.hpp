#pragma once

#include "qslide/types.hpp"

#include <string>

namespace qslide {

// Shortest decimal string that round-trips to the same double ("0.48", not
// "0.48000000000000001"). Keeps CSV and JSON output byte-deterministic.
std::string format_double(Real v);

// Writes via a temporary file in the same directory and renames into place,
// so readers never observe a partially written file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace qslide
