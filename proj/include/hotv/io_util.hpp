#pragma once

// Small I/O helpers shared by the CSV and JSON emitters: deterministic double
// formatting and atomic whole-file writes (temp file + rename, same
// directory, so a crash never leaves a partially written output).

#include <string>

namespace hotv {

// Fixed 17-significant-digit decimal rendering ("%.17g"): enough digits to
// round-trip any double, and byte-identical across runs.
std::string format_double17(double v);

std::string read_text_file(const std::string& path);
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace hotv
