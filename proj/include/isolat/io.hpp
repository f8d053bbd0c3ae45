#pragma once

// Small I/O helpers shared by the library and the command line tool:
// atomic file writes, deterministic number formatting, angle parsing.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace isolat {

// Writes bytes to path via a temporary file in the same directory followed by
// a rename, so readers never observe a partial file. Throws std::runtime_error
// naming the path on failure.
void atomic_write_file(const std::string& path, std::string_view bytes);

// Shortest round-trip decimal representation ("%.17g" trimmed via %g logic);
// stable across runs on the same platform.
std::string format_double(double x);

// Parses an angle that is either a plain floating point number or a fraction
// of pi: "pi", "pi/4", "2pi/5", "-3pi/7", "0.5pi". Returns nullopt on
// malformed input.
std::optional<double> parse_angle(std::string_view text);

// Parses "p,q,r" into a pythagorean triple candidate.
std::optional<std::array<std::int64_t, 3>> parse_triple(std::string_view text);

}  // namespace isolat
