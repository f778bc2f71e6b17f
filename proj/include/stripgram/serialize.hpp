#pragma once

#include <string>

#include "stripgram/bigfloat.hpp"

namespace stripgram {

inline constexpr int kFormatVersion = 1;

// Significant decimal digits that round-trip a P-bit significand:
// ceil(P log10 2) + 2.
int decimal_digits_for(mpfr_prec_t precision);

// Full-precision decimal rendering of a BigFloat (digit count derived from
// its precision); identical inputs always produce identical strings.
std::string to_decimal(const BigFloat& value);

// Shortest round-trip rendering of a double ("%.17g").
std::string to_decimal(double value);

// Write `content` to `path` atomically (temp file in the same directory,
// then rename).
void atomic_write(const std::string& path, const std::string& content);

}  // namespace stripgram
