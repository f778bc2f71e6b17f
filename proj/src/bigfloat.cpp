#include "stripgram/bigfloat.hpp"

#include <cstdio>
#include <vector>

namespace stripgram {

std::string BigFloat::to_decimal(int digits) const {
    if (digits < 1) digits = 1;
    // %Re prints one digit before the point, `digits - 1` after.
    int needed = mpfr_snprintf(nullptr, 0, "%.*Re", digits - 1, x_);
    std::vector<char> buf(static_cast<size_t>(needed) + 1);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, x_);
    return std::string(buf.data());
}

}  // namespace stripgram
