#pragma once

#include <string>

#include "dioph/interval.hpp"

namespace dioph::testing {

// True when x lies inside the closed decimal bracket [lo, hi].
inline bool within(const Interval& x, const std::string& lo, const std::string& hi) {
    return x.valid() && parse_decimal(lo) <= x.lo && x.hi <= parse_decimal(hi);
}

inline mpq_class Q(const std::string& s) { return parse_rat(s); }

} // namespace dioph::testing
