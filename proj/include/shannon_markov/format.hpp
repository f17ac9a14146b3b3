#pragma once

#include <cstdio>
#include <string>

namespace shannon_markov {

/// Shortest round-trippable decimal for a double, identical on every run.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace shannon_markov
