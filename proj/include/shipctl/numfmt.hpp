#pragma once

#include <string>

namespace shipctl {

// Shortest decimal that parses back to the same double (std::to_chars).
std::string format_double(double v);
void append_double(std::string& out, double v);

}  // namespace shipctl
