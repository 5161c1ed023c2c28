#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace abc {

// Shortest round-trip decimal form of a double; locale independent.
std::string fmt_double(double v);
std::vector<std::string> split_csv_line(const std::string& line);
// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& data);

} // namespace abc
