#pragma once

#include <map>
#include <string>

namespace forge {

// Uncompressed zip archive with fixed timestamps, entries in key order.
std::string make_zip(const std::map<std::string, std::string>& files);

// Reads back an archive written by make_zip (stored entries only).
// Throws ParseError.
std::map<std::string, std::string> read_zip(const std::string& archive);

}  // namespace forge
