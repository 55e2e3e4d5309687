#pragma once

#include <string>

namespace dioph {

// Hex digest of a byte string (used for artifact content hashes in run
// records).
std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);

} // namespace dioph
