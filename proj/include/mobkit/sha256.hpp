#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mobkit {

// FIPS 180-4 SHA-256, hex digest. Used for output-determinism checks.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::string& path);

}  // namespace mobkit
