#pragma once

#include <string>

namespace gcpc_cli {

/// Hex-encoded SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace gcpc_cli
