// SHA-256 (FIPS 180-4) digest for artifact manifests.  Self-contained so
// the toolkit has no crypto-library dependency; artifacts are hashed for
// reproducibility checks, not security.
#pragma once

#include <string>

namespace ml {

// Hex digest (64 lowercase hex characters) of the byte string.
std::string sha256_hex(const std::string& data);

}  // namespace ml
