#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace vcage {

// SHA-256 of a byte string, lowercase hex. Used for dataset manifests and
// the CLI determinism checks.
std::string sha256_hex(std::string_view data);

// Standard base64 (RFC 4648, with padding); carries PGM snapshots over the
// critic wire protocol.
std::string base64_encode(std::string_view data);
std::string base64_decode(std::string_view text);  // throws ProtocolError

}  // namespace vcage
