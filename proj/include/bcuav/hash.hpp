#pragma once

#include <cstdint>
#include <string>

namespace bcuav {

// FNV-1a 64-bit; used for the output manifests (integrity fingerprints, not
// cryptographic).
inline uint64_t fnv1a64(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex_of_file(const std::string& path);

}  // namespace bcuav
