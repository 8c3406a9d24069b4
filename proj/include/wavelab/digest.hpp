#pragma once

#include <cstdint>
#include <string>

namespace wavelab {

// FNV-1a 64-bit; identification fingerprints only, not cryptographic.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex_digest(const std::string& s);

}
