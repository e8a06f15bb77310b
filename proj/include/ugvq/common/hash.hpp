#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

namespace ugvq {

// FNV-1a, 64-bit. Used for cache fingerprints, backbone digests and the
// bag-of-hashed-words text encoder. Stable across platforms and runs,
// which std::hash does not guarantee.
class Fnv1a {
public:
    static constexpr std::uint64_t kOffset = 1469598103934665603ull;
    static constexpr std::uint64_t kPrime = 1099511628211ull;

    constexpr Fnv1a() = default;
    explicit constexpr Fnv1a(std::uint64_t state) : state_(state) {}

    Fnv1a& bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= kPrime;
        }
        return *this;
    }

    Fnv1a& str(std::string_view s) { return bytes(s.data(), s.size()); }

    Fnv1a& u64(std::uint64_t v) {
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
        return bytes(buf, 8);
    }

    Fnv1a& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }

    Fnv1a& f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        return u64(bits);
    }

    std::uint64_t value() const { return state_; }

private:
    std::uint64_t state_ = kOffset;
};

inline std::uint64_t fnv1a(std::string_view s) { return Fnv1a().str(s).value(); }

// Cheap stateless mixer for deriving per-trial / per-stream seeds from a
// master seed (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace ugvq
