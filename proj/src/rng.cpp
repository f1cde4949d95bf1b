#include "polycop/rng.hpp"

#include "polycop/normal.hpp"

namespace polycop {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::uint32_t k0 = key[0];
    std::uint32_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return c;
}

double uniform_draw(const RngStream& stream, std::uint64_t index) {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(stream.stream_id),
        static_cast<std::uint32_t>(stream.stream_id >> 32),
        static_cast<std::uint32_t>(index),
        static_cast<std::uint32_t>(index >> 32)};
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(stream.master_seed),
        static_cast<std::uint32_t>(stream.master_seed >> 32)};
    const auto out = philox4x32(counter, key);
    const std::uint64_t mantissa = ((static_cast<std::uint64_t>(out[0]) << 32) | out[1]) >> 11;
    // (mantissa + 0.5) / 2^53 lies strictly inside (0,1).
    return (static_cast<double>(mantissa) + 0.5) * 0x1.0p-53;
}

double normal_draw(const RngStream& stream, std::uint64_t index) {
    return std_normal_quantile(uniform_draw(stream, index));
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
        static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto out = philox4x32(counter, key);
    return (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
}

}  // namespace polycop
