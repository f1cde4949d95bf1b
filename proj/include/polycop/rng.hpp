#pragma once

#include <array>
#include <cstdint>

namespace polycop {

// Identifies one reproducible stream of draws. Identical (master_seed,
// stream_id) pairs yield identical sequences on every platform: draws are
// produced by a counter-based generator, so there is no hidden state and a
// stream can be consumed from any number of threads in any order.
struct RngStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

// Philox 4x32-10 block cipher. counter/key in, four 32-bit words out.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

// Stateless counter-based uniform draw: the index-th variate on the stream,
// strictly inside (0,1) with 53 random mantissa bits.
double uniform_draw(const RngStream& stream, std::uint64_t index);

// Standard normal variate by inverse CDF of uniform_draw.
double normal_draw(const RngStream& stream, std::uint64_t index);

// Collision-resistant derivation of child stream ids / seeds from a parent
// context (used for bootstrap replicates, row blocks, purpose salts).
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Purpose salts keep independent parts of a run on disjoint streams even
// when they share one master seed.
namespace stream_purpose {
inline constexpr std::uint64_t kDgp = 0x01;
inline constexpr std::uint64_t kGhk = 0x02;
inline constexpr std::uint64_t kBootstrap = 0x03;
inline constexpr std::uint64_t kTestMc = 0x04;
inline constexpr std::uint64_t kOracle = 0x05;
}  // namespace stream_purpose

}  // namespace polycop
