#pragma once

#include <cstdint>
#include <random>

namespace rwr {

/// splitmix64 finalizer; used to derive independent engine seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based substream address. The engine for a stream is a pure function
/// of (master_seed, point_index, counter), so results do not depend on which
/// worker evaluates which block or in which order.
struct SampleStream {
    std::uint64_t master_seed = 0;
    std::uint64_t point_index = 0;
    std::uint64_t counter = 0;

    static SampleStream for_point(std::uint64_t master_seed, std::uint64_t point_index) {
        return {master_seed, point_index, 0};
    }
    SampleStream with_counter(std::uint64_t c) const { return {master_seed, point_index, c}; }

    std::uint64_t engine_seed() const noexcept;
    std::mt19937_64 engine() const { return std::mt19937_64(engine_seed()); }
};

/// Reserved counter values. Monte-Carlo sample blocks use counters 0, 1, 2, ...
/// so anything else drawn for the same point lives far above that range.
namespace stream_tag {
inline constexpr std::uint64_t kSearch = 0x5EA4C4ULL << 32;
inline constexpr std::uint64_t kSplit = 0x5B117ULL << 32;
inline constexpr std::uint64_t kTree = 0x7EEULL << 32;
} // namespace stream_tag

} // namespace rwr
