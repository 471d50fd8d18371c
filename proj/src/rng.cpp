#include "rwrobust/rng.hpp"

namespace rwr {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t SampleStream::engine_seed() const noexcept {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ point_index);
    h = mix64(h ^ counter);
    return h;
}

} // namespace rwr
