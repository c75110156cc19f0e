#include "misalign/rng.hpp"

#include <stdexcept>

namespace misalign {

namespace {
__extension__ using uint128 = unsigned __int128;
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound)
{
    if (bound == 0) throw std::invalid_argument("uniform_index bound must be positive");
    uint128 product = static_cast<uint128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<uint128>(next_u64()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace misalign
