#pragma once
// Counter-based random numbers (Philox4x32-10, Salmon et al., SC'11).
//
// Every draw is a pure function of (seed, round, stream, position), so reward
// draws do not depend on how many numbers an agent or schedule consumed
// before them.

#include <array>
#include <cstdint>
#include <limits>

namespace rcb {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

enum class Stream : std::uint32_t {
    reward = 0,
    context = 1,
    concentration = 2,
    fixture = 3,
};

// 64-bit generator over one (seed, round, stream) cell; satisfies
// UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t round, Stream stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;
    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

private:
    PhiloxKey key_;
    PhiloxCounter base_;
    std::uint32_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
};

}  // namespace rcb
