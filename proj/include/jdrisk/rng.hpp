#pragma once

#include <array>
#include <cstdint>

namespace jdrisk {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

/// A reproducible random stream identified by (master seed, stream id).
///
/// Stream `i` always produces the same sequence regardless of which worker
/// thread consumes it: the stream id occupies the upper half of the Philox
/// counter and the draw index the lower half, so streams never overlap.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    std::uint32_t next_u32() noexcept;

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Standard normal (Box-Muller; the second variate of each pair is cached).
    double normal() noexcept;

    /// Exponential with the given rate (> 0).
    double exponential(double rate) noexcept;

    std::uint64_t blocks_consumed() const noexcept { return block_; }

private:
    void refill() noexcept;

    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int pos_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace jdrisk
