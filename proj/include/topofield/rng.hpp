#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace topofield {

/// Philox4x32-10 block function. Counter-based: the output depends only on
/// (counter, key), so any element of a stream can be computed in isolation.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

inline constexpr const char* rng_algorithm_id = "philox4x32-10/splitmix64-path";

/// A value-like handle on one random stream, addressed by a master seed and
/// a path of integers (replicate id, purpose tag, ...).
///
/// The key is derived from the master seed; the path is hashed into the two
/// upper counter words and the element index occupies the two lower words.
/// Streams with different paths therefore never share Philox inputs.
class RngStream {
public:
    RngStream() = default;
    RngStream(std::uint64_t master_seed, std::vector<std::uint64_t> path);

    std::uint64_t master_seed() const noexcept { return seed_; }
    const std::vector<std::uint64_t>& path() const noexcept { return path_; }

    RngStream child(std::uint64_t element) const;

    /// Raw 128-bit block number `block` of this stream.
    std::array<std::uint32_t, 4> block(std::uint64_t block) const;

    /// Uniform on (0,1) with 53 random bits; element index `i`.
    double uniform(std::uint64_t i) const;
    /// Standard normal; element index `i` (Box-Muller on block i/2).
    double normal(std::uint64_t i) const;
    std::uint64_t bits(std::uint64_t i) const;

    /// Fills normals for indices [first, first + out.size()).
    void fill_normal(std::uint64_t first, std::span<double> out) const;

    bool operator==(const RngStream& other) const = default;

private:
    std::uint64_t seed_ = 0;
    std::vector<std::uint64_t> path_;
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t path_hash_ = 0;
};

RngStream make_stream(std::uint64_t master_seed, std::vector<std::uint64_t> path);

/// Sequential cursor over a stream for algorithms that consume a
/// data-dependent number of draws (Poisson counts, rejection loops).
class RngCursor {
public:
    explicit RngCursor(RngStream stream) : stream_(std::move(stream)) {}

    double uniform() { return stream_.uniform(next_++); }
    double normal() { return stream_.normal(2 * (next_++)); }
    std::uint64_t bits() { return stream_.bits(next_++); }
    std::uint64_t position() const noexcept { return next_; }

private:
    RngStream stream_;
    std::uint64_t next_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Purpose tags used as the second path element of replicate streams.
namespace stream_tag {
inline constexpr std::uint64_t noise = 1;
inline constexpr std::uint64_t points = 2;
inline constexpr std::uint64_t marks = 3;
inline constexpr std::uint64_t resample = 4;
inline constexpr std::uint64_t conditioning = 5;
inline constexpr std::uint64_t inner = 6;
}  // namespace stream_tag

}  // namespace topofield
