#include "topofield/rng.hpp"

#include <cmath>
#include <numbers>

namespace topofield {

namespace {

constexpr std::uint32_t philox_m0 = 0xD2511F53u;
constexpr std::uint32_t philox_m1 = 0xCD9E8D57u;
constexpr std::uint32_t philox_w0 = 0x9E3779B9u;
constexpr std::uint32_t philox_w1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// 53-bit uniform strictly inside (0, 1).
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(philox_m0, ctr[0], hi0, lo0);
        mulhilo(philox_m1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += philox_w0;
        key[1] += philox_w1;
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t master_seed, std::vector<std::uint64_t> path)
    : seed_(master_seed), path_(std::move(path)) {
    const std::uint64_t k = splitmix64(seed_ ^ 0x6A09E667F3BCC908ull);
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::uint64_t h = splitmix64(0xBB67AE8584CAA73Bull + path_.size());
    for (std::size_t i = 0; i < path_.size(); ++i)
        h = splitmix64(h ^ splitmix64(path_[i] + 0x9E3779B97F4A7C15ull * (i + 1)));
    path_hash_ = h;
}

RngStream make_stream(std::uint64_t master_seed, std::vector<std::uint64_t> path) {
    return RngStream(master_seed, std::move(path));
}

RngStream RngStream::child(std::uint64_t element) const {
    auto p = path_;
    p.push_back(element);
    return RngStream(seed_, std::move(p));
}

std::array<std::uint32_t, 4> RngStream::block(std::uint64_t b) const {
    return philox4x32({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                       static_cast<std::uint32_t>(path_hash_),
                       static_cast<std::uint32_t>(path_hash_ >> 32)},
                      key_);
}

std::uint64_t RngStream::bits(std::uint64_t i) const {
    const auto r = block(i);
    return (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
}

double RngStream::uniform(std::uint64_t i) const {
    const auto r = block(i);
    return to_unit(r[0], r[1]);
}

double RngStream::normal(std::uint64_t i) const {
    const auto r = block(i / 2);
    const double u1 = to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (i % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
}

void RngStream::fill_normal(std::uint64_t first, std::span<double> out) const {
    std::size_t k = 0;
    std::uint64_t i = first;
    if (i % 2 == 1 && k < out.size()) out[k++] = normal(i++);
    for (; k + 1 < out.size(); k += 2, i += 2) {
        const auto r = block(i / 2);
        const double radius = std::sqrt(-2.0 * std::log(to_unit(r[0], r[1])));
        const double angle = 2.0 * std::numbers::pi * to_unit(r[2], r[3]);
        out[k] = radius * std::cos(angle);
        out[k + 1] = radius * std::sin(angle);
    }
    if (k < out.size()) out[k] = normal(i);
}

}  // namespace topofield
