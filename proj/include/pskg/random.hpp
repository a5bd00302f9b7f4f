#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace pskg {

/// Counter-based random stream (Philox4x32-10, Salmon et al., SC'11).
///
/// A stream is fully determined by a 64-bit seed (the key) and a 64-bit
/// stream id (the high half of the 128-bit counter). The output sequence is
/// pure integer arithmetic, so identical (seed, stream id) pairs produce
/// identical sequences on every platform, and distinct stream ids select
/// disjoint counter blocks.
class RandomStream {
public:
    RandomStream() : RandomStream(0, 0) {}

    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream_id) {}

    /// Raw Philox4x32-10 block function. Exposed for known-answer tests.
    static std::array<std::uint32_t, 4> philox4x32(
        std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t prod0 = 0xD2511F53ull * counter[0];
            const std::uint64_t prod1 = 0xCD9E8D57ull * counter[2];
            counter = {static_cast<std::uint32_t>(prod1 >> 32) ^ counter[1] ^ key[0],
                       static_cast<std::uint32_t>(prod1),
                       static_cast<std::uint32_t>(prod0 >> 32) ^ counter[3] ^ key[1],
                       static_cast<std::uint32_t>(prod0)};
        }
        return counter;
    }

    std::uint64_t next_u64() {
        if (buffered_ == 0) {
            const std::array<std::uint32_t, 4> out = philox4x32(
                {static_cast<std::uint32_t>(block_),
                 static_cast<std::uint32_t>(block_ >> 32),
                 static_cast<std::uint32_t>(stream_),
                 static_cast<std::uint32_t>(stream_ >> 32)},
                key_);
            ++block_;
            buf_[0] = out[0] | (static_cast<std::uint64_t>(out[1]) << 32);
            buf_[1] = out[2] | (static_cast<std::uint64_t>(out[3]) << 32);
            buffered_ = 2;
        }
        return buf_[--buffered_];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buf_{};
    int buffered_ = 0;
};

/// Deterministic, collision-free stream for vertex u under a global seed.
inline RandomStream derive_vertex_stream(std::uint64_t seed, std::uint64_t u) {
    return RandomStream(seed, u);
}

/// Exact Poisson sample with the given mean.
///
/// Inversion by multiplication below mean 10, Hörmann's PTRS transformed
/// rejection above. Both are distribution-exact and consume the stream
/// deterministically.
inline std::uint64_t sample_poisson(double mean, RandomStream& rng) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("sample_poisson: mean must be finite and >= 0");
    }
    if (mean == 0.0) return 0;

    if (mean < 10.0) {
        const double limit = std::exp(-mean);
        std::uint64_t count = 0;
        double product = rng.next_unit();
        while (product > limit) {
            ++count;
            product *= rng.next_unit();
        }
        return count;
    }

    // PTRS (Hörmann 1993), exact for mean >= 10.
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.next_unit() - 0.5;
        const double v = rng.next_unit();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double k = kf;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            k * loglam - mean - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(kf);
        }
    }
}

/// Draw an index in [0, size) where index i has probability weights[i].
/// Weights must sum to ~1; the final index absorbs any rounding slack.
template <typename WeightsLike>
inline std::size_t sample_index(const WeightsLike& weights, std::size_t size,
                                RandomStream& rng) {
    const double x = rng.next_unit();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < size; ++i) {
        cum += weights[i];
        if (x < cum) return i;
    }
    return size - 1;
}

}  // namespace pskg
