#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace fbl {

// Philox4x64-10 counter-based generator. Each trial owns the substream keyed
// by (seed, trial_index), so draws are independent of execution order and of
// how trials are distributed over workers.
struct Philox4x64 {
    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                              std::array<std::uint64_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 p0 = static_cast<unsigned __int128>(kMul0) * ctr[0];
            const unsigned __int128 p1 = static_cast<unsigned __int128>(kMul1) * ctr[2];
            const std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
            const std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
            const std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
            const std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

// Word stream for one Monte Carlo trial. Counter layout:
//   ctr = { block_index, attempt, trial_index, 0 },  key = { seed, 0 }.
// `attempt` separates the resample-once stream from the primary one.
class TrialStream {
public:
    TrialStream(std::uint64_t seed, std::uint64_t trial_index, std::uint64_t attempt = 0)
        : key_{seed, 0}, trial_(trial_index), attempt_(attempt) {}

    std::uint64_t next_word() {
        if (pos_ == 4) {
            buf_ = Philox4x64::block({block_++, attempt_, trial_, 0}, key_);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    // Uniform on the open interval (0, 1); never returns an endpoint.
    double next_uniform() {
        return (static_cast<double>(next_word() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Circularly symmetric complex normal with unit variance: the modulus
    // squared is Exp(1), the phase uniform.
    std::complex<double> next_cnormal() {
        const double radius = std::sqrt(-std::log(next_uniform()));
        const double angle = 2.0 * M_PI * next_uniform();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    // One of {1, i, -1, -i}, each with probability 1/4. Unit modulus holds
    // exactly in floating point, which keeps tr X X^H = nK exact.
    std::complex<double> next_qpsk() {
        switch (next_word() & 3u) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }

private:
    std::array<std::uint64_t, 2> key_;
    std::uint64_t trial_;
    std::uint64_t attempt_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4;
};

} // namespace fbl
