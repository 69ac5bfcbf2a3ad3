#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace latred {

/// Counter-derived random stream: one root seed, substreams addressed by
/// (instance, trial, salt) counters so that concurrent trials and report
/// ordering never depend on scheduling.
class RngStream {
public:
    explicit RngStream(std::uint64_t root, std::uint64_t a = 0, std::uint64_t b = 0,
                       std::uint64_t c = 0)
        : eng_(mix(mix(mix(mix(0x9e3779b97f4a7c15ull ^ root) + a) + b) + c)) {}

    RngStream substream(std::uint64_t a, std::uint64_t b = 0) {
        return RngStream(u64(), a, b, 0xa5a5a5a5ull);
    }

    std::uint64_t u64() { return eng_(); }

    // Uniform in [0, n) by rejection; behavior pinned independent of libstdc++.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = u64();
        } while (x >= lim);
        return x % n;
    }

    long long range(long long lo, long long hi) {  // inclusive
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double uniform01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log argument.
    double uniform_pos() { return (static_cast<double>(u64() >> 11) + 1.0) * 0x1.0p-53; }

    bool coin() { return (u64() & 1) != 0; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform_pos(), v = uniform01();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double exponential(double lambda) { return -std::log(uniform_pos()) / lambda; }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0;
};

}  // namespace latred
