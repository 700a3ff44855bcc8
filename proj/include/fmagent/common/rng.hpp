#ifndef FMAGENT_COMMON_RNG_HPP
#define FMAGENT_COMMON_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace fmagent {

    /// One step of the SplitMix64 generator; advances `state`.
    constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// FNV-1a over bytes, used to turn tags and text into seed material.
    constexpr std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept
    {
        for (char c : text) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    /// Derives an independent stream seed from a base seed and any number of
    /// discriminators (island, generation, candidate words, attempt, ...).
    constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) noexcept
    {
        std::uint64_t state = base;
        std::uint64_t out = splitmix64(state);
        for (std::uint64_t p : parts) {
            state ^= p + 0x632be59bd9b4e019ULL + (out << 6) + (out >> 2);
            out = splitmix64(state);
        }
        return out;
    }

    /// Engine-wide random source. Distributions are implemented here rather
    /// than taken from <random> so seeded runs reproduce across standard
    /// libraries.
    class Rng {
    public:
        explicit Rng(std::uint64_t seed = 0) : _engine(seed) {}

        std::uint64_t next_u64() { return _engine(); }

        /// Uniform in [0, 1) with 53 random bits.
        double uniform() { return static_cast<double>(_engine() >> 11) * 0x1.0p-53; }

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        /// Uniform integer in [0, n). n must be positive.
        std::uint64_t index(std::uint64_t n)
        {
            const std::uint64_t limit = (~std::uint64_t(0)) - ((~std::uint64_t(0)) % n);
            std::uint64_t v;
            do {
                v = _engine();
            } while (v >= limit);
            return v % n;
        }

        /// Standard normal via the Marsaglia polar method.
        double normal()
        {
            if (_has_spare) {
                _has_spare = false;
                return _spare;
            }
            double u, v, s;
            do {
                u = 2.0 * uniform() - 1.0;
                v = 2.0 * uniform() - 1.0;
                s = u * u + v * v;
            } while (s >= 1.0 || s == 0.0);
            const double f = std::sqrt(-2.0 * std::log(s) / s);
            _spare = v * f;
            _has_spare = true;
            return u * f;
        }

        double normal(double mean, double stddev) { return mean + stddev * normal(); }

    private:
        std::mt19937_64 _engine;
        bool _has_spare = false;
        double _spare = 0.0;
    };

    /// Bit-compatible with numpy's legacy `np.random.seed(s); np.random.rand()`
    /// (32-bit MT19937 seeded with init_genrand, 53-bit doubles from two draws).
    class NumpyRandomState {
    public:
        explicit NumpyRandomState(std::uint32_t seed) : _mt(seed) {}

        double rand()
        {
            const std::uint32_t a = _mt() >> 5;
            const std::uint32_t b = _mt() >> 6;
            return (a * 67108864.0 + b) / 9007199254740992.0;
        }

    private:
        std::mt19937 _mt;
    };

} // namespace fmagent

#endif
