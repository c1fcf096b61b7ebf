#pragma once

#include <cstdint>
#include <cmath>

namespace wzlq {

// splitmix64, used to expand a master seed into substream seeds.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ generator with a polar-method Gaussian sampler.
// All arithmetic is integer or basic libm (sqrt/log), so a given
// (seed, stream) pair produces the same sample sequence on every run.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0) {
        uint64_t sm = seed ^ (0x632be59bd9b4e019ULL * (stream + 1));
        for (auto& w : state_) w = splitmix64(sm);
        have_spare_ = false;
        spare_ = 0.0;
    }

    uint64_t next_u64() {
        auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        uint64_t* s = state_;
        uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // uniform in [0,1) with 53 bits of precision
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (-1,1), excluding exact 0 only with negligible probability
    double uniform_sym() { return 2.0 * uniform() - 1.0; }

    // standard normal via Marsaglia's polar method
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, r2;
        do {
            u = uniform_sym();
            v = uniform_sym();
            r2 = u * u + v * v;
        } while (r2 >= 1.0 || r2 == 0.0);
        double f = std::sqrt(-2.0 * std::log(r2) / r2);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

private:
    uint64_t state_[4];
    bool have_spare_;
    double spare_;
};

// Kahan-compensated accumulator so that merged batch sums do not depend
// on summation order beyond the compensated tolerance.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;
    long long count = 0;

    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        ++count;
    }
    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

} // namespace wzlq
