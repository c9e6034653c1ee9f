#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace blockspec {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw; SC'11).
// A pure function of (counter, key): no state, so independent streams can be
// addressed directly and replicates sampled on any thread give identical bits.
namespace philox {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<uint32_t, 4>& ctr, const std::array<uint32_t, 2>& key) {
    const uint64_t p0 = (uint64_t)kMul0 * ctr[0];
    const uint64_t p1 = (uint64_t)kMul1 * ctr[2];
    const uint32_t hi0 = (uint32_t)(p0 >> 32), lo0 = (uint32_t)p0;
    const uint32_t hi1 = (uint32_t)(p1 >> 32), lo1 = (uint32_t)p1;
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

inline std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        round_once(ctr, key);
    }
    return ctr;
}

/// Map 64 random bits to a double in the open interval (0,1).
inline double to_unit_open(uint32_t hi, uint32_t lo) {
    const uint64_t bits = ((uint64_t)hi << 32) | lo;
    return (double)(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

} // namespace philox

/// Inverse of the standard normal CDF, algorithm AS 241 (Wichura, PPND16).
/// Relative error below 1e-15 on (0,1); pure arithmetic on fixed constants,
/// so results are reproducible bit for bit on a given platform.
inline double inverse_normal_cdf(double p) {
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double numer =
            q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                      6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                    1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                  1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double denom =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return numer / denom;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    if (r <= 0.0) return q < 0.0 ? -HUGE_VAL : HUGE_VAL;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        const double numer =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double denom =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        x = numer / denom;
    } else {
        r -= 5.0;
        const double numer =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double denom =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        x = numer / denom;
    }
    return q < 0.0 ? -x : x;
}

/// Addressable stream of i.i.d. N(0,1) variates.
///
/// Stream identity is (seed, replicate_id, tag); the tag separates the X and Y
/// matrices of one draw. Entry i of the stream reads Philox block i/2 built as
///   counter = [ blk_lo, blk_hi, rep_lo, (rep_hi & 0xFFFFFF) | tag<<24 ]
///   key     = [ seed_lo, seed_hi ]
/// so any entry is random access and fills can be done in parallel. Lane 0
/// takes words 0,1 of the block, lane 1 words 2,3; the 64 bits become a
/// uniform in (0,1) and then a normal through inverse_normal_cdf.
class NormalStream {
  public:
    NormalStream(uint64_t seed, uint64_t replicate_id, uint32_t tag)
        : key_{(uint32_t)seed, (uint32_t)(seed >> 32)},
          rep_lo_((uint32_t)replicate_id),
          rep_hi_(((uint32_t)(replicate_id >> 32) & 0x00FFFFFFu) | (tag << 24)) {}

    double at(uint64_t index) const {
        const uint64_t blk = index >> 1;
        const auto w = philox::block({(uint32_t)blk, (uint32_t)(blk >> 32), rep_lo_, rep_hi_}, key_);
        const double u = (index & 1) ? philox::to_unit_open(w[2], w[3])
                                     : philox::to_unit_open(w[0], w[1]);
        return inverse_normal_cdf(u);
    }

    void fill(double* dst, uint64_t count) const {
        uint64_t i = 0;
        for (uint64_t blk = 0; i < count; ++blk) {
            const auto w = philox::block({(uint32_t)blk, (uint32_t)(blk >> 32), rep_lo_, rep_hi_}, key_);
            dst[i++] = inverse_normal_cdf(philox::to_unit_open(w[0], w[1]));
            if (i < count) dst[i++] = inverse_normal_cdf(philox::to_unit_open(w[2], w[3]));
        }
    }

  private:
    std::array<uint32_t, 2> key_;
    uint32_t rep_lo_;
    uint32_t rep_hi_;
};

} // namespace blockspec
