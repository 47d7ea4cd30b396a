#pragma once

#include <array>
#include <cstdint>

#include "hestonfx/math/normal.hpp"

namespace hestonfx {

// Philox-4x32-10 counter-based generator. A block is a pure function of
// (seed, path, step, slot), so any partition of paths across threads draws
// the same variates and simulation output is independent of the lane count.
class Philox {
public:
    explicit Philox(std::uint64_t seed) : seed_(seed) {}

    std::array<std::uint32_t, 4> block(std::uint64_t path, std::uint32_t step,
                                       std::uint32_t slot) const {
        std::uint32_t c0 = static_cast<std::uint32_t>(path);
        std::uint32_t c1 = static_cast<std::uint32_t>(path >> 32);
        std::uint32_t c2 = step;
        std::uint32_t c3 = slot;
        std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = 0xD2511F53ull * c0;
            const std::uint64_t p1 = 0xCD9E8D57ull * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return {c0, c1, c2, c3};
    }

    // Two independent U(0,1) variates strictly inside the unit interval.
    void uniform_pair(std::uint64_t path, std::uint32_t step, std::uint32_t slot,
                      double& u1, double& u2) const {
        const auto b = block(path, step, slot);
        u1 = to_unit(b[0], b[1]);
        u2 = to_unit(b[2], b[3]);
    }

    // Two independent standard normals via the inverse CDF, so negating them
    // gives the exact antithetic pair.
    void normal_pair(std::uint64_t path, std::uint32_t step, std::uint32_t slot,
                     double& z1, double& z2) const {
        double u1, u2;
        uniform_pair(path, step, slot, u1, u2);
        z1 = normal::inv_cdf(u1);
        z2 = normal::inv_cdf(u2);
    }

    std::uint64_t seed() const { return seed_; }

private:
    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t seed_;
};

} // namespace hestonfx
