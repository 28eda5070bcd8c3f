#pragma once

// Reproducible point sampling. The generator is xoshiro256** 1.0
// (Blackman & Vigna), seeded through splitmix64, so any implementation of
// the reference algorithms regenerates identical sample sets from the same
// 64-bit seed. Doubles are drawn by taking the top 53 bits.

#include <cstdint>
#include <vector>

#include "weylkk/catalog.hpp"

namespace weylkk {

class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        // splitmix64 expansion of the seed into the 256-bit state
        std::uint64_t x = seed;
        for (auto& word : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// n points uniform over the entry's domain box, in coordinate order. The
// seed fully determines the set.
inline std::vector<Point> sample_points(const GeometryEntry& e, int n,
                                        std::uint64_t seed) {
    Xoshiro256 rng(seed);
    std::vector<Point> pts;
    pts.reserve(n);
    for (int t = 0; t < n; ++t) {
        Point p;
        for (const auto& d : e.domain) p.push_back(rng.uniform(d.lo, d.hi));
        pts.push_back(p);
    }
    return pts;
}

// An axis-aligned grid with the given number of nodes per coordinate,
// shrunk 5% inward from the domain faces.
inline std::vector<Point> grid_points(const GeometryEntry& e,
                                      const std::vector<int>& counts) {
    std::vector<Point> pts = {{}};
    for (std::size_t a = 0; a < e.domain.size(); ++a) {
        const auto& d = e.domain[a];
        const int n = counts[a % counts.size()];
        const double pad = 0.05 * (d.hi - d.lo);
        std::vector<Point> next;
        for (const auto& base : pts)
            for (int i = 0; i < n; ++i) {
                Point p = base;
                double t = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
                p.push_back(d.lo + pad + t * (d.hi - d.lo - 2.0 * pad));
                next.push_back(p);
            }
        pts = std::move(next);
    }
    return pts;
}

}  // namespace weylkk
