#pragma once

#include <cstdint>

#include "kipt/point_set.hpp"

namespace kipt {

/// SplitMix64: the fixed, portable generator behind random_box. Identical output on
/// every platform for a given seed, so seeded experiments reproduce bit for bit.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// m i.i.d. uniform points in the box. Coordinates are drawn point-major (all
/// coordinates of point 0, then point 1, ...), so prefixes agree across calls
/// with different m and the same seed.
PointSet random_box(int m, const Box& box, std::uint64_t seed);

/// Halton sequence with bases the first d primes, starting at index 1 (d <= 25).
PointSet halton(int m, const Box& box);

/// Sobol sequence, direction numbers from the Joe-Kuo D(6) table (d <= 21),
/// indexed from 1 so the degenerate all-zeros point is skipped.
PointSet sobol(int m, const Box& box);

/// Tensor grid of n_per_dim equispaced values per dimension, endpoints included.
/// First dimension varies fastest. Guarded against sizes above 10^7 points.
PointSet grid_points(int n_per_dim, const Box& box);

}  // namespace kipt
