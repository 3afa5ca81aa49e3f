#include "kipt/sampler.hpp"

#include <array>
#include <cmath>

namespace kipt {

namespace {

constexpr std::array<int, 25> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                         43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0, r = 0.0;
    while (i != 0) {
        inv /= base;
        r += inv * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

// Primitive polynomial degree s, encoded interior coefficients a, and initial
// direction values m_1..m_s for Sobol dimensions 2..21 (Joe & Kuo, "Constructing
// Sobol sequences with better two-dimensional projections", D(6) table; see README).
struct SobolDim {
    int s;
    unsigned a;
    std::array<unsigned, 7> m;
};

constexpr std::array<SobolDim, 20> kSobolDims = {{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
}};

constexpr int kSobolBits = 32;

// 32-bit direction integers v_1..v_32 for one dimension (dim is 0-based).
std::array<std::uint32_t, kSobolBits> sobol_directions(int dim) {
    std::array<std::uint32_t, kSobolBits> v{};
    if (dim == 0) {
        for (int j = 0; j < kSobolBits; ++j) v[j] = 1u << (kSobolBits - 1 - j);
        return v;
    }
    const SobolDim& row = kSobolDims[dim - 1];
    std::array<std::uint64_t, kSobolBits> m{};
    for (int j = 0; j < row.s; ++j) m[j] = row.m[j];
    for (int j = row.s; j < kSobolBits; ++j) {
        std::uint64_t val = m[j - row.s] ^ (m[j - row.s] << row.s);
        for (int t = 1; t < row.s; ++t) {
            const unsigned a_t = (row.a >> (row.s - 1 - t)) & 1u;
            if (a_t) val ^= m[j - t] << t;
        }
        m[j] = val;
    }
    for (int j = 0; j < kSobolBits; ++j)
        v[j] = static_cast<std::uint32_t>(m[j]) << (kSobolBits - 1 - j);
    return v;
}

}  // namespace

PointSet random_box(int m, const Box& box, std::uint64_t seed) {
    if (m < 1) throw UsageError("random_box: need at least one point");
    const int d = box.dim();
    SplitMix64 rng(seed);
    Eigen::MatrixXd pts(d, m);
    for (int c = 0; c < m; ++c)
        for (int r = 0; r < d; ++r) pts(r, c) = box.map_unit(rng.next_double(), r);
    return PointSet(std::move(pts), box);
}

PointSet halton(int m, const Box& box) {
    if (m < 1) throw UsageError("halton: need at least one point");
    const int d = box.dim();
    if (d > static_cast<int>(kPrimes.size()))
        throw UsageError("halton: dimension exceeds embedded prime table (25)");
    Eigen::MatrixXd pts(d, m);
    for (int c = 0; c < m; ++c)
        for (int r = 0; r < d; ++r)
            pts(r, c) = box.map_unit(radical_inverse(static_cast<std::uint64_t>(c) + 1, kPrimes[r]), r);
    return PointSet(std::move(pts), box);
}

PointSet sobol(int m, const Box& box) {
    if (m < 1) throw UsageError("sobol: need at least one point");
    const int d = box.dim();
    if (d > static_cast<int>(kSobolDims.size()) + 1)
        throw UsageError("sobol: dimension exceeds embedded direction-number table (21)");

    std::vector<std::array<std::uint32_t, kSobolBits>> dirs(d);
    for (int r = 0; r < d; ++r) dirs[r] = sobol_directions(r);

    Eigen::MatrixXd pts(d, m);
    for (int c = 0; c < m; ++c) {
        const std::uint64_t index = static_cast<std::uint64_t>(c) + 1;  // skip the zero point
        for (int r = 0; r < d; ++r) {
            std::uint32_t x = 0;
            for (int j = 0; j < kSobolBits; ++j)
                if (index & (1ull << j)) x ^= dirs[r][j];
            pts(r, c) = box.map_unit(static_cast<double>(x) * 0x1.0p-32, r);
        }
    }
    return PointSet(std::move(pts), box);
}

PointSet grid_points(int n_per_dim, const Box& box) {
    if (n_per_dim < 2) throw UsageError("grid_points: need at least 2 points per dimension");
    const int d = box.dim();
    double total_f = 1.0;
    for (int r = 0; r < d; ++r) total_f *= n_per_dim;
    if (total_f > 1e7) throw UsageError("grid_points: grid larger than 10^7 points");
    const int total = static_cast<int>(total_f);

    Eigen::MatrixXd pts(d, total);
    std::vector<int> idx(d, 0);
    for (int c = 0; c < total; ++c) {
        for (int r = 0; r < d; ++r)
            pts(r, c) = box.map_unit(static_cast<double>(idx[r]) / (n_per_dim - 1), r);
        for (int r = 0; r < d; ++r) {  // first dimension fastest
            if (++idx[r] < n_per_dim) break;
            idx[r] = 0;
        }
    }
    return PointSet(std::move(pts), box);
}

}  // namespace kipt
