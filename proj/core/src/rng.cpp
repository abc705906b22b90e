#include "ttplab/rng.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace ttplab {

// splitmix64 finalizer; decorrelates consecutive stream indices.
std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double m = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = m * std::sin(a);
    has_spare_ = true;
    return m * std::cos(a);
}

namespace beta_thermal {

namespace {
constexpr int kTableSize = 2048;
constexpr double kBetaMax = 7.0;

struct Table {
    std::array<double, kTableSize + 1> cdf{};
    Table() {
        for (int i = 0; i <= kTableSize; ++i) cdf[i] = ttplab::beta_thermal::cdf(kBetaMax * i / kTableSize);
    }
};
const Table& table() {
    static const Table t;
    return t;
}
}  // namespace

double pdf(double b) {
    return (4.0 / std::sqrt(std::numbers::pi)) * b * b * std::exp(-b * b);
}

double cdf(double b) {
    return std::erf(b) - (2.0 / std::sqrt(std::numbers::pi)) * b * std::exp(-b * b);
}

double sample(Rng& rng) {
    const auto& t = table();
    double u = rng.uniform();
    // Keep u away from the untabulated far tail.
    const double u_hi = t.cdf[kTableSize];
    if (u >= u_hi) u = u_hi * (1.0 - 1e-16);

    // Bracket by binary search on the tabulated CDF.
    int lo = 0, hi = kTableSize;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (t.cdf[mid] <= u) lo = mid;
        else hi = mid;
    }
    double b = kBetaMax * (lo + 0.5) / kTableSize;

    // Newton on the closed-form CDF reaches machine accuracy in a few steps.
    for (int it = 0; it < 50; ++it) {
        const double f = cdf(b) - u;
        const double d = pdf(b);
        if (d <= 0.0) break;
        const double step = f / d;
        b -= step;
        if (b < 0.0) b = 1e-12;
        if (std::abs(step) < 1e-14 * (1.0 + b)) break;
    }
    return b;
}

}  // namespace beta_thermal

}  // namespace ttplab
