#pragma once

#include <cstdint>
#include <random>

namespace ttplab {

// Deterministic RNG with per-particle streams: stream index is mixed into
// the seed so results are independent of thread scheduling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);
    static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(mix(seed, stream));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return (gen_() >> 11) * (1.0 / 9007199254740992.0); }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via Box-Muller (pinned algorithm, unlike
    // std::normal_distribution).
    double normal();

  private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Speed-in-thermal-units law with density (4/sqrt(pi)) b^2 exp(-b^2):
// tabulated CDF bracket + Newton refinement on the closed-form CDF.
namespace beta_thermal {

double pdf(double b);
double cdf(double b);
double sample(Rng& rng);

}  // namespace beta_thermal

}  // namespace ttplab
