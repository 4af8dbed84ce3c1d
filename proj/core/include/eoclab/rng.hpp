#pragma once

#include <cmath>
#include <cstdint>

namespace eoclab {

// Counter-based pseudorandom generator in the splitmix64 family:
// output_i = finalize(base + i * golden). Random access, no hidden state
// beyond the counter, so independent substreams can be derived by hashing
// (seed, stream) and results never depend on scheduling.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(derive_base(seed, stream)) {}

    std::uint64_t next_u64() { return finalize(base_ + (++counter_) * kGolden); }

    // uniform on (0, 1]
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; pairs are cached
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    static std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

  private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t derive_base(std::uint64_t seed, std::uint64_t stream) {
        return finalize(finalize(seed + kGolden) ^ finalize(stream + 0xD1B54A32D192ED03ull));
    }

    std::uint64_t base_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace eoclab
