#pragma once

#include <cstdint>
#include <random>

namespace qlnc {

/// Deterministic random stream. Wraps std::mt19937_64 (whose output sequence
/// is fixed by the standard) and avoids std::uniform_int_distribution, whose
/// output is implementation defined. Same seed, same platform-independent draws.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t u64() { return eng_(); }

    /// Uniform value in [0, n). Rejection sampling, exact.
    uint64_t below(uint64_t n) {
        // largest multiple of n that fits; (-n) % n == 2^64 mod n
        uint64_t limit = (0 - n) % n;
        for (;;) {
            uint64_t v = eng_();
            if (v >= limit) return v % n;
        }
    }

    /// Stream for one trial of a batch. Trials are independent and can be
    /// replayed individually.
    static Rng for_trial(uint64_t master_seed, uint64_t trial_index) {
        return Rng(master_seed ^ trial_index);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace qlnc
