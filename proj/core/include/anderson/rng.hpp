#ifndef ANDERSON_RNG_HPP
#define ANDERSON_RNG_HPP

#include <cstdint>
#include <random>

namespace anderson {

// All probabilistic subroutines draw from a generator seeded with a fixed
// constant so outputs are reproducible across runs and call orders.
inline constexpr uint64_t kFixedSeed = 0x5eedf1e1dULL;

class Rng {
public:
    explicit Rng(uint64_t seed = kFixedSeed) : g_(seed) {}
    uint64_t next() { return g_(); }
    uint64_t below(uint64_t n) { return n ? g_() % n : 0; }

private:
    std::mt19937_64 g_;
};

} // namespace anderson

#endif
