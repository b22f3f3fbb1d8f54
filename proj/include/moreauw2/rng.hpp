// Counter-based deterministic random number generation. A draw is a pure
// function of (seed, counter), so sampling is reproducible bit-for-bit and
// independent of evaluation order.

#ifndef MOREAUW2_RNG_HPP
#define MOREAUW2_RNG_HPP

#include <cstdint>

namespace mw2 {

// SplitMix64-style avalanche of a (seed, counter) pair.
std::uint64_t hash_counter(std::uint64_t seed, std::uint64_t counter);

// Uniform draw in the open interval (0, 1).
double uniform01(std::uint64_t seed, std::uint64_t counter);

// Standard normal draw via the inverse CDF.
double standard_normal(std::uint64_t seed, std::uint64_t counter);

// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
double normal_quantile(double p);

// Derives an independent child stream seed (used when one experiment needs
// several unrelated streams).
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace mw2

#endif
