#pragma once

#include <cstdint>

#include "hifbe/oracle.hpp"

namespace hifb {

struct Box {
  Vec lo;
  Vec hi;

  static Box cube(int dim, double lo, double hi);
};

/// Sampled estimate of the nu-Holder constant of grad f on `domain`:
/// max over pairs of |grad f(y) - grad f(x)| / |y - x|^nu, inflated by 1.1.
/// Deterministic for a fixed seed. Pairs are drawn both globally and at a
/// geometric ladder of separations; if the per-scale maxima keep growing as
/// the separation shrinks, the declared nu is too large and an
/// exponent_mismatch error is raised.
double estimate_holder_constant(const SmoothOracle& f, double nu, const Box& domain,
                                int n_samples, std::uint64_t seed);

}  // namespace hifb
