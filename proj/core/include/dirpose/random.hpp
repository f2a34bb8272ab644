#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dirpose {

using Rng = std::mt19937_64;

// Every random quantity in the project is drawn from a substream derived
// from one master seed. The derivation is substream(master, label, index):
// the label and index are hashed (FNV-1a over the label bytes, then a
// splitmix64 finalizer over master ^ label_hash ^ index) into the engine
// seed. Identical (master, label, index) always yields the identical
// stream; distinct labels give independent streams.
Rng substream(std::uint64_t master_seed, std::string_view label,
              std::uint64_t index = 0);

// Uniform draws below avoid std::*_distribution, whose output sequences
// differ across standard library implementations.

// Uniform in [0, 1).
double uniform01(Rng& rng);

// Uniform in [lo, hi).
double uniform_in(Rng& rng, double lo, double hi);

// Uniform integer in [0, n).
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

// Standard normal via Box-Muller (one draw per call, no cached spare).
double standard_normal(Rng& rng);

}  // namespace dirpose
