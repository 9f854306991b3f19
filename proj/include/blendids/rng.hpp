#pragma once

#include <cstdint>
#include <random>

namespace blendids {

// All randomness flows from a single master seed. Every pipeline stage derives
// its own sub-seed as splitmix64(master + role * GOLDEN), so adding a stage
// never perturbs the random stream of existing ones.
//
// Role table:
//   1  outer train/test split
//   2  blend split (base portion vs holdout)
//   3  SVM subgradient sampling
//   4  forest bootstrap and feature sampling
//   5  network init and batch shuffling
//   6  synthetic data generation
//   7  k-fold shuffling
enum class SeedRole : std::uint64_t {
    OuterSplit = 1,
    BlendSplit = 2,
    Svm = 3,
    Forest = 4,
    Net = 5,
    Synth = 6,
    Kfold = 7,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, SeedRole role) {
    return splitmix64(master + static_cast<std::uint64_t>(role) * 0x9e3779b97f4a7c15ULL);
}

// Indexed sub-streams within a stage (per tree, per one-vs-rest machine).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + (index + 1) * 0xbf58476d1ce4e5b9ULL);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

} // namespace blendids
