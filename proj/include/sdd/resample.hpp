#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sdd {

// Down-samples every class to the minority count, uniformly without
// replacement.  Output indices sorted ascending; deterministic given seed.
std::vector<std::size_t> undersample_indices(std::span<const int> y, std::uint64_t seed);

// Keeps every index once and adds uniform-with-replacement duplicates until
// every class matches the majority count.  Deterministic given seed.
std::vector<std::size_t> oversample_indices(std::span<const int> y, std::uint64_t seed);

enum class ResampleStrategy { None, Undersample, Oversample };
enum class ResampleScope { TrainOnly, WholeDataset };

ResampleStrategy resample_strategy_from_name(std::string_view name);
std::string_view resample_strategy_name(ResampleStrategy strategy);
ResampleScope resample_scope_from_name(std::string_view name);
std::string_view resample_scope_name(ResampleScope scope);

struct ResamplePlan {
    ResampleStrategy strategy = ResampleStrategy::None;
    ResampleScope scope = ResampleScope::TrainOnly;
    std::uint64_t seed = 0;

    bool active() const { return strategy != ResampleStrategy::None; }
    // WholeDataset duplicates samples across the later train/test boundary;
    // reports must flag it.
    bool leak_prone() const { return active() && scope == ResampleScope::WholeDataset; }
};

// Applies a strategy to a subset of a label vector: resamples positions of
// `subset` according to the labels y[subset[i]] and maps back to original
// indices.
std::vector<std::size_t> resample_subset(ResampleStrategy strategy,
                                         std::span<const int> y,
                                         std::span<const std::size_t> subset,
                                         std::uint64_t seed);

}  // namespace sdd
