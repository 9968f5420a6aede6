#include "sdd/resample.hpp"

#include <algorithm>
#include <string>

#include "sdd/errors.hpp"
#include "sdd/rng.hpp"

namespace sdd {

namespace {

// Indices of each class 0..max(y), ascending within class.
std::vector<std::vector<std::size_t>> group_by_class(std::span<const int> y) {
    if (y.empty()) raise(ErrorCode::EmptyClass, "empty label vector");
    int max_label = 0;
    for (int label : y) {
        if (label < 0) raise(ErrorCode::LabelOutOfRange, "negative label");
        max_label = std::max(max_label, label);
    }
    std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(max_label) + 1);
    for (std::size_t i = 0; i < y.size(); ++i) {
        groups[static_cast<std::size_t>(y[i])].push_back(i);
    }
    for (std::size_t c = 0; c < groups.size(); ++c) {
        if (groups[c].empty()) {
            raise(ErrorCode::EmptyClass, "class " + std::to_string(c) + " has no samples");
        }
    }
    return groups;
}

}  // namespace

std::vector<std::size_t> undersample_indices(std::span<const int> y, std::uint64_t seed) {
    auto groups = group_by_class(y);
    std::size_t n_min = groups.front().size();
    for (const auto& g : groups) n_min = std::min(n_min, g.size());

    Rng rng(seed);
    std::vector<std::size_t> out;
    out.reserve(n_min * groups.size());
    for (auto& g : groups) {
        shuffle_in_place(g, rng);
        out.insert(out.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n_min));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> oversample_indices(std::span<const int> y, std::uint64_t seed) {
    auto groups = group_by_class(y);
    std::size_t n_max = 0;
    for (const auto& g : groups) n_max = std::max(n_max, g.size());

    std::vector<std::size_t> out;
    out.reserve(n_max * groups.size());
    for (std::size_t i = 0; i < y.size(); ++i) out.push_back(i);

    Rng rng(seed);
    for (const auto& g : groups) {
        for (std::size_t extra = g.size(); extra < n_max; ++extra) {
            out.push_back(g[uniform_below(rng, g.size())]);
        }
    }
    return out;
}

ResampleStrategy resample_strategy_from_name(std::string_view name) {
    if (name == "none") return ResampleStrategy::None;
    if (name == "undersample") return ResampleStrategy::Undersample;
    if (name == "oversample") return ResampleStrategy::Oversample;
    raise(ErrorCode::InvalidArgument,
          "unknown resample strategy '" + std::string(name) +
              "' (expected none|undersample|oversample)");
}

std::string_view resample_strategy_name(ResampleStrategy strategy) {
    switch (strategy) {
        case ResampleStrategy::None: return "none";
        case ResampleStrategy::Undersample: return "undersample";
        case ResampleStrategy::Oversample: return "oversample";
    }
    return "?";
}

ResampleScope resample_scope_from_name(std::string_view name) {
    if (name == "train_only") return ResampleScope::TrainOnly;
    if (name == "whole_dataset") return ResampleScope::WholeDataset;
    raise(ErrorCode::InvalidArgument,
          "unknown resample scope '" + std::string(name) +
              "' (expected train_only|whole_dataset)");
}

std::string_view resample_scope_name(ResampleScope scope) {
    switch (scope) {
        case ResampleScope::TrainOnly: return "train_only";
        case ResampleScope::WholeDataset: return "whole_dataset";
    }
    return "?";
}

std::vector<std::size_t> resample_subset(ResampleStrategy strategy, std::span<const int> y,
                                         std::span<const std::size_t> subset,
                                         std::uint64_t seed) {
    if (strategy == ResampleStrategy::None) {
        return {subset.begin(), subset.end()};
    }
    std::vector<int> local;
    local.reserve(subset.size());
    for (std::size_t i : subset) {
        if (i >= y.size()) raise(ErrorCode::LabelOutOfRange, "subset index out of range");
        local.push_back(y[i]);
    }
    const std::vector<std::size_t> positions = strategy == ResampleStrategy::Undersample
                                                   ? undersample_indices(local, seed)
                                                   : oversample_indices(local, seed);
    std::vector<std::size_t> out;
    out.reserve(positions.size());
    for (std::size_t pos : positions) out.push_back(subset[pos]);
    return out;
}

}  // namespace sdd
