#pragma once

#include <array>
#include <string_view>

#include "sdd/errors.hpp"

namespace sdd {

// The three annotation classes.  Integer codes 0/1/2 in this order are used
// everywhere for matrix indexing and must not change.
enum class Label : int {
    ShowDepression = 0,
    NotShowDepression = 1,
    Suspicious = 2,
};

inline constexpr int kNumLabels = 3;

// Stable file tokens for the three classes.
inline constexpr std::array<std::string_view, kNumLabels> kLabelTokens = {
    "show", "not_show", "suspicious"};

inline std::string_view label_token(Label label) {
    return kLabelTokens[static_cast<int>(label)];
}

inline Label label_from_token(std::string_view token) {
    for (int i = 0; i < kNumLabels; ++i) {
        if (kLabelTokens[i] == token) return static_cast<Label>(i);
    }
    raise(ErrorCode::UnknownLabel, "unrecognized label value '" + std::string(token) + "'");
}

}  // namespace sdd
