#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>

namespace enetfp {

/// Opaque feature index. Wavelet dictionaries use (level j, position k);
/// explicit dictionaries use level 0 and the column index as position.
struct FeatureId {
    std::int32_t level = 0;
    std::int64_t position = 0;

    friend constexpr auto operator<=>(const FeatureId&, const FeatureId&) = default;
};

inline std::string to_string(const FeatureId& id) {
    return std::to_string(id.level) + ":" + std::to_string(id.position);
}

/// Sparse coefficient vector beta in l2: only nonzero entries are stored,
/// ordered by FeatureId.
using Coefficients = std::map<FeatureId, double>;

}  // namespace enetfp
