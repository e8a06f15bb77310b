#pragma once

#include <vector>

#include "ugvq/features/backbone.hpp"

namespace ugvq::features {

// Temporal downsampling plan: indices[i] = floor(N / N_s * i). Repeats are
// expected when N < N_s.
struct KeyframePlan {
    int source_count = 0;
    int target_count = 0;
    std::vector<int> indices;
};

KeyframePlan plan_keyframes(int source_count, int target_count);

}  // namespace ugvq::features
