#include "ugvq/features/keyframes.hpp"

namespace ugvq::features {

KeyframePlan plan_keyframes(int source_count, int target_count) {
    if (source_count < 1) throw FeatureError("keyframe plan needs a positive frame count");
    if (target_count < 1) throw FeatureError("keyframe plan needs a positive keyframe count");
    KeyframePlan plan;
    plan.source_count = source_count;
    plan.target_count = target_count;
    plan.indices.reserve(target_count);
    for (int i = 0; i < target_count; ++i) {
        // floor(N / N_s * i) computed exactly in integer arithmetic
        long long idx = static_cast<long long>(source_count) * i / target_count;
        plan.indices.push_back(static_cast<int>(idx));
    }
    return plan;
}

}  // namespace ugvq::features
