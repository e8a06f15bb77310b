#include "ugvq/features/registry.hpp"

#include "ugvq/features/precomputed.hpp"
#include "ugvq/features/toy_backbones.hpp"

namespace ugvq::features {

namespace {

[[noreturn]] void unknown(const std::string& name, BackboneKind kind) {
    std::string msg = "unknown " + std::string(to_string(kind)) + " backbone '" + name + "'; registered:";
    for (const auto& n : registered_backbones(kind)) msg += " " + n;
    throw FeatureError(msg);
}

}  // namespace

std::shared_ptr<FrameEncoder> make_frame_encoder(const BackboneSpec& spec) {
    if (spec.name == "toy_frame") return std::make_shared<ToyFrameEncoder>(spec.output_dim, spec.seed);
    if (spec.name == "precomputed_frame") return std::make_shared<PrecomputedFrameEncoder>(spec.pack_path);
    unknown(spec.name, BackboneKind::frame_encoder);
}

std::shared_ptr<MotionEncoder> make_motion_encoder(const BackboneSpec& spec) {
    if (spec.name == "toy_motion")
        return std::make_shared<ToyMotionEncoder>(spec.output_dim, spec.min_frames, spec.seed);
    if (spec.name == "precomputed_motion")
        return std::make_shared<PrecomputedMotionEncoder>(spec.pack_path);
    unknown(spec.name, BackboneKind::motion_encoder);
}

std::shared_ptr<TextEncoder> make_text_encoder(const BackboneSpec& spec) {
    if (spec.name == "toy_text_hash")
        return std::make_shared<ToyTextEncoder>(spec.output_dim, spec.max_tokens);
    if (spec.name == "precomputed_text") return std::make_shared<PrecomputedTextEncoder>(spec.pack_path);
    unknown(spec.name, BackboneKind::text_encoder);
}

std::vector<std::string> registered_backbones(BackboneKind kind) {
    switch (kind) {
        case BackboneKind::frame_encoder: return {"toy_frame", "precomputed_frame"};
        case BackboneKind::motion_encoder: return {"toy_motion", "precomputed_motion"};
        case BackboneKind::text_encoder: return {"toy_text_hash", "precomputed_text"};
    }
    return {};
}

}  // namespace ugvq::features
