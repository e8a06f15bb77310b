#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ugvq/features/backbone.hpp"

namespace ugvq::features {

// Settings one backbone slot is built from (config keys `spatial_backbone`,
// `temporal_backbone`, `text_backbone` plus per-slot options).
struct BackboneSpec {
    std::string name;       // registered implementation name
    int output_dim = 16;    // ignored by precomputed packs (dim comes from the file)
    std::uint64_t seed = 1;
    int min_frames = 2;     // motion encoders
    int max_tokens = 77;    // text encoders
    std::string pack_path;  // precomputed packs
};

std::shared_ptr<FrameEncoder> make_frame_encoder(const BackboneSpec& spec);
std::shared_ptr<MotionEncoder> make_motion_encoder(const BackboneSpec& spec);
std::shared_ptr<TextEncoder> make_text_encoder(const BackboneSpec& spec);

std::vector<std::string> registered_backbones(BackboneKind kind);

}  // namespace ugvq::features
