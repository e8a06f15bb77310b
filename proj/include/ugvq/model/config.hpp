#pragma once

#include <cstdint>

#include <json.hpp>

#include "ugvq/model/autodiff.hpp"

namespace ugvq::model {

// Fusion/regressor hyperparameters. Defaults follow the reference setup:
// modality tokens projected to 768, SCMA with 4 heads and a 1536-wide
// feedforward, every concatenated feature 1536 wide, so the full
// configuration feeds a 6 * 1536 = 9216 input into the regressor.
struct FusionConfig {
    int spatial_input_dim = 16;   // D_s of the frame encoder tokens
    int temporal_input_dim = 16;  // D_t of the motion encoder tokens
    int text_input_dim = 32;     // D_x of the text token

    int model_dim = 768;      // per-modality projected width D
    int scma_heads = 4;
    int scma_ffn_dim = 1536;
    int fused_dim = 1536;     // width of each concatenated feature; = 2 * model_dim
    int regressor_hidden = 9216;
    int output_dims = 3;      // 3 for (spatial, temporal, alignment); 2 for MQT-style data

    bool use_spatial = true;
    bool use_temporal = true;
    bool use_text = true;
    bool use_fusion = true;

    void validate() const;

    int enabled_original_count() const;
    int enabled_fused_count() const;  // fused pairs whose both modalities are enabled
    int fused_width() const { return (enabled_original_count() + enabled_fused_count()) * fused_dim; }
};

void to_json(nlohmann::json& j, const FusionConfig& c);
void from_json(const nlohmann::json& j, FusionConfig& c);

struct TrainOptions {
    double lr = 1e-5;
    int lr_decay_every = 5;       // epochs
    double lr_decay_factor = 0.1;  // "reduced by 90%"
    int epochs = 50;
    int batch_size = 32;
    double lambda_rank = 1.0;
    std::uint64_t seed = 0;
    long max_steps = 0;  // 0 = no step cap; useful for fixed-step experiments

    double lr_at(int epoch) const;
};

void to_json(nlohmann::json& j, const TrainOptions& o);
void from_json(const nlohmann::json& j, TrainOptions& o);

}  // namespace ugvq::model
