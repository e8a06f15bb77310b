#pragma once

#include <memory>

#include "ugvq/features/aggregator.hpp"
#include "ugvq/features/backbone.hpp"
#include "ugvq/features/keyframes.hpp"

namespace ugvq::features {

// Spatial, temporal, and text feature tokens for one (video, prompt) pair.
struct FeatureBundle {
    Eigen::MatrixXd spatial_tokens;   // N_s x D_s, post-aggregation
    Eigen::MatrixXd temporal_tokens;  // 2 x D_t (slow, fast)
    Eigen::MatrixXd text_token;       // 1 x D_x

    void check_finite() const;  // throws FeatureError on NaN/Inf
};

// Keyframe selection + per-frame embedding + frozen sequence encoder.
Eigen::MatrixXd encode_spatial(const corpus::VideoClipDesc& clip,
                               const std::vector<corpus::Frame>& frames,
                               const FrameEncoder& encoder,
                               const TransformerAggregator& aggregator,
                               int keyframe_count);

Eigen::MatrixXd encode_temporal(const corpus::VideoClipDesc& clip,
                                const std::vector<corpus::Frame>& frames,
                                const MotionEncoder& encoder);

Eigen::MatrixXd encode_text(const corpus::PromptRecord& prompt, const TextEncoder& encoder);

struct ExtractorConfig {
    int keyframes = 8;
    AggregatorConfig aggregator;
};

// Owns the three backbones plus the aggregator; produces FeatureBundles.
// Reentrant for concurrent extraction over distinct clips.
class FeatureExtractor {
public:
    FeatureExtractor(std::shared_ptr<FrameEncoder> frame_encoder,
                     std::shared_ptr<MotionEncoder> motion_encoder,
                     std::shared_ptr<TextEncoder> text_encoder, const ExtractorConfig& config);

    FeatureBundle extract(const corpus::VideoClipDesc& clip, const corpus::PromptRecord& prompt,
                          const std::vector<corpus::Frame>& frames) const;

    // covers the three backbones, the keyframe count, and the aggregator
    std::uint64_t fingerprint() const { return fingerprint_; }
    const ExtractorConfig& config() const { return config_; }
    int spatial_dim() const { return frame_encoder_->info().output_dim; }
    int temporal_dim() const { return motion_encoder_->info().output_dim; }
    int text_dim() const { return text_encoder_->info().output_dim; }

    // number of extract() calls that actually ran the backbones
    long encode_count() const { return encode_count_; }

private:
    std::shared_ptr<FrameEncoder> frame_encoder_;
    std::shared_ptr<MotionEncoder> motion_encoder_;
    std::shared_ptr<TextEncoder> text_encoder_;
    ExtractorConfig config_;
    TransformerAggregator aggregator_;
    std::uint64_t fingerprint_ = 0;
    mutable long encode_count_ = 0;
};

}  // namespace ugvq::features
