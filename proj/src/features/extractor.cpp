#include "ugvq/features/extractor.hpp"

#include "ugvq/common/hash.hpp"

namespace ugvq::features {

void FeatureBundle::check_finite() const {
    if (!spatial_tokens.allFinite() || !temporal_tokens.allFinite() || !text_token.allFinite())
        throw FeatureError("feature bundle contains non-finite values");
}

Eigen::MatrixXd PerFrameEncoder::encode_keyframes(const corpus::VideoClipDesc&,
                                                  const std::vector<corpus::Frame>& keyframes) const {
    if (keyframes.empty()) throw FeatureError("no keyframes to encode");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(keyframes.size()), info().output_dim);
    for (std::size_t i = 0; i < keyframes.size(); ++i) {
        Eigen::VectorXd v = encode_frame(keyframes[i]);
        if (v.size() != info().output_dim)
            throw FeatureError("frame encoder '" + info().name + "' returned " +
                               std::to_string(v.size()) + " dims, declared " +
                               std::to_string(info().output_dim));
        out.row(static_cast<Eigen::Index>(i)) = v.transpose();
    }
    return out;
}

Eigen::MatrixXd encode_spatial(const corpus::VideoClipDesc& clip,
                               const std::vector<corpus::Frame>& frames,
                               const FrameEncoder& encoder,
                               const TransformerAggregator& aggregator,
                               int keyframe_count) {
    if (encoder.info().kind != BackboneKind::frame_encoder)
        throw FeatureError("backbone '" + encoder.info().name + "' is not a frame encoder");
    if (frames.empty()) throw FeatureError("video '" + clip.video_id + "' decoded to zero frames");

    KeyframePlan plan = plan_keyframes(static_cast<int>(frames.size()), keyframe_count);
    std::vector<corpus::Frame> keyframes;
    keyframes.reserve(plan.indices.size());
    int edge = encoder.expected_input_edge();
    for (int idx : plan.indices) {
        const corpus::Frame& f = frames[static_cast<std::size_t>(idx)];
        keyframes.push_back(edge > 0 && (f.height != edge || f.width != edge)
                                ? corpus::resize_area(f, edge, edge)
                                : f);
    }
    Eigen::MatrixXd embedded = encoder.encode_keyframes(clip, keyframes);
    if (embedded.cols() != encoder.info().output_dim ||
        embedded.rows() != static_cast<Eigen::Index>(keyframes.size()))
        throw FeatureError("frame encoder '" + encoder.info().name + "' returned an unexpected shape");
    return aggregator.apply(embedded);
}

Eigen::MatrixXd encode_temporal(const corpus::VideoClipDesc& clip,
                                const std::vector<corpus::Frame>& frames,
                                const MotionEncoder& encoder) {
    if (encoder.info().kind != BackboneKind::motion_encoder)
        throw FeatureError("backbone '" + encoder.info().name + "' is not a motion encoder");
    Eigen::MatrixXd tokens = encoder.encode_clip(clip, frames);
    if (tokens.rows() != 2 || tokens.cols() != encoder.info().output_dim)
        throw FeatureError("motion encoder '" + encoder.info().name +
                           "' must return 2 x output_dim pathway tokens");
    return tokens;
}

Eigen::MatrixXd encode_text(const corpus::PromptRecord& prompt, const TextEncoder& encoder) {
    if (encoder.info().kind != BackboneKind::text_encoder)
        throw FeatureError("backbone '" + encoder.info().name + "' is not a text encoder");
    if (corpus::word_count(prompt.text) == 0)
        throw FeatureError("empty prompt '" + prompt.prompt_id + "'");
    Eigen::VectorXd v = encoder.encode_prompt(prompt);
    if (v.size() != encoder.info().output_dim)
        throw FeatureError("text encoder '" + encoder.info().name + "' returned " +
                           std::to_string(v.size()) + " dims, declared " +
                           std::to_string(encoder.info().output_dim));
    return v.transpose();
}

FeatureExtractor::FeatureExtractor(std::shared_ptr<FrameEncoder> frame_encoder,
                                   std::shared_ptr<MotionEncoder> motion_encoder,
                                   std::shared_ptr<TextEncoder> text_encoder,
                                   const ExtractorConfig& config)
    : frame_encoder_(std::move(frame_encoder)),
      motion_encoder_(std::move(motion_encoder)),
      text_encoder_(std::move(text_encoder)),
      config_(config),
      aggregator_(frame_encoder_->info().output_dim, config.keyframes, config.aggregator) {
    if (config_.keyframes < 1) throw FeatureError("keyframe count must be >= 1");
    fingerprint_ = Fnv1a()
                       .str(frame_encoder_->info().name)
                       .i64(frame_encoder_->info().output_dim)
                       .u64(frame_encoder_->info().weights_digest)
                       .str(motion_encoder_->info().name)
                       .i64(motion_encoder_->info().output_dim)
                       .u64(motion_encoder_->info().weights_digest)
                       .str(text_encoder_->info().name)
                       .i64(text_encoder_->info().output_dim)
                       .u64(text_encoder_->info().weights_digest)
                       .i64(config_.keyframes)
                       .u64(aggregator_.digest())
                       .value();
}

FeatureBundle FeatureExtractor::extract(const corpus::VideoClipDesc& clip,
                                        const corpus::PromptRecord& prompt,
                                        const std::vector<corpus::Frame>& frames) const {
    ++encode_count_;
    FeatureBundle bundle;
    bundle.spatial_tokens = encode_spatial(clip, frames, *frame_encoder_, aggregator_, config_.keyframes);
    bundle.temporal_tokens = encode_temporal(clip, frames, *motion_encoder_);
    bundle.text_token = encode_text(prompt, *text_encoder_);
    bundle.check_finite();
    return bundle;
}

}  // namespace ugvq::features
