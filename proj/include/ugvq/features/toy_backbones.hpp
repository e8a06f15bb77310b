#pragma once

#include "ugvq/features/backbone.hpp"

namespace ugvq::features {

// Deterministic laptop-scale substitutes for the pretrained backbones.
// They are honest feature extractors, just tiny: the first coordinates
// expose interpretable frame statistics so synthetic training fixtures can
// define labels the model can actually recover.

// Per-frame encoder: [pixel mean, pixel std, seeded random projections of
// an 8x8 grayscale downsample].
class ToyFrameEncoder : public PerFrameEncoder {
public:
    explicit ToyFrameEncoder(int output_dim = 16, std::uint64_t seed = 1);
    const BackboneInfo& info() const override { return info_; }
    Eigen::VectorXd encode_frame(const corpus::Frame& frame) const override;

private:
    BackboneInfo info_;
    Eigen::MatrixXd projection_;  // (output_dim-2) x 64
};

// Two-pathway motion encoder. Slow pathway: mean over frames of a per-frame
// embedding (permutation invariant). Fast pathway: statistics of consecutive
// frame differences (order sensitive).
class ToyMotionEncoder : public MotionEncoder {
public:
    explicit ToyMotionEncoder(int output_dim = 16, int min_frames = 2, std::uint64_t seed = 2);
    const BackboneInfo& info() const override { return info_; }
    int min_frames() const override { return min_frames_; }
    Eigen::MatrixXd encode_clip(const corpus::VideoClipDesc& clip,
                                const std::vector<corpus::Frame>& frames) const override;

    // exposed for closed-form test oracles
    Eigen::VectorXd frame_embedding(const corpus::Frame& frame) const;

private:
    BackboneInfo info_;
    int min_frames_;
    Eigen::MatrixXd projection_;  // (output_dim-2) x 64
};

// Bag-of-hashed-words text encoder: coordinate word_index(w) accumulates
// the count of word w. Case-insensitive, splits on non-alphanumerics.
class ToyTextEncoder : public TextEncoder {
public:
    explicit ToyTextEncoder(int output_dim = 32, int max_tokens = 77);
    const BackboneInfo& info() const override { return info_; }
    int max_tokens() const override { return max_tokens_; }
    Eigen::VectorXd encode_prompt(const corpus::PromptRecord& prompt) const override;

    static std::vector<std::string> tokenize(const std::string& text);
    static int word_index(const std::string& word, int output_dim);

private:
    BackboneInfo info_;
    int max_tokens_;
};

}  // namespace ugvq::features
