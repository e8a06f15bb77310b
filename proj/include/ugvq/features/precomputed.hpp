#pragma once

#include <filesystem>
#include <unordered_map>

#include "ugvq/features/backbone.hpp"

namespace ugvq::features {

// Bridge for production backbones (pretrained image encoder, two-pathway
// video network, contrastive text encoder): their outputs are exported by
// the user's own inference pipeline into a feature pack file and looked up
// here by id. The pack digest doubles as the weights digest, so swapping
// the file invalidates the cache like a weight change would.
//
// Pack layout: magic "UGVP", u8 version, u8 kind, u32 dim, u32 count, then
// count records of (id string, u32 rows, u32 cols, rows*cols f64).
class FeaturePack {
public:
    static FeaturePack load(const std::filesystem::path& path, BackboneKind expected_kind);
    static void save(const std::filesystem::path& path, BackboneKind kind, int dim,
                     const std::unordered_map<std::string, Eigen::MatrixXd>& entries);

    const Eigen::MatrixXd& lookup(const std::string& id) const;
    bool contains(const std::string& id) const { return entries_.count(id) > 0; }
    int dim() const { return dim_; }
    BackboneKind kind() const { return kind_; }
    std::uint64_t digest() const { return digest_; }

private:
    std::unordered_map<std::string, Eigen::MatrixXd> entries_;
    int dim_ = 0;
    BackboneKind kind_ = BackboneKind::frame_encoder;
    std::uint64_t digest_ = 0;
};

// Spatial features precomputed per video: one N_s x dim matrix per video_id
// (pre-aggregator keyframe embeddings).
class PrecomputedFrameEncoder : public FrameEncoder {
public:
    explicit PrecomputedFrameEncoder(const std::filesystem::path& pack_path);
    const BackboneInfo& info() const override { return info_; }
    Eigen::MatrixXd encode_keyframes(const corpus::VideoClipDesc& clip,
                                     const std::vector<corpus::Frame>& keyframes) const override;

private:
    BackboneInfo info_;
    FeaturePack pack_;
};

// Motion features precomputed per video: one 2 x dim matrix per video_id.
class PrecomputedMotionEncoder : public MotionEncoder {
public:
    explicit PrecomputedMotionEncoder(const std::filesystem::path& pack_path);
    const BackboneInfo& info() const override { return info_; }
    Eigen::MatrixXd encode_clip(const corpus::VideoClipDesc& clip,
                                const std::vector<corpus::Frame>& frames) const override;

private:
    BackboneInfo info_;
    FeaturePack pack_;
};

// Text features precomputed per prompt: one 1 x dim row per prompt_id.
class PrecomputedTextEncoder : public TextEncoder {
public:
    explicit PrecomputedTextEncoder(const std::filesystem::path& pack_path);
    const BackboneInfo& info() const override { return info_; }
    Eigen::VectorXd encode_prompt(const corpus::PromptRecord& prompt) const override;

private:
    BackboneInfo info_;
    FeaturePack pack_;
};

}  // namespace ugvq::features
