#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ugvq/corpus/frame.hpp"
#include "ugvq/corpus/types.hpp"

namespace ugvq::features {

class FeatureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BackboneKind { frame_encoder, motion_encoder, text_encoder };

const char* to_string(BackboneKind k);

struct BackboneInfo {
    std::string name;
    int output_dim = 0;
    BackboneKind kind = BackboneKind::frame_encoder;
    // digest of whatever determines the weights (seed, file contents);
    // cache entries are invalidated when it changes
    std::uint64_t weights_digest = 0;
    // fine-tuning is not implemented; the flag is carried for adapters
    bool trainable = false;
};

class Backbone {
public:
    virtual ~Backbone() = default;
    virtual const BackboneInfo& info() const = 0;
};

// Keyframe-level spatial encoder. Implementations that embed one frame at
// a time derive from PerFrameEncoder below; adapters that look features up
// by video id override encode_keyframes directly.
class FrameEncoder : public Backbone {
public:
    // returns keyframes.size() x output_dim
    virtual Eigen::MatrixXd encode_keyframes(const corpus::VideoClipDesc& clip,
                                             const std::vector<corpus::Frame>& keyframes) const = 0;
    // fixed input edge the module should resize frames to; 0 = any size
    virtual int expected_input_edge() const { return 0; }
};

class PerFrameEncoder : public FrameEncoder {
public:
    virtual Eigen::VectorXd encode_frame(const corpus::Frame& frame) const = 0;
    Eigen::MatrixXd encode_keyframes(const corpus::VideoClipDesc& clip,
                                     const std::vector<corpus::Frame>& keyframes) const override;
};

// Two-pathway motion encoder: returns a 2 x output_dim matrix, row 0 the
// slow-pathway token, row 1 the fast-pathway token.
class MotionEncoder : public Backbone {
public:
    virtual Eigen::MatrixXd encode_clip(const corpus::VideoClipDesc& clip,
                                        const std::vector<corpus::Frame>& frames) const = 0;
    virtual int min_frames() const { return 1; }
};

class TextEncoder : public Backbone {
public:
    virtual Eigen::VectorXd encode_prompt(const corpus::PromptRecord& prompt) const = 0;
    virtual int max_tokens() const { return 0; }  // 0 = unlimited
};

}  // namespace ugvq::features
