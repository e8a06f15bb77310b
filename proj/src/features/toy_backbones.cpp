#include "ugvq/features/toy_backbones.hpp"

#include <cctype>
#include <cmath>
#include <random>

#include "ugvq/common/hash.hpp"

namespace ugvq::features {

namespace {

Eigen::MatrixXd seeded_projection(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = u(rng) / std::sqrt(static_cast<double>(cols));
    return m;
}

// 8x8 grayscale downsample flattened to 64 values
Eigen::VectorXd gray8x8(const corpus::Frame& f) {
    corpus::Frame small = corpus::resize_area(f, 8, 8);
    Eigen::VectorXd v(64);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            v[y * 8 + x] = (small.at(y, x, 0) + small.at(y, x, 1) + small.at(y, x, 2)) / 3.0;
    return v;
}

std::uint64_t toy_digest(const std::string& name, int output_dim, std::uint64_t seed) {
    return Fnv1a().str(name).i64(output_dim).u64(seed).value();
}

}  // namespace

ToyFrameEncoder::ToyFrameEncoder(int output_dim, std::uint64_t seed) {
    if (output_dim < 1) throw FeatureError("output_dim must be >= 1");
    info_.name = "toy_frame";
    info_.output_dim = output_dim;
    info_.kind = BackboneKind::frame_encoder;
    info_.weights_digest = toy_digest(info_.name, output_dim, seed);
    int proj_rows = std::max(0, output_dim - 2);
    projection_ = seeded_projection(proj_rows, 64, seed);
}

Eigen::VectorXd ToyFrameEncoder::encode_frame(const corpus::Frame& frame) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(info_.output_dim);
    out[0] = frame.mean();
    if (info_.output_dim > 1) out[1] = std::sqrt(frame.variance());
    if (projection_.rows() > 0) out.tail(projection_.rows()) = projection_ * gray8x8(frame);
    return out;
}

ToyMotionEncoder::ToyMotionEncoder(int output_dim, int min_frames, std::uint64_t seed)
    : min_frames_(min_frames) {
    if (output_dim < 1) throw FeatureError("output_dim must be >= 1");
    if (min_frames < 1) throw FeatureError("min_frames must be >= 1");
    info_.name = "toy_motion";
    info_.output_dim = output_dim;
    info_.kind = BackboneKind::motion_encoder;
    info_.weights_digest = Fnv1a().str(info_.name).i64(output_dim).i64(min_frames).u64(seed).value();
    projection_ = seeded_projection(std::max(0, output_dim - 2), 64, seed);
}

Eigen::VectorXd ToyMotionEncoder::frame_embedding(const corpus::Frame& frame) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(info_.output_dim);
    out[0] = frame.mean();
    if (info_.output_dim > 1) out[1] = std::sqrt(frame.variance());
    if (projection_.rows() > 0) out.tail(projection_.rows()) = projection_ * gray8x8(frame);
    return out;
}

Eigen::MatrixXd ToyMotionEncoder::encode_clip(const corpus::VideoClipDesc& clip,
                                              const std::vector<corpus::Frame>& frames) const {
    if (static_cast<int>(frames.size()) < min_frames_)
        throw FeatureError("video '" + clip.video_id + "' has " + std::to_string(frames.size()) +
                           " frames; motion encoder '" + info_.name + "' requires at least " +
                           std::to_string(min_frames_));

    Eigen::VectorXd slow = Eigen::VectorXd::Zero(info_.output_dim);
    for (const auto& f : frames) slow += frame_embedding(f);
    slow /= static_cast<double>(frames.size());

    // fast pathway: statistics of consecutive frame differences
    Eigen::VectorXd fast = Eigen::VectorXd::Zero(info_.output_dim);
    if (frames.size() >= 2) {
        for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
            const auto& a = frames[i];
            const auto& b = frames[i + 1];
            corpus::Frame diff(a.height, a.width);
            double abs_sum = 0.0;
            for (std::size_t k = 0; k < a.data.size(); ++k) {
                double d = b.data[k] - a.data[k];
                diff.data[k] = std::abs(d);
                abs_sum += std::abs(d);
            }
            Eigen::VectorXd h = Eigen::VectorXd::Zero(info_.output_dim);
            h[0] = abs_sum / static_cast<double>(a.data.size());
            if (info_.output_dim > 1) h[1] = std::sqrt(corpus::mean_sq_diff(a, b));
            if (projection_.rows() > 0) h.tail(projection_.rows()) = projection_ * gray8x8(diff);
            fast += h;
        }
        fast /= static_cast<double>(frames.size() - 1);
    }

    Eigen::MatrixXd out(2, info_.output_dim);
    out.row(0) = slow.transpose();
    out.row(1) = fast.transpose();
    return out;
}

ToyTextEncoder::ToyTextEncoder(int output_dim, int max_tokens) : max_tokens_(max_tokens) {
    if (output_dim < 1) throw FeatureError("output_dim must be >= 1");
    info_.name = "toy_text_hash";
    info_.output_dim = output_dim;
    info_.kind = BackboneKind::text_encoder;
    info_.weights_digest = Fnv1a().str(info_.name).i64(output_dim).i64(max_tokens).value();
}

std::vector<std::string> ToyTextEncoder::tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

int ToyTextEncoder::word_index(const std::string& word, int output_dim) {
    return static_cast<int>(fnv1a(word) % static_cast<std::uint64_t>(output_dim));
}

Eigen::VectorXd ToyTextEncoder::encode_prompt(const corpus::PromptRecord& prompt) const {
    auto tokens = tokenize(prompt.text);
    if (tokens.empty()) throw FeatureError("empty prompt '" + prompt.prompt_id + "'");
    if (max_tokens_ > 0 && static_cast<int>(tokens.size()) > max_tokens_)
        throw FeatureError("prompt '" + prompt.prompt_id + "' has " + std::to_string(tokens.size()) +
                           " tokens; text encoder '" + info_.name + "' accepts at most " +
                           std::to_string(max_tokens_));
    Eigen::VectorXd v = Eigen::VectorXd::Zero(info_.output_dim);
    for (const auto& w : tokens) v[word_index(w, info_.output_dim)] += 1.0;
    return v;
}

}  // namespace ugvq::features
