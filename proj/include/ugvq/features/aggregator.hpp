#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "ugvq/features/backbone.hpp"

namespace ugvq::features {

struct AggregatorConfig {
    int layers = 8;
    int heads = 2;
    int ffn_dim = 2048;
    bool positional = true;  // learned positional encoding over the keyframe axis
    std::uint64_t seed = 3;
};

// Frozen pre-norm Transformer encoder applied over the keyframe tokens.
// Weights are seeded at construction and never updated (the trainable part
// of the pipeline lives in the fusion model). layers == 0 is the identity.
class TransformerAggregator {
public:
    // width = token width (the frame encoder's output_dim), tokens = N_s
    TransformerAggregator(int width, int tokens, const AggregatorConfig& config);

    Eigen::MatrixXd apply(const Eigen::MatrixXd& tokens) const;  // N_s x width -> N_s x width

    const AggregatorConfig& config() const { return config_; }
    std::uint64_t digest() const { return digest_; }

private:
    struct Layer {
        Eigen::MatrixXd wq, wk, wv, wo;  // width x width
        Eigen::VectorXd bq, bk, bv, bo;
        Eigen::VectorXd ln1_gamma, ln1_beta, ln2_gamma, ln2_beta;
        Eigen::MatrixXd w1, w2;  // width x ffn, ffn x width
        Eigen::VectorXd b1, b2;
    };

    int width_;
    int tokens_;
    AggregatorConfig config_;
    Eigen::MatrixXd positional_;  // tokens x width
    std::vector<Layer> layers_;
    std::uint64_t digest_ = 0;
};

}  // namespace ugvq::features
