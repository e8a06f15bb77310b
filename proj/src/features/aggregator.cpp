#include "ugvq/features/aggregator.hpp"

#include <cmath>
#include <random>

#include "ugvq/common/hash.hpp"

namespace ugvq::features {

namespace {

Eigen::MatrixXd fan_in_uniform(int rows, int cols, std::mt19937_64& rng) {
    double bound = 1.0 / std::sqrt(static_cast<double>(rows));
    std::uniform_real_distribution<double> u(-bound, bound);
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = u(rng);
    return m;
}

Eigen::MatrixXd layernorm_rows(const Eigen::MatrixXd& x, const Eigen::VectorXd& gamma,
                               const Eigen::VectorXd& beta) {
    constexpr double eps = 1e-5;
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double mean = x.row(r).mean();
        double var = (x.row(r).array() - mean).square().mean();
        out.row(r) = (((x.row(r).array() - mean) / std::sqrt(var + eps)) * gamma.transpose().array() +
                      beta.transpose().array());
    }
    return out;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double mx = x.row(r).maxCoeff();
        Eigen::ArrayXd e = (x.row(r).array() - mx).exp();
        out.row(r) = (e / e.sum()).transpose();
    }
    return out;
}

}  // namespace

TransformerAggregator::TransformerAggregator(int width, int tokens, const AggregatorConfig& config)
    : width_(width), tokens_(tokens), config_(config) {
    if (width < 1 || tokens < 1) throw FeatureError("aggregator needs positive width and token count");
    if (config.layers < 0) throw FeatureError("aggregator layer count must be >= 0");
    if (config.layers > 0 && (config.heads < 1 || width % config.heads != 0))
        throw FeatureError("aggregator width " + std::to_string(width) +
                           " is not divisible by head count " + std::to_string(config.heads));

    std::mt19937_64 rng(config.seed);
    // small seeded positional table (frozen like the rest)
    positional_ = Eigen::MatrixXd::Zero(tokens, width);
    if (config.positional && config.layers > 0) {
        std::normal_distribution<double> g(0.0, 0.02);
        for (int t = 0; t < tokens; ++t)
            for (int c = 0; c < width; ++c) positional_(t, c) = g(rng);
    }
    for (int l = 0; l < config.layers; ++l) {
        Layer layer;
        layer.wq = fan_in_uniform(width, width, rng);
        layer.wk = fan_in_uniform(width, width, rng);
        layer.wv = fan_in_uniform(width, width, rng);
        layer.wo = fan_in_uniform(width, width, rng);
        layer.bq = Eigen::VectorXd::Zero(width);
        layer.bk = Eigen::VectorXd::Zero(width);
        layer.bv = Eigen::VectorXd::Zero(width);
        layer.bo = Eigen::VectorXd::Zero(width);
        layer.ln1_gamma = Eigen::VectorXd::Ones(width);
        layer.ln1_beta = Eigen::VectorXd::Zero(width);
        layer.ln2_gamma = Eigen::VectorXd::Ones(width);
        layer.ln2_beta = Eigen::VectorXd::Zero(width);
        layer.w1 = fan_in_uniform(width, config.ffn_dim, rng);
        layer.b1 = Eigen::VectorXd::Zero(config.ffn_dim);
        layer.w2 = fan_in_uniform(config.ffn_dim, width, rng);
        layer.b2 = Eigen::VectorXd::Zero(width);
        layers_.push_back(std::move(layer));
    }
    digest_ = Fnv1a()
                  .str("aggregator")
                  .i64(width)
                  .i64(tokens)
                  .i64(config.layers)
                  .i64(config.heads)
                  .i64(config.ffn_dim)
                  .i64(config.positional ? 1 : 0)
                  .u64(config.seed)
                  .value();
}

Eigen::MatrixXd TransformerAggregator::apply(const Eigen::MatrixXd& tokens) const {
    if (tokens.cols() != width_)
        throw FeatureError("aggregator width mismatch: tokens have " + std::to_string(tokens.cols()) +
                           " columns, aggregator expects " + std::to_string(width_));
    if (layers_.empty()) return tokens;  // identity
    if (tokens.rows() != tokens_)
        throw FeatureError("aggregator token count mismatch: got " + std::to_string(tokens.rows()) +
                           ", expected " + std::to_string(tokens_));

    Eigen::MatrixXd x = tokens;
    if (config_.positional) x += positional_;
    const int heads = config_.heads;
    const int dk = width_ / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

    for (const Layer& layer : layers_) {
        Eigen::MatrixXd n = layernorm_rows(x, layer.ln1_gamma, layer.ln1_beta);
        Eigen::MatrixXd q = (n * layer.wq).rowwise() + layer.bq.transpose();
        Eigen::MatrixXd k = (n * layer.wk).rowwise() + layer.bk.transpose();
        Eigen::MatrixXd v = (n * layer.wv).rowwise() + layer.bv.transpose();
        Eigen::MatrixXd heads_out(x.rows(), width_);
        for (int h = 0; h < heads; ++h) {
            auto qh = q.middleCols(h * dk, dk);
            auto kh = k.middleCols(h * dk, dk);
            auto vh = v.middleCols(h * dk, dk);
            Eigen::MatrixXd attn = softmax_rows(qh * kh.transpose() * scale);
            heads_out.middleCols(h * dk, dk) = attn * vh;
        }
        x += (heads_out * layer.wo).rowwise() + layer.bo.transpose();

        Eigen::MatrixXd n2 = layernorm_rows(x, layer.ln2_gamma, layer.ln2_beta);
        Eigen::MatrixXd hidden = ((n2 * layer.w1).rowwise() + layer.b1.transpose()).cwiseMax(0.0);
        x += (hidden * layer.w2).rowwise() + layer.b2.transpose();
    }
    return x;
}

}  // namespace ugvq::features
