#include "ugvq/model/fusion.hpp"

#include <cmath>

namespace ugvq::model {

void FusionConfig::validate() const {
    if (spatial_input_dim < 1 || temporal_input_dim < 1 || text_input_dim < 1)
        throw ModelError("modality input dims must be >= 1");
    if (model_dim < 1 || fused_dim < 1 || regressor_hidden < 1 || output_dims < 1)
        throw ModelError("fusion dims must be >= 1");
    if (fused_dim != 2 * model_dim)
        throw ModelError("fused_dim must equal 2 * model_dim (" + std::to_string(2 * model_dim) +
                         "), got " + std::to_string(fused_dim));
    if (scma_heads < 1 || model_dim % scma_heads != 0)
        throw ModelError("scma_heads must divide model_dim");
    if (!use_spatial && !use_temporal && !use_text)
        throw ModelError("all modalities disabled; nothing to fuse");
}

int FusionConfig::enabled_original_count() const {
    return (use_spatial ? 1 : 0) + (use_temporal ? 1 : 0) + (use_text ? 1 : 0);
}

int FusionConfig::enabled_fused_count() const {
    if (!use_fusion) return 0;
    int n = 0;
    if (use_spatial && use_text) ++n;
    if (use_spatial && use_temporal) ++n;
    if (use_temporal && use_text) ++n;
    return n;
}

void to_json(nlohmann::json& j, const FusionConfig& c) {
    j = nlohmann::json{{"spatial_input_dim", c.spatial_input_dim},
                       {"temporal_input_dim", c.temporal_input_dim},
                       {"text_input_dim", c.text_input_dim},
                       {"model_dim", c.model_dim},
                       {"scma_heads", c.scma_heads},
                       {"scma_ffn_dim", c.scma_ffn_dim},
                       {"fused_dim", c.fused_dim},
                       {"regressor_hidden", c.regressor_hidden},
                       {"output_dims", c.output_dims},
                       {"use_spatial", c.use_spatial},
                       {"use_temporal", c.use_temporal},
                       {"use_text", c.use_text},
                       {"use_fusion", c.use_fusion}};
}

void from_json(const nlohmann::json& j, FusionConfig& c) {
    c = FusionConfig{};
    if (j.contains("spatial_input_dim")) j.at("spatial_input_dim").get_to(c.spatial_input_dim);
    if (j.contains("temporal_input_dim")) j.at("temporal_input_dim").get_to(c.temporal_input_dim);
    if (j.contains("text_input_dim")) j.at("text_input_dim").get_to(c.text_input_dim);
    if (j.contains("model_dim")) j.at("model_dim").get_to(c.model_dim);
    if (j.contains("scma_heads")) j.at("scma_heads").get_to(c.scma_heads);
    if (j.contains("scma_ffn_dim")) j.at("scma_ffn_dim").get_to(c.scma_ffn_dim);
    if (j.contains("fused_dim")) j.at("fused_dim").get_to(c.fused_dim);
    if (j.contains("regressor_hidden")) j.at("regressor_hidden").get_to(c.regressor_hidden);
    if (j.contains("output_dims")) j.at("output_dims").get_to(c.output_dims);
    if (j.contains("use_spatial")) j.at("use_spatial").get_to(c.use_spatial);
    if (j.contains("use_temporal")) j.at("use_temporal").get_to(c.use_temporal);
    if (j.contains("use_text")) j.at("use_text").get_to(c.use_text);
    if (j.contains("use_fusion")) j.at("use_fusion").get_to(c.use_fusion);
}

double TrainOptions::lr_at(int epoch) const {
    if (lr_decay_every <= 0) return lr;
    return lr * std::pow(lr_decay_factor, static_cast<double>(epoch / lr_decay_every));
}

void to_json(nlohmann::json& j, const TrainOptions& o) {
    j = nlohmann::json{{"lr", o.lr},
                       {"lr_decay_every", o.lr_decay_every},
                       {"lr_decay_factor", o.lr_decay_factor},
                       {"epochs", o.epochs},
                       {"batch_size", o.batch_size},
                       {"lambda_rank", o.lambda_rank},
                       {"seed", o.seed},
                       {"max_steps", o.max_steps}};
}

void from_json(const nlohmann::json& j, TrainOptions& o) {
    o = TrainOptions{};
    if (j.contains("lr")) j.at("lr").get_to(o.lr);
    if (j.contains("lr_decay_every")) j.at("lr_decay_every").get_to(o.lr_decay_every);
    if (j.contains("lr_decay_factor")) j.at("lr_decay_factor").get_to(o.lr_decay_factor);
    if (j.contains("epochs")) j.at("epochs").get_to(o.epochs);
    if (j.contains("batch_size")) j.at("batch_size").get_to(o.batch_size);
    if (j.contains("lambda_rank")) j.at("lambda_rank").get_to(o.lambda_rank);
    if (j.contains("seed")) j.at("seed").get_to(o.seed);
    if (j.contains("max_steps")) j.at("max_steps").get_to(o.max_steps);
}

ScmaLayer::ScmaLayer(ParameterStore& store, const std::string& prefix, int dim, int heads,
                     int ffn_dim, std::mt19937_64& rng)
    : dim_(dim), heads_(heads), ffn_dim_(ffn_dim) {
    auto lin = [&](const std::string& n, int r, int c) {
        return store.add(prefix + "." + n, r, c, Init::fan_in_uniform, rng);
    };
    auto vec = [&](const std::string& n, int c, Init init) { return store.add(prefix + "." + n, 1, c, init, rng); };
    ln_q_g_ = vec("ln_q.gamma", dim, Init::ones);
    ln_q_b_ = vec("ln_q.beta", dim, Init::zeros);
    ln_kv_g_ = vec("ln_kv.gamma", dim, Init::ones);
    ln_kv_b_ = vec("ln_kv.beta", dim, Init::zeros);
    wq_ = lin("wq", dim, dim);
    bq_ = vec("bq", dim, Init::zeros);
    wk_ = lin("wk", dim, dim);
    bk_ = vec("bk", dim, Init::zeros);
    wv_ = lin("wv", dim, dim);
    bv_ = vec("bv", dim, Init::zeros);
    wo_ = lin("wo", dim, dim);
    bo_ = vec("bo", dim, Init::zeros);
    ln_f_g_ = vec("ln_f.gamma", dim, Init::ones);
    ln_f_b_ = vec("ln_f.beta", dim, Init::zeros);
    w1_ = lin("ffn.w1", dim, ffn_dim);
    b1_ = vec("ffn.b1", ffn_dim, Init::zeros);
    w2_ = lin("ffn.w2", ffn_dim, dim);
    b2_ = vec("ffn.b2", dim, Init::zeros);
}

Var ScmaLayer::attend(Tape& tape, const std::vector<Var>& p, Var q_in, Var kv_in) const {
    Var qn = tape.layernorm_rows(q_in, p[ln_q_g_], p[ln_q_b_]);
    Var kn = tape.layernorm_rows(kv_in, p[ln_kv_g_], p[ln_kv_b_]);
    Var q = tape.add_rowvec(tape.matmul(qn, p[wq_]), p[bq_]);
    Var k = tape.add_rowvec(tape.matmul(kn, p[wk_]), p[bk_]);
    Var v = tape.add_rowvec(tape.matmul(kn, p[wv_]), p[bv_]);

    const int dk = dim_ / heads_;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
    std::vector<Var> head_outs;
    head_outs.reserve(heads_);
    for (int h = 0; h < heads_; ++h) {
        Var qh = tape.slice_cols(q, h * dk, dk);
        Var kh = tape.slice_cols(k, h * dk, dk);
        Var vh = tape.slice_cols(v, h * dk, dk);
        Var attn = tape.softmax_rows(tape.scale(tape.matmul_nt(qh, kh), scale));
        head_outs.push_back(tape.matmul(attn, vh));
    }
    Var mha = tape.add_rowvec(tape.matmul(tape.concat_cols(head_outs), p[wo_]), p[bo_]);
    Var h1 = tape.add(q_in, mha);

    Var fn = tape.layernorm_rows(h1, p[ln_f_g_], p[ln_f_b_]);
    Var hidden = tape.relu(tape.add_rowvec(tape.matmul(fn, p[w1_]), p[b1_]));
    Var ffn = tape.add_rowvec(tape.matmul(hidden, p[w2_]), p[b2_]);
    Var out_tokens = tape.add(h1, ffn);
    return tape.mean_rows(out_tokens);
}

Var ScmaLayer::apply(Tape& tape, const std::vector<Var>& params, Var a, Var b) const {
    if (tape.val(a).cols() != dim_ || tape.val(b).cols() != dim_)
        throw ModelError("scma width mismatch: tokens must be " + std::to_string(dim_) + " wide");
    if (tape.val(a).rows() < 1 || tape.val(b).rows() < 1)
        throw ModelError("scma requires nonempty token sets");
    Var f_ab = attend(tape, params, a, b);
    Var f_ba = attend(tape, params, b, a);
    return tape.concat_cols({f_ab, f_ba});
}

FusionModel::FusionModel(const FusionConfig& config, std::uint64_t seed)
    : config_(config), seed_(seed) {
    config_.validate();
    std::mt19937_64 rng(seed);
    const int d = config_.model_dim;

    // parameters are created unconditionally so ablation flags change the
    // forward graph, never the checkpoint layout
    proj_spatial_w_ = params_.add("proj_spatial.w", config_.spatial_input_dim, d, Init::fan_in_uniform, rng);
    proj_spatial_b_ = params_.add("proj_spatial.b", 1, d, Init::zeros, rng);
    proj_temporal_w_ = params_.add("proj_temporal.w", config_.temporal_input_dim, d, Init::fan_in_uniform, rng);
    proj_temporal_b_ = params_.add("proj_temporal.b", 1, d, Init::zeros, rng);
    proj_text_w_ = params_.add("proj_text.w", config_.text_input_dim, d, Init::fan_in_uniform, rng);
    proj_text_b_ = params_.add("proj_text.b", 1, d, Init::zeros, rng);

    scma_spatial_text_.emplace(params_, "scma_sx", d, config_.scma_heads, config_.scma_ffn_dim, rng);
    scma_spatial_temporal_.emplace(params_, "scma_st", d, config_.scma_heads, config_.scma_ffn_dim, rng);
    scma_temporal_text_.emplace(params_, "scma_tx", d, config_.scma_heads, config_.scma_ffn_dim, rng);

    lift_spatial_w_ = params_.add("lift_spatial.w", d, config_.fused_dim, Init::fan_in_uniform, rng);
    lift_spatial_b_ = params_.add("lift_spatial.b", 1, config_.fused_dim, Init::zeros, rng);
    lift_temporal_w_ = params_.add("lift_temporal.w", d, config_.fused_dim, Init::fan_in_uniform, rng);
    lift_temporal_b_ = params_.add("lift_temporal.b", 1, config_.fused_dim, Init::zeros, rng);
    lift_text_w_ = params_.add("lift_text.w", d, config_.fused_dim, Init::fan_in_uniform, rng);
    lift_text_b_ = params_.add("lift_text.b", 1, config_.fused_dim, Init::zeros, rng);

    head_w1_ = params_.add("head.w1", config_.fused_width(), config_.regressor_hidden,
                           Init::fan_in_uniform, rng);
    head_b1_ = params_.add("head.b1", 1, config_.regressor_hidden, Init::zeros, rng);
    head_w2_ = params_.add("head.w2", config_.regressor_hidden, config_.output_dims,
                           Init::fan_in_uniform, rng);
    head_b2_ = params_.add("head.b2", 1, config_.output_dims, Init::zeros, rng);
}

std::vector<Var> FusionModel::bind(Tape& tape) const {
    std::vector<Var> vars;
    vars.reserve(params_.count());
    for (std::size_t i = 0; i < params_.count(); ++i)
        vars.push_back(tape.input(params_.value(static_cast<int>(i))));
    return vars;
}

Var FusionModel::fuse(Tape& tape, const std::vector<Var>& p,
                      const features::FeatureBundle& bundle) const {
    if (bundle.spatial_tokens.cols() != config_.spatial_input_dim ||
        bundle.temporal_tokens.cols() != config_.temporal_input_dim ||
        bundle.text_token.cols() != config_.text_input_dim)
        throw ModelError("feature bundle dims do not match the fusion config");

    Var spatial, temporal, text;
    if (config_.use_spatial)
        spatial = tape.add_rowvec(tape.matmul(tape.input(bundle.spatial_tokens), p[proj_spatial_w_]),
                                  p[proj_spatial_b_]);
    if (config_.use_temporal)
        temporal = tape.add_rowvec(tape.matmul(tape.input(bundle.temporal_tokens), p[proj_temporal_w_]),
                                   p[proj_temporal_b_]);
    if (config_.use_text)
        text = tape.add_rowvec(tape.matmul(tape.input(bundle.text_token), p[proj_text_w_]),
                               p[proj_text_b_]);

    // F_q = concat(spatial, temporal, text, fuse_sx, fuse_st, fuse_tx)
    std::vector<Var> parts;
    if (config_.use_spatial)
        parts.push_back(tape.add_rowvec(tape.matmul(tape.mean_rows(spatial), p[lift_spatial_w_]),
                                        p[lift_spatial_b_]));
    if (config_.use_temporal)
        parts.push_back(tape.add_rowvec(tape.matmul(tape.mean_rows(temporal), p[lift_temporal_w_]),
                                        p[lift_temporal_b_]));
    if (config_.use_text)
        parts.push_back(
            tape.add_rowvec(tape.matmul(tape.mean_rows(text), p[lift_text_w_]), p[lift_text_b_]));
    if (config_.use_fusion) {
        if (config_.use_spatial && config_.use_text)
            parts.push_back(scma_spatial_text_->apply(tape, p, spatial, text));
        if (config_.use_spatial && config_.use_temporal)
            parts.push_back(scma_spatial_temporal_->apply(tape, p, spatial, temporal));
        if (config_.use_temporal && config_.use_text)
            parts.push_back(scma_temporal_text_->apply(tape, p, temporal, text));
    }
    return tape.concat_cols(parts);
}

Var FusionModel::forward(Tape& tape, const std::vector<Var>& p,
                         const features::FeatureBundle& bundle) const {
    Var fq = fuse(tape, p, bundle);
    if (tape.val(fq).cols() != config_.fused_width())
        throw ModelError("unified feature width mismatch");
    Var hidden = tape.relu(tape.add_rowvec(tape.matmul(fq, p[head_w1_]), p[head_b1_]));
    return tape.add_rowvec(tape.matmul(hidden, p[head_w2_]), p[head_b2_]);
}

Eigen::RowVectorXd FusionModel::predict_row(const features::FeatureBundle& bundle) const {
    Tape tape;
    auto p = bind(tape);
    Var out = forward(tape, p, bundle);
    return tape.val(out).row(0);
}

QualityTriple FusionModel::predict(const features::FeatureBundle& bundle) const {
    Eigen::RowVectorXd row = predict_row(bundle);
    QualityTriple q;
    q.spatial = row.size() > 0 ? row[0] : 0.0;
    q.temporal = row.size() > 1 ? row[1] : 0.0;
    q.alignment = row.size() > 2 ? row[2] : 0.0;
    return q;
}

}  // namespace ugvq::model
