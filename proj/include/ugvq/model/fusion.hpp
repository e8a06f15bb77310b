#pragma once

#include <optional>
#include <string>

#include "ugvq/features/extractor.hpp"
#include "ugvq/model/config.hpp"
#include "ugvq/model/params.hpp"
#include "ugvq/types.hpp"

namespace ugvq::model {

// Symmetric cross-modality attention over one modality pair. Both query/key
// directions share the same projections, feedforward, and norms, so
// scma(a,b) equals scma(b,a) with its two halves swapped, exactly.
//
// Per direction (pre-norm residual blocks):
//   h   = q_in + MHA(LN_q(q_in), LN_kv(kv_in), LN_kv(kv_in))
//   out = mean over tokens of (h + FFN(LN_f(h)))
// The layer output is concat(out_ab, out_ba), width 2 * dim.
class ScmaLayer {
public:
    ScmaLayer(ParameterStore& store, const std::string& prefix, int dim, int heads, int ffn_dim,
              std::mt19937_64& rng);

    // a: T_a x dim vars, b: T_b x dim; returns 1 x 2*dim
    Var apply(Tape& tape, const std::vector<Var>& params, Var a, Var b) const;

    int dim() const { return dim_; }

private:
    Var attend(Tape& tape, const std::vector<Var>& p, Var q_in, Var kv_in) const;

    int dim_, heads_, ffn_dim_;
    // parameter indices into the shared store
    int ln_q_g_, ln_q_b_, ln_kv_g_, ln_kv_b_;
    int wq_, bq_, wk_, bk_, wv_, bv_, wo_, bo_;
    int ln_f_g_, ln_f_b_, w1_, b1_, w2_, b2_;
};

// The fusion stage and quality regressor: per-modality projections, three
// SCMA layers (spatial-text, spatial-temporal, temporal-text), learned lifts
// of the pooled single-modality features, and a two-layer MLP head.
class FusionModel {
public:
    FusionModel(const FusionConfig& config, std::uint64_t seed);

    const FusionConfig& config() const { return config_; }
    ParameterStore& params() { return params_; }
    const ParameterStore& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }

    // registers every parameter on the tape once; index order matches the store
    std::vector<Var> bind(Tape& tape) const;

    // unified quality feature F_q, 1 x fused_width()
    Var fuse(Tape& tape, const std::vector<Var>& params, const features::FeatureBundle& bundle) const;
    // regressor output, 1 x output_dims
    Var forward(Tape& tape, const std::vector<Var>& params,
                const features::FeatureBundle& bundle) const;

    // gradient-free convenience paths
    Eigen::RowVectorXd predict_row(const features::FeatureBundle& bundle) const;
    QualityTriple predict(const features::FeatureBundle& bundle) const;

    int fused_width() const { return config_.fused_width(); }

private:
    FusionConfig config_;
    std::uint64_t seed_;
    ParameterStore params_;

    int proj_spatial_w_ = -1, proj_spatial_b_ = -1;
    int proj_temporal_w_ = -1, proj_temporal_b_ = -1;
    int proj_text_w_ = -1, proj_text_b_ = -1;
    std::optional<ScmaLayer> scma_spatial_text_;
    std::optional<ScmaLayer> scma_spatial_temporal_;
    std::optional<ScmaLayer> scma_temporal_text_;
    int lift_spatial_w_ = -1, lift_spatial_b_ = -1;
    int lift_temporal_w_ = -1, lift_temporal_b_ = -1;
    int lift_text_w_ = -1, lift_text_b_ = -1;
    int head_w1_ = -1, head_b1_ = -1, head_w2_ = -1, head_b2_ = -1;
};

}  // namespace ugvq::model
