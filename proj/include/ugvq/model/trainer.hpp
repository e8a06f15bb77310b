#pragma once

#include <functional>
#include <optional>
#include <random>

#include <json.hpp>

#include "ugvq/model/fusion.hpp"
#include "ugvq/model/loss.hpp"

namespace ugvq::model {

struct EpochMetrics {
    int epoch = 0;
    double lr = 0.0;
    double train_loss = 0.0;
    std::vector<std::optional<double>> val_srcc;  // per output dimension
    std::optional<double> mean_val_srcc;          // over dimensions with a defined SRCC
};

struct FitResult {
    std::vector<EpochMetrics> history;
    int best_epoch = -1;
    double best_val_srcc = 0.0;
    long steps = 0;
};

// Adam training loop with step-wise lr decay and best-validation-SRCC model
// selection. Deterministic in (seed, data): shuffling comes from one seeded
// engine whose state is checkpointed, so a resumed run reproduces the
// uninterrupted one exactly.
class Trainer {
public:
    using LogFn = std::function<void(const nlohmann::json&)>;

    Trainer(FusionModel& model, const TrainOptions& options);

    // train_y / val_y: one row per sample, output_dims columns (MOS scale)
    FitResult fit(const std::vector<features::FeatureBundle>& train_x, const Mat& train_y,
                  const std::vector<features::FeatureBundle>& val_x, const Mat& val_y,
                  const LogFn& log = {});

    // loads the best-validation parameters back into the model
    void restore_best();
    bool has_best() const { return best_epoch_ >= 0; }
    int best_epoch() const { return best_epoch_; }
    double best_val_srcc() const { return best_val_srcc_; }

    const TrainOptions& options() const { return options_; }
    FusionModel& model() { return model_; }

    // checkpoint surface
    int next_epoch() const { return next_epoch_; }
    long steps() const { return steps_; }
    std::string rng_state() const;
    const std::vector<Mat>& best_params() const { return best_params_; }
    void restore_state(int next_epoch, long steps, const std::string& rng_state,
                       std::vector<Mat> best_params, int best_epoch, double best_val_srcc);

private:
    FusionModel& model_;
    TrainOptions options_;
    std::mt19937_64 engine_;
    int next_epoch_ = 0;
    long steps_ = 0;
    std::vector<Mat> best_params_;
    int best_epoch_ = -1;
    double best_val_srcc_ = 0.0;
};

}  // namespace ugvq::model
