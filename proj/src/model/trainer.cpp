#include "ugvq/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ugvq/eval/correlations.hpp"

namespace ugvq::model {

Trainer::Trainer(FusionModel& model, const TrainOptions& options)
    : model_(model), options_(options), engine_(options.seed) {
    if (options_.batch_size < 1) throw ModelError("batch_size must be >= 1");
    if (options_.epochs < 0) throw ModelError("epochs must be >= 0");
}

std::string Trainer::rng_state() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
}

void Trainer::restore_state(int next_epoch, long steps, const std::string& rng_state,
                            std::vector<Mat> best_params, int best_epoch, double best_val_srcc) {
    next_epoch_ = next_epoch;
    steps_ = steps;
    std::istringstream is(rng_state);
    is >> engine_;
    if (!is) throw ModelError("cannot restore trainer rng state");
    best_params_ = std::move(best_params);
    best_epoch_ = best_epoch;
    best_val_srcc_ = best_val_srcc;
}

void Trainer::restore_best() {
    if (best_epoch_ < 0) throw ModelError("no best-validation snapshot recorded");
    model_.params().restore_values(best_params_);
}

FitResult Trainer::fit(const std::vector<features::FeatureBundle>& train_x, const Mat& train_y,
                       const std::vector<features::FeatureBundle>& val_x, const Mat& val_y,
                       const LogFn& log) {
    const int dims = model_.config().output_dims;
    if (train_x.empty()) throw ModelError("empty training split");
    if (static_cast<Eigen::Index>(train_x.size()) != train_y.rows() || train_y.cols() != dims)
        throw ModelError("training targets must be one row per sample with output_dims columns");
    if (static_cast<Eigen::Index>(val_x.size()) != val_y.rows() ||
        (!val_x.empty() && val_y.cols() != dims))
        throw ModelError("validation targets must be one row per sample with output_dims columns");

    FitResult result;
    result.best_epoch = best_epoch_;
    result.best_val_srcc = best_val_srcc_;

    std::vector<std::size_t> order(train_x.size());
    std::iota(order.begin(), order.end(), 0);

    bool step_cap_hit = false;
    for (int epoch = next_epoch_; epoch < options_.epochs && !step_cap_hit; ++epoch) {
        const double lr = options_.lr_at(epoch);
        std::shuffle(order.begin(), order.end(), engine_);

        double loss_sum = 0.0;
        long batches = 0;
        for (std::size_t start = 0; start < order.size(); start += options_.batch_size) {
            std::size_t end = std::min(order.size(), start + options_.batch_size);
            std::size_t bsz = end - start;

            Tape tape;
            auto pvars = model_.bind(tape);
            std::vector<Var> outputs;
            outputs.reserve(bsz);
            Mat targets(static_cast<Eigen::Index>(bsz), dims);
            for (std::size_t k = 0; k < bsz; ++k) {
                std::size_t idx = order[start + k];
                outputs.push_back(model_.forward(tape, pvars, train_x[idx]));
                targets.row(static_cast<Eigen::Index>(k)) = train_y.row(static_cast<Eigen::Index>(idx));
            }
            Var preds = tape.concat_rows(outputs);
            Var loss = batch_loss(tape, preds, targets, options_.lambda_rank);

            double loss_now = tape.val(loss)(0, 0);
            if (!std::isfinite(loss_now)) {
                std::ostringstream ids;
                for (std::size_t k = 0; k < bsz; ++k) ids << (k ? "," : "") << order[start + k];
                throw ModelError("training diverged (non-finite loss) at epoch " +
                                 std::to_string(epoch) + ", step " + std::to_string(steps_) +
                                 ", batch sample indices [" + ids.str() + "]");
            }
            tape.backward(loss);

            std::vector<Mat> grads;
            grads.reserve(pvars.size());
            for (Var v : pvars) grads.push_back(tape.grad(v));
            model_.params().adam_step(grads, lr);

            loss_sum += loss_now;
            ++batches;
            ++steps_;
            if (options_.max_steps > 0 && steps_ >= options_.max_steps) {
                step_cap_hit = true;
                break;
            }
        }

        EpochMetrics em;
        em.epoch = epoch;
        em.lr = lr;
        em.train_loss = batches > 0 ? loss_sum / static_cast<double>(batches) : 0.0;
        em.val_srcc.assign(static_cast<std::size_t>(dims), std::nullopt);
        if (!val_x.empty() && val_x.size() >= 2) {
            Mat val_pred(static_cast<Eigen::Index>(val_x.size()), dims);
            for (std::size_t i = 0; i < val_x.size(); ++i)
                val_pred.row(static_cast<Eigen::Index>(i)) = model_.predict_row(val_x[i]);
            double sum = 0.0;
            int defined = 0;
            for (int d = 0; d < dims; ++d) {
                std::vector<double> p(val_x.size()), t(val_x.size());
                for (std::size_t i = 0; i < val_x.size(); ++i) {
                    p[i] = val_pred(static_cast<Eigen::Index>(i), d);
                    t[i] = val_y(static_cast<Eigen::Index>(i), d);
                }
                auto rho = eval::srcc(p, t);
                em.val_srcc[static_cast<std::size_t>(d)] = rho;
                if (rho) {
                    sum += *rho;
                    ++defined;
                }
            }
            if (defined > 0) em.mean_val_srcc = sum / defined;
        }

        bool is_best = false;
        if (em.mean_val_srcc && (best_epoch_ < 0 || *em.mean_val_srcc > best_val_srcc_)) {
            best_val_srcc_ = *em.mean_val_srcc;
            best_epoch_ = epoch;
            best_params_ = model_.params().snapshot_values();
            is_best = true;
        }

        if (log) {
            nlohmann::json j{{"event", "epoch"},
                             {"epoch", epoch},
                             {"lr", lr},
                             {"train_loss", em.train_loss},
                             {"steps", steps_},
                             {"is_best", is_best}};
            nlohmann::json vs = nlohmann::json::array();
            for (const auto& v : em.val_srcc) vs.push_back(v ? nlohmann::json(*v) : nlohmann::json());
            j["val_srcc"] = vs;
            if (em.mean_val_srcc) j["val_srcc_mean"] = *em.mean_val_srcc;
            log(j);
        }
        result.history.push_back(std::move(em));
        next_epoch_ = epoch + 1;
    }

    // no validation signal at all: fall back to the final parameters
    if (best_epoch_ < 0) {
        best_params_ = model_.params().snapshot_values();
        best_epoch_ = next_epoch_ > 0 ? next_epoch_ - 1 : 0;
        best_val_srcc_ = 0.0;
    }
    result.best_epoch = best_epoch_;
    result.best_val_srcc = best_val_srcc_;
    result.steps = steps_;
    return result;
}

}  // namespace ugvq::model
