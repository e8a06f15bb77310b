#pragma once

#include "ugvq/model/autodiff.hpp"

namespace ugvq::model {

// Per dimension d: L_d = MAE_d + lambda * Rank_d, where Rank_d is the mean
// over ordered pairs (i, j) of max(0, |q_i - q_j| - sign(q_i - q_j) *
// (p_i - p_j)); the total is the unweighted mean over dimensions. The rank
// term is zero for batches of one.

// Tape form used in training: preds is the B x dims prediction node.
Var batch_loss(Tape& tape, Var preds, const Mat& targets, double lambda_rank);

// Plain evaluation of the same objective; throws ModelError on NaN input.
double loss_value(const Mat& preds, const Mat& targets, double lambda_rank);

}  // namespace ugvq::model
