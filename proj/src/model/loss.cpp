#include "ugvq/model/loss.hpp"

#include <cmath>

namespace ugvq::model {

Var batch_loss(Tape& tape, Var preds, const Mat& targets, double lambda_rank) {
    const Mat& p = tape.val(preds);
    if (p.rows() != targets.rows() || p.cols() != targets.cols())
        throw ModelError("loss shape mismatch between predictions and targets");
    if (p.rows() < 1) throw ModelError("loss needs at least one sample");

    Var total;
    for (int d = 0; d < p.cols(); ++d) {
        Var col = tape.slice_cols(preds, d, 1);
        Mat target_col = targets.col(d);
        Var dim_loss = tape.mae_column(col, target_col);
        if (lambda_rank != 0.0)
            dim_loss = tape.add(dim_loss, tape.scale(tape.rank_hinge_column(col, target_col),
                                                     lambda_rank));
        total = total.valid() ? tape.add(total, dim_loss) : dim_loss;
    }
    return tape.scale(total, 1.0 / static_cast<double>(p.cols()));
}

double loss_value(const Mat& preds, const Mat& targets, double lambda_rank) {
    if (preds.rows() != targets.rows() || preds.cols() != targets.cols())
        throw ModelError("loss shape mismatch between predictions and targets");
    if (preds.rows() < 1) throw ModelError("loss needs at least one sample");
    if (!preds.allFinite() || !targets.allFinite())
        throw ModelError("non-finite values in loss input");

    const Eigen::Index b = preds.rows();
    double total = 0.0;
    for (Eigen::Index d = 0; d < preds.cols(); ++d) {
        double mae = (preds.col(d) - targets.col(d)).cwiseAbs().mean();
        double rank = 0.0;
        if (b >= 2) {
            for (Eigen::Index i = 0; i < b; ++i)
                for (Eigen::Index j = 0; j < b; ++j) {
                    if (i == j) continue;
                    double dq = targets(i, d) - targets(j, d);
                    double e = dq > 0.0 ? 1.0 : (dq < 0.0 ? -1.0 : 0.0);
                    rank += std::max(0.0, std::abs(dq) - e * (preds(i, d) - preds(j, d)));
                }
            rank /= static_cast<double>(b) * static_cast<double>(b - 1);
        }
        total += mae + lambda_rank * rank;
    }
    return total / static_cast<double>(preds.cols());
}

}  // namespace ugvq::model
