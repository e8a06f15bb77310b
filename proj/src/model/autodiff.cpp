#include "ugvq/model/autodiff.hpp"

#include <cmath>

namespace ugvq::model {

Var Tape::push(Mat value, std::function<void()> back) {
    Node n;
    n.grad = Mat::Zero(value.rows(), value.cols());
    n.value = std::move(value);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::input(Mat value) { return push(std::move(value), {}); }

Var Tape::matmul(Var a, Var b) {
    const Mat& av = val(a);
    const Mat& bv = val(b);
    if (av.cols() != bv.rows()) throw ModelError("matmul shape mismatch");
    Var out{static_cast<int>(nodes_.size())};
    return push(av * bv, [this, a, b, out] {
        const Mat& g = node(out.id).grad;
        node(a.id).grad += g * node(b.id).value.transpose();
        node(b.id).grad += node(a.id).value.transpose() * g;
    });
}

Var Tape::matmul_nt(Var a, Var b) {
    const Mat& av = val(a);
    const Mat& bv = val(b);
    if (av.cols() != bv.cols()) throw ModelError("matmul_nt shape mismatch");
    Var out{static_cast<int>(nodes_.size())};
    return push(av * bv.transpose(), [this, a, b, out] {
        const Mat& g = node(out.id).grad;
        node(a.id).grad += g * node(b.id).value;
        node(b.id).grad += g.transpose() * node(a.id).value;
    });
}

Var Tape::add(Var a, Var b) {
    if (val(a).rows() != val(b).rows() || val(a).cols() != val(b).cols())
        throw ModelError("add shape mismatch");
    Var out{static_cast<int>(nodes_.size())};
    return push(val(a) + val(b), [this, a, b, out] {
        const Mat& g = node(out.id).grad;
        node(a.id).grad += g;
        node(b.id).grad += g;
    });
}

Var Tape::sub(Var a, Var b) {
    if (val(a).rows() != val(b).rows() || val(a).cols() != val(b).cols())
        throw ModelError("sub shape mismatch");
    Var out{static_cast<int>(nodes_.size())};
    return push(val(a) - val(b), [this, a, b, out] {
        const Mat& g = node(out.id).grad;
        node(a.id).grad += g;
        node(b.id).grad -= g;
    });
}

Var Tape::scale(Var a, double s) {
    Var out{static_cast<int>(nodes_.size())};
    return push(val(a) * s, [this, a, s, out] { node(a.id).grad += node(out.id).grad * s; });
}

Var Tape::add_rowvec(Var a, Var row) {
    if (val(row).rows() != 1 || val(row).cols() != val(a).cols())
        throw ModelError("add_rowvec shape mismatch");
    Mat v = val(a);
    v.rowwise() += val(row).row(0);
    Var out{static_cast<int>(nodes_.size())};
    return push(std::move(v), [this, a, row, out] {
        const Mat& g = node(out.id).grad;
        node(a.id).grad += g;
        node(row.id).grad += g.colwise().sum();
    });
}

Var Tape::slice_cols(Var a, int start, int count) {
    if (start < 0 || count < 1 || start + count > val(a).cols())
        throw ModelError("slice_cols out of range");
    Var out{static_cast<int>(nodes_.size())};
    return push(val(a).middleCols(start, count), [this, a, start, count, out] {
        node(a.id).grad.middleCols(start, count) += node(out.id).grad;
    });
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw ModelError("concat_cols of nothing");
    Eigen::Index rows = val(parts[0]).rows();
    Eigen::Index cols = 0;
    for (Var p : parts) {
        if (val(p).rows() != rows) throw ModelError("concat_cols row mismatch");
        cols += val(p).cols();
    }
    Mat v(rows, cols);
    Eigen::Index at = 0;
    for (Var p : parts) {
        v.middleCols(at, val(p).cols()) = val(p);
        at += val(p).cols();
    }
    Var out{static_cast<int>(nodes_.size())};
    auto parts_copy = parts;
    return push(std::move(v), [this, parts_copy, out] {
        const Mat& g = node(out.id).grad;
        Eigen::Index at2 = 0;
        for (Var p : parts_copy) {
            Eigen::Index c = node(p.id).value.cols();
            node(p.id).grad += g.middleCols(at2, c);
            at2 += c;
        }
    });
}

Var Tape::concat_rows(const std::vector<Var>& parts) {
    if (parts.empty()) throw ModelError("concat_rows of nothing");
    Eigen::Index cols = val(parts[0]).cols();
    Eigen::Index rows = 0;
    for (Var p : parts) {
        if (val(p).cols() != cols) throw ModelError("concat_rows col mismatch");
        rows += val(p).rows();
    }
    Mat v(rows, cols);
    Eigen::Index at = 0;
    for (Var p : parts) {
        v.middleRows(at, val(p).rows()) = val(p);
        at += val(p).rows();
    }
    Var out{static_cast<int>(nodes_.size())};
    auto parts_copy = parts;
    return push(std::move(v), [this, parts_copy, out] {
        const Mat& g = node(out.id).grad;
        Eigen::Index at2 = 0;
        for (Var p : parts_copy) {
            Eigen::Index r = node(p.id).value.rows();
            node(p.id).grad += g.middleRows(at2, r);
            at2 += r;
        }
    });
}

Var Tape::relu(Var a) {
    Var out{static_cast<int>(nodes_.size())};
    return push(val(a).cwiseMax(0.0), [this, a, out] {
        const Mat& g = node(out.id).grad;
        const Mat& x = node(a.id).value;
        node(a.id).grad += (x.array() > 0.0).cast<double>().matrix().cwiseProduct(g);
    });
}

Var Tape::softmax_rows(Var a) {
    const Mat& x = val(a);
    Mat y(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double mx = x.row(r).maxCoeff();
        Eigen::ArrayXd e = (x.row(r).array() - mx).exp();
        double s = e.sum();
        if (!std::isfinite(s) || s <= 0.0) throw ModelError("non-finite attention logits");
        y.row(r) = (e / s).transpose();
    }
    Var out{static_cast<int>(nodes_.size())};
    return push(std::move(y), [this, a, out] {
        const Mat& g = node(out.id).grad;
        const Mat& y2 = node(out.id).value;
        for (Eigen::Index r = 0; r < y2.rows(); ++r) {
            double dot = g.row(r).cwiseProduct(y2.row(r)).sum();
            node(a.id).grad.row(r) += (y2.row(r).array() * (g.row(r).array() - dot)).matrix();
        }
    });
}

Var Tape::layernorm_rows(Var x, Var gamma, Var beta, double eps) {
    const Mat& xv = val(x);
    const Eigen::Index cols = xv.cols();
    if (val(gamma).rows() != 1 || val(gamma).cols() != cols || val(beta).rows() != 1 ||
        val(beta).cols() != cols)
        throw ModelError("layernorm affine shape mismatch");
    Mat xhat(xv.rows(), cols);
    Eigen::VectorXd inv_std(xv.rows());
    for (Eigen::Index r = 0; r < xv.rows(); ++r) {
        double mean = xv.row(r).mean();
        double var = (xv.row(r).array() - mean).square().mean();
        double is = 1.0 / std::sqrt(var + eps);
        inv_std[r] = is;
        xhat.row(r) = (xv.row(r).array() - mean) * is;
    }
    Mat y = xhat;
    y.array().rowwise() *= val(gamma).row(0).array();
    y.rowwise() += val(beta).row(0);
    Var out{static_cast<int>(nodes_.size())};
    return push(std::move(y), [this, x, gamma, beta, xhat, inv_std, out] {
        const Mat& g = node(out.id).grad;
        node(beta.id).grad += g.colwise().sum();
        node(gamma.id).grad += g.cwiseProduct(xhat).colwise().sum();
        const Eigen::RowVectorXd gamma_row = node(gamma.id).value.row(0);
        const double n = static_cast<double>(g.cols());
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            Eigen::RowVectorXd dxhat = g.row(r).cwiseProduct(gamma_row);
            double mean_dxhat = dxhat.sum() / n;
            double mean_dxhat_xhat = dxhat.cwiseProduct(xhat.row(r)).sum() / n;
            node(x.id).grad.row(r) +=
                (dxhat.array() - mean_dxhat - xhat.row(r).array() * mean_dxhat_xhat).matrix() *
                inv_std[r];
        }
    });
}

Var Tape::mean_rows(Var a) {
    const Mat& x = val(a);
    Mat y = x.colwise().mean();
    Var out{static_cast<int>(nodes_.size())};
    const double inv_rows = 1.0 / static_cast<double>(x.rows());
    return push(std::move(y), [this, a, inv_rows, out] {
        const Mat& g = node(out.id).grad;
        node(a.id).grad.rowwise() += (g.row(0) * inv_rows).eval();
    });
}

Var Tape::mae_column(Var pred, const Mat& target) {
    const Mat& p = val(pred);
    if (p.cols() != 1 || target.cols() != 1 || p.rows() != target.rows())
        throw ModelError("mae_column expects matching B x 1 columns");
    if (!p.allFinite() || !target.allFinite()) throw ModelError("non-finite values in loss input");
    const double inv_b = 1.0 / static_cast<double>(p.rows());
    Mat v(1, 1);
    v(0, 0) = (p - target).cwiseAbs().sum() * inv_b;
    Var out{static_cast<int>(nodes_.size())};
    return push(std::move(v), [this, pred, target, inv_b, out] {
        double g = node(out.id).grad(0, 0);
        const Mat& pv = node(pred.id).value;
        for (Eigen::Index i = 0; i < pv.rows(); ++i) {
            double d = pv(i, 0) - target(i, 0);
            double s = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
            node(pred.id).grad(i, 0) += g * s * inv_b;
        }
    });
}

Var Tape::rank_hinge_column(Var pred, const Mat& target) {
    const Mat& p = val(pred);
    if (p.cols() != 1 || target.cols() != 1 || p.rows() != target.rows())
        throw ModelError("rank_hinge_column expects matching B x 1 columns");
    if (!p.allFinite() || !target.allFinite()) throw ModelError("non-finite values in loss input");
    const Eigen::Index b = p.rows();
    Mat v(1, 1);
    v(0, 0) = 0.0;
    if (b >= 2) {
        const double inv_pairs = 1.0 / (static_cast<double>(b) * static_cast<double>(b - 1));
        double total = 0.0;
        for (Eigen::Index i = 0; i < b; ++i)
            for (Eigen::Index j = 0; j < b; ++j) {
                if (i == j) continue;
                double dq = target(i, 0) - target(j, 0);
                double e = dq > 0.0 ? 1.0 : (dq < 0.0 ? -1.0 : 0.0);
                total += std::max(0.0, std::abs(dq) - e * (p(i, 0) - p(j, 0)));
            }
        v(0, 0) = total * inv_pairs;
    }
    Var out{static_cast<int>(nodes_.size())};
    return push(std::move(v), [this, pred, target, b, out] {
        if (b < 2) return;
        double g = node(out.id).grad(0, 0);
        const double inv_pairs = 1.0 / (static_cast<double>(b) * static_cast<double>(b - 1));
        const Mat& pv = node(pred.id).value;
        for (Eigen::Index i = 0; i < b; ++i)
            for (Eigen::Index j = 0; j < b; ++j) {
                if (i == j) continue;
                double dq = target(i, 0) - target(j, 0);
                double e = dq > 0.0 ? 1.0 : (dq < 0.0 ? -1.0 : 0.0);
                if (std::abs(dq) - e * (pv(i, 0) - pv(j, 0)) > 0.0) {
                    node(pred.id).grad(i, 0) -= g * e * inv_pairs;
                    node(pred.id).grad(j, 0) += g * e * inv_pairs;
                }
            }
    });
}

void Tape::backward(Var root) {
    Node& r = node(root.id);
    if (r.value.rows() != 1 || r.value.cols() != 1)
        throw ModelError("backward root must be a scalar");
    r.grad(0, 0) = 1.0;
    for (int i = root.id; i >= 0; --i)
        if (nodes_[static_cast<std::size_t>(i)].back) nodes_[static_cast<std::size_t>(i)].back();
}

}  // namespace ugvq::model
