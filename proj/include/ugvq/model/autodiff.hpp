#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace ugvq::model {

using Mat = Eigen::MatrixXd;

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

// Reverse-mode tape over dense double matrices. One tape per forward/backward
// pass; construction order is the topological order, so backward() just walks
// the node list in reverse. Everything is double precision, which the
// finite-difference gradient tests rely on.
class Tape {
public:
    Var input(Mat value);

    const Mat& val(Var v) const { return node(v.id).value; }
    const Mat& grad(Var v) const { return node(v.id).grad; }

    Var matmul(Var a, Var b);     // (m x k) * (k x n)
    Var matmul_nt(Var a, Var b);  // a * b^T
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var scale(Var a, double s);
    Var add_rowvec(Var a, Var row);  // broadcast a 1 x C row over every row of a
    Var slice_cols(Var a, int start, int count);
    Var concat_cols(const std::vector<Var>& parts);
    Var concat_rows(const std::vector<Var>& parts);
    Var relu(Var a);
    Var softmax_rows(Var a);
    Var layernorm_rows(Var x, Var gamma, Var beta, double eps = 1e-5);
    Var mean_rows(Var a);  // T x C -> 1 x C

    // mean absolute error between a B x 1 prediction column and a constant
    // target column; scalar output
    Var mae_column(Var pred, const Mat& target);
    // pairwise margin rank hinge over ordered pairs of a B x 1 prediction
    // column (zero for B < 2); scalar output
    Var rank_hinge_column(Var pred, const Mat& target);

    // seeds d(root)/d(root) = 1 and accumulates gradients into every node
    void backward(Var root);

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Mat value;
        Mat grad;
        std::function<void()> back;  // empty for leaves
    };

    Node& node(int id) {
        if (id < 0 || id >= static_cast<int>(nodes_.size())) throw ModelError("bad tape var");
        return nodes_[static_cast<std::size_t>(id)];
    }
    const Node& node(int id) const {
        if (id < 0 || id >= static_cast<int>(nodes_.size())) throw ModelError("bad tape var");
        return nodes_[static_cast<std::size_t>(id)];
    }

    Var push(Mat value, std::function<void()> back);

    std::vector<Node> nodes_;
};

}  // namespace ugvq::model
