#include "ugvq/model/params.hpp"

#include <cmath>

namespace ugvq::model {

int ParameterStore::add(const std::string& name, int rows, int cols, Init init,
                        std::mt19937_64& rng) {
    if (index_of(name) >= 0) throw ModelError("duplicate parameter name '" + name + "'");
    Tensor t;
    t.name = name;
    switch (init) {
        case Init::zeros:
            t.value = Mat::Zero(rows, cols);
            break;
        case Init::ones:
            t.value = Mat::Ones(rows, cols);
            break;
        case Init::fan_in_uniform: {
            double bound = 1.0 / std::sqrt(static_cast<double>(rows));
            std::uniform_real_distribution<double> u(-bound, bound);
            t.value = Mat(rows, cols);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) t.value(r, c) = u(rng);
            break;
        }
    }
    t.m = Mat::Zero(rows, cols);
    t.v = Mat::Zero(rows, cols);
    tensors_.push_back(std::move(t));
    return static_cast<int>(tensors_.size()) - 1;
}

int ParameterStore::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < tensors_.size(); ++i)
        if (tensors_[i].name == name) return static_cast<int>(i);
    return -1;
}

void ParameterStore::adam_step(const std::vector<Mat>& grads, double lr, double beta1, double beta2,
                               double eps) {
    if (grads.size() != tensors_.size()) throw ModelError("adam_step gradient count mismatch");
    ++adam_t_;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam_t_));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam_t_));
    for (std::size_t i = 0; i < tensors_.size(); ++i) {
        Tensor& t = tensors_[i];
        const Mat& g = grads[i];
        if (g.rows() != t.value.rows() || g.cols() != t.value.cols())
            throw ModelError("adam_step gradient shape mismatch for '" + t.name + "'");
        t.m = beta1 * t.m + (1.0 - beta1) * g;
        t.v = beta2 * t.v + (1.0 - beta2) * g.cwiseProduct(g);
        Mat mhat = t.m / bc1;
        Mat vhat = t.v / bc2;
        t.value.array() -= lr * mhat.array() / (vhat.array().sqrt() + eps);
    }
}

std::vector<Mat> ParameterStore::snapshot_values() const {
    std::vector<Mat> out;
    out.reserve(tensors_.size());
    for (const auto& t : tensors_) out.push_back(t.value);
    return out;
}

void ParameterStore::restore_values(const std::vector<Mat>& values) {
    if (values.size() != tensors_.size()) throw ModelError("restore_values count mismatch");
    for (std::size_t i = 0; i < tensors_.size(); ++i) {
        if (values[i].rows() != tensors_[i].value.rows() ||
            values[i].cols() != tensors_[i].value.cols())
            throw ModelError("restore_values shape mismatch for '" + tensors_[i].name + "'");
        tensors_[i].value = values[i];
    }
}

}  // namespace ugvq::model
