#pragma once

#include <random>
#include <string>
#include <vector>

#include "ugvq/model/autodiff.hpp"

namespace ugvq::model {

enum class Init { fan_in_uniform, zeros, ones };

// Named parameter tensors plus Adam moments. Creation order is stable and
// defines the checkpoint layout.
class ParameterStore {
public:
    int add(const std::string& name, int rows, int cols, Init init, std::mt19937_64& rng);

    int index_of(const std::string& name) const;  // -1 when absent
    std::size_t count() const { return tensors_.size(); }
    const std::string& name(int i) const { return tensors_[check(i)].name; }
    Mat& value(int i) { return tensors_[check(i)].value; }
    const Mat& value(int i) const { return tensors_[check(i)].value; }
    Mat& adam_m(int i) { return tensors_[check(i)].m; }
    Mat& adam_v(int i) { return tensors_[check(i)].v; }

    long adam_step_count() const { return adam_t_; }
    void set_adam_step_count(long t) { adam_t_ = t; }

    // one Adam update over all tensors; grads[i] pairs with tensor i
    void adam_step(const std::vector<Mat>& grads, double lr, double beta1 = 0.9,
                   double beta2 = 0.999, double eps = 1e-8);

    std::vector<Mat> snapshot_values() const;
    void restore_values(const std::vector<Mat>& values);

private:
    struct Tensor {
        std::string name;
        Mat value;
        Mat m, v;
    };

    int check(int i) const {
        if (i < 0 || i >= static_cast<int>(tensors_.size())) throw ModelError("bad parameter index");
        return i;
    }

    std::vector<Tensor> tensors_;
    long adam_t_ = 0;
};

}  // namespace ugvq::model
