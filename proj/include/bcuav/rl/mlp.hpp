#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace bcuav::rl {

// Small dense network with tanh hidden layers, used for both actors and
// critics. Columns are samples. The output is linear unless output_scale > 0,
// in which case it is output_scale * tanh(.) (bounded actor actions).
//
// Gradients are accumulated explicitly by backward(); this keeps the
// parameter update rule, the soft target update, and finite-difference
// verification straightforward.
class Mlp {
public:
    struct Layer {
        Eigen::MatrixXd w;
        Eigen::VectorXd b;
        Eigen::MatrixXd gw;
        Eigen::VectorXd gb;
    };

    Mlp() = default;
    Mlp(std::vector<int> dims, double output_scale, uint64_t seed);

    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

    // forward pass that caches activations for a subsequent backward()
    Eigen::MatrixXd forward_cached(const Eigen::MatrixXd& x);

    // Accumulates parameter gradients from dLoss/dOutput and returns
    // dLoss/dInput. Requires a preceding forward_cached().
    Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_output);

    void zero_grad();

    // flattened parameter access (layer order, w column-major then b)
    Eigen::VectorXd get_params() const;
    void set_params(const Eigen::VectorXd& theta);
    Eigen::VectorXd get_grads() const;
    int param_count() const;

    const std::vector<int>& dims() const { return dims_; }
    double output_scale() const { return output_scale_; }
    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }

private:
    std::vector<int> dims_;
    double output_scale_ = 0.0;
    std::vector<Layer> layers_;
    std::vector<Eigen::MatrixXd> cache_in_;   // input of each layer
    std::vector<Eigen::MatrixXd> cache_out_;  // post-activation of each layer
};

// theta_target <- sigma * theta_eval + (1 - sigma) * theta_target
void soft_update(Mlp& target, const Mlp& eval, double sigma);

class Adam {
public:
    Adam() = default;
    Adam(const Mlp& net, double lr);
    void step(Mlp& net);
    double lr() const { return lr_; }

private:
    double lr_ = 1e-3;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    int t_ = 0;
    std::vector<Eigen::MatrixXd> mw_, vw_;
    std::vector<Eigen::VectorXd> mb_, vb_;
};

}  // namespace bcuav::rl
