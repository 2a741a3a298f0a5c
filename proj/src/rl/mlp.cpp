#include "bcuav/rl/mlp.hpp"

#include <cmath>

#include "bcuav/errors.hpp"
#include "bcuav/rng.hpp"

namespace bcuav::rl {

Mlp::Mlp(std::vector<int> dims, double output_scale, uint64_t seed)
    : dims_(std::move(dims)), output_scale_(output_scale) {
    if (dims_.size() < 2) throw DomainError("Mlp: need at least input and output dims");
    Rng rng(seed);
    layers_.resize(dims_.size() - 1);
    for (size_t l = 0; l < layers_.size(); ++l) {
        const int fan_in = dims_[l];
        const int fan_out = dims_[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Layer& layer = layers_[l];
        layer.w.resize(fan_out, fan_in);
        for (int c = 0; c < fan_in; ++c)
            for (int r = 0; r < fan_out; ++r) layer.w(r, c) = rng.uniform(-bound, bound);
        layer.b = Eigen::VectorXd::Zero(fan_out);
        layer.gw = Eigen::MatrixXd::Zero(fan_out, fan_in);
        layer.gb = Eigen::VectorXd::Zero(fan_out);
    }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd h = x;
    for (size_t l = 0; l < layers_.size(); ++l) {
        h = (layers_[l].w * h).colwise() + layers_[l].b;
        const bool last = l + 1 == layers_.size();
        if (!last)
            h = h.array().tanh();
        else if (output_scale_ > 0.0)
            h = output_scale_ * h.array().tanh();
    }
    return h;
}

Eigen::MatrixXd Mlp::forward_cached(const Eigen::MatrixXd& x) {
    cache_in_.assign(layers_.size(), {});
    cache_out_.assign(layers_.size(), {});
    Eigen::MatrixXd h = x;
    for (size_t l = 0; l < layers_.size(); ++l) {
        cache_in_[l] = h;
        h = (layers_[l].w * h).colwise() + layers_[l].b;
        const bool last = l + 1 == layers_.size();
        if (!last)
            h = h.array().tanh();
        else if (output_scale_ > 0.0)
            h = output_scale_ * h.array().tanh();
        cache_out_[l] = h;
    }
    return h;
}

Eigen::MatrixXd Mlp::backward(const Eigen::MatrixXd& grad_output) {
    if (cache_in_.empty()) throw Error("Mlp::backward called without forward_cached");
    Eigen::MatrixXd grad = grad_output;
    for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
        const bool last = l + 1 == static_cast<int>(layers_.size());
        if (!last) {
            grad = grad.array() * (1.0 - cache_out_[l].array().square());
        } else if (output_scale_ > 0.0) {
            // d/dz [s tanh(z)] = s - tanh(z)^2 s = s - out^2 / s
            const auto& out = cache_out_[l].array();
            grad = grad.array() * (output_scale_ - out.square() / output_scale_);
        }
        layers_[l].gw.noalias() += grad * cache_in_[l].transpose();
        layers_[l].gb.noalias() += grad.rowwise().sum();
        if (l > 0) grad = layers_[l].w.transpose() * grad;
    }
    return layers_[0].w.transpose() * grad;
}

void Mlp::zero_grad() {
    for (Layer& layer : layers_) {
        layer.gw.setZero();
        layer.gb.setZero();
    }
}

int Mlp::param_count() const {
    int n = 0;
    for (const Layer& layer : layers_)
        n += static_cast<int>(layer.w.size() + layer.b.size());
    return n;
}

Eigen::VectorXd Mlp::get_params() const {
    Eigen::VectorXd theta(param_count());
    int at = 0;
    for (const Layer& layer : layers_) {
        for (int i = 0; i < layer.w.size(); ++i) theta(at++) = layer.w.data()[i];
        for (int i = 0; i < layer.b.size(); ++i) theta(at++) = layer.b(i);
    }
    return theta;
}

void Mlp::set_params(const Eigen::VectorXd& theta) {
    int at = 0;
    for (Layer& layer : layers_) {
        for (int i = 0; i < layer.w.size(); ++i) layer.w.data()[i] = theta(at++);
        for (int i = 0; i < layer.b.size(); ++i) layer.b(i) = theta(at++);
    }
}

Eigen::VectorXd Mlp::get_grads() const {
    Eigen::VectorXd g(param_count());
    int at = 0;
    for (const Layer& layer : layers_) {
        for (int i = 0; i < layer.gw.size(); ++i) g(at++) = layer.gw.data()[i];
        for (int i = 0; i < layer.gb.size(); ++i) g(at++) = layer.gb(i);
    }
    return g;
}

void soft_update(Mlp& target, const Mlp& eval, double sigma) {
    auto& t = target.layers();
    const auto& e = eval.layers();
    for (size_t l = 0; l < t.size(); ++l) {
        t[l].w = sigma * e[l].w + (1.0 - sigma) * t[l].w;
        t[l].b = sigma * e[l].b + (1.0 - sigma) * t[l].b;
    }
}

Adam::Adam(const Mlp& net, double lr) : lr_(lr) {
    for (const Mlp::Layer& layer : net.layers()) {
        mw_.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
        vw_.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
        mb_.push_back(Eigen::VectorXd::Zero(layer.b.size()));
        vb_.push_back(Eigen::VectorXd::Zero(layer.b.size()));
    }
}

void Adam::step(Mlp& net) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    auto& layers = net.layers();
    for (size_t l = 0; l < layers.size(); ++l) {
        mw_[l] = beta1_ * mw_[l] + (1.0 - beta1_) * layers[l].gw;
        vw_[l] = beta2_ * vw_[l].array() + (1.0 - beta2_) * layers[l].gw.array().square();
        layers[l].w.array() -=
            lr_ * (mw_[l].array() / c1) / ((vw_[l].array() / c2).sqrt() + eps_);
        mb_[l] = beta1_ * mb_[l] + (1.0 - beta1_) * layers[l].gb;
        vb_[l] = beta2_ * vb_[l].array() + (1.0 - beta2_) * layers[l].gb.array().square();
        layers[l].b.array() -=
            lr_ * (mb_[l].array() / c1) / ((vb_[l].array() / c2).sqrt() + eps_);
    }
}

}  // namespace bcuav::rl
