#include "adago/models/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "adago/data/rng.hpp"
#include "adago/errors.hpp"
#include "adago/linalg/kernels.hpp"
#include "adago/models/activations.hpp"
#include "adago/models/losses.hpp"

namespace adago::models {

using linalg::matmul;
using linalg::matmul_nt;
using linalg::matmul_tn;

namespace {

void add_bias(Matrix& out, const Matrix& bias) {
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) row[j] += bias(0, j);
    }
}

Matrix column_sums(const Matrix& m) {
    Matrix s(1, m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s(0, j) += m(i, j);
    return s;
}

double apply_activation(Activation act, double x) { return act == Activation::gelu ? gelu(x) : x; }
double activation_slope(Activation act, double x) { return act == Activation::gelu ? gelu_prime(x) : 1.0; }

void check_batch(const ModelSpec& spec, const Batch& batch) {
    if (batch.size() == 0) throw InvalidInput("forward: empty batch");
    if (batch.inputs.cols() != spec.d_in)
        throw InvalidInput("forward: input width " + std::to_string(batch.inputs.cols()) +
                           " != d_in " + std::to_string(spec.d_in));
    if (spec.loss == LossKind::mse) {
        if (batch.targets.rows() != batch.size() || batch.targets.cols() != spec.d_out)
            throw InvalidInput("forward: targets shape does not match batch × d_out");
    } else if (batch.labels.size() != batch.size()) {
        throw InvalidInput("forward: label count does not match batch size");
    }
}

LossGrad evaluate_loss(const ModelSpec& spec, const Matrix& output, const Batch& batch) {
    LossGrad lg;
    if (spec.loss == LossKind::cross_entropy) {
        lg = cross_entropy(output, batch.labels);
    } else if (spec.reduction == Reduction::half_sum) {
        lg = mse_half_sum(output, batch.targets);
    } else {
        lg = mse_mean(output, batch.targets);
    }
    lg.loss *= batch.weight;
    lg.grad *= batch.weight;
    return lg;
}

} // namespace

ModelSpec ModelSpec::linear(std::size_t m, std::size_t d) {
    ModelSpec s;
    s.architecture = Architecture::linear;
    s.d_in = d;
    s.hidden = 0;
    s.d_out = m;
    s.activation = Activation::identity;
    s.loss = LossKind::mse;
    s.reduction = Reduction::half_sum;
    return s;
}

ModelSpec ModelSpec::mlp(std::size_t d_in, std::size_t hidden, std::size_t d_out, LossKind loss,
                         Activation act) {
    ModelSpec s;
    s.architecture = Architecture::mlp;
    s.d_in = d_in;
    s.hidden = hidden;
    s.d_out = d_out;
    s.activation = act;
    s.loss = loss;
    s.reduction = Reduction::mean;
    return s;
}

void ModelSpec::validate() const {
    if (d_in == 0 || d_out == 0 || (architecture == Architecture::mlp && hidden == 0))
        throw InvalidInput("ModelSpec: dimensions must be positive");
    if (loss == LossKind::cross_entropy && reduction != Reduction::mean)
        throw InvalidInput("ModelSpec: cross-entropy supports mean reduction only");
}

ParamSet init_params(const ModelSpec& spec, std::uint64_t seed) {
    spec.validate();
    data::CounterRng rng(seed, data::Stream::init);
    auto uniform_matrix = [&](std::size_t rows, std::size_t cols, std::size_t fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> u(-bound, bound);
        Matrix m(rows, cols);
        for (double& x : m.data()) x = u(rng);
        return m;
    };
    ParamSet ps;
    if (spec.architecture == Architecture::linear) {
        ps.add("W", ParamKind::matrix, uniform_matrix(spec.d_out, spec.d_in, spec.d_in));
    } else {
        ps.add("W1", ParamKind::matrix, uniform_matrix(spec.hidden, spec.d_in, spec.d_in));
        ps.add("b1", ParamKind::vector, uniform_matrix(1, spec.hidden, spec.d_in));
        ps.add("W2", ParamKind::matrix, uniform_matrix(spec.d_out, spec.hidden, spec.hidden));
        ps.add("b2", ParamKind::vector, uniform_matrix(1, spec.d_out, spec.hidden));
    }
    return ps;
}

ForwardResult forward(const ModelSpec& spec, const ParamSet& params, const Batch& batch) {
    spec.validate();
    check_batch(spec, batch);
    ForwardResult r;
    r.cache.revision = params.revision();
    r.cache.inputs = batch.inputs;
    if (spec.architecture == Architecture::linear) {
        const Matrix& w = params.at("W").value;
        if (w.rows() != spec.d_out || w.cols() != spec.d_in) throw InvalidInput("forward: W shape");
        r.output = matmul_nt(batch.inputs, w);
    } else {
        const Matrix& w1 = params.at("W1").value;
        const Matrix& b1 = params.at("b1").value;
        const Matrix& w2 = params.at("W2").value;
        const Matrix& b2 = params.at("b2").value;
        if (w1.rows() != spec.hidden || w1.cols() != spec.d_in || w2.rows() != spec.d_out ||
            w2.cols() != spec.hidden || b1.cols() != spec.hidden || b2.cols() != spec.d_out)
            throw InvalidInput("forward: parameter shapes do not match ModelSpec");
        r.cache.pre_activation = matmul_nt(batch.inputs, w1);
        add_bias(r.cache.pre_activation, b1);
        r.cache.activation = r.cache.pre_activation;
        for (double& x : r.cache.activation.data()) x = apply_activation(spec.activation, x);
        r.output = matmul_nt(r.cache.activation, w2);
        add_bias(r.output, b2);
    }
    LossGrad lg = evaluate_loss(spec, r.output, batch);
    r.loss = lg.loss;
    r.cache.output_grad = std::move(lg.grad);
    return r;
}

void backward(const ModelSpec& spec, ParamSet& params, const ForwardCache& cache) {
    if (cache.revision != params.revision())
        throw ContractViolation("backward: parameters changed since the forward pass");
    const Matrix& dout = cache.output_grad;
    if (spec.architecture == Architecture::linear) {
        params.mutable_grad(params.index_of("W")) = matmul_tn(dout, cache.inputs);
        return;
    }
    const std::size_t iw1 = params.index_of("W1"), ib1 = params.index_of("b1");
    const std::size_t iw2 = params.index_of("W2"), ib2 = params.index_of("b2");
    params.mutable_grad(iw2) = matmul_tn(dout, cache.activation);
    params.mutable_grad(ib2) = column_sums(dout);
    Matrix dh = matmul(dout, params[iw2].value);
    for (std::size_t i = 0; i < dh.size(); ++i)
        dh.data()[i] *= activation_slope(spec.activation, cache.pre_activation.data()[i]);
    params.mutable_grad(iw1) = matmul_tn(dh, cache.inputs);
    params.mutable_grad(ib1) = column_sums(dh);
}

double loss_and_grad(const ModelSpec& spec, ParamSet& params, const Batch& batch) {
    ForwardResult r = forward(spec, params, batch);
    backward(spec, params, r.cache);
    return r.loss;
}

double loss_only(const ModelSpec& spec, const ParamSet& params, const Batch& batch) {
    return forward(spec, params, batch).loss;
}

double central_difference(const ModelSpec& spec, ParamSet& params, const Batch& batch,
                          std::size_t param, std::size_t entry, double h) {
    const double theta = params[param].value.data()[entry];
    const double step = h * (1.0 + std::abs(theta));
    const double hi = theta + step, lo = theta - step;
    params.mutable_value(param).data()[entry] = hi;
    const double up = loss_only(spec, params, batch);
    params.mutable_value(param).data()[entry] = lo;
    const double down = loss_only(spec, params, batch);
    params.mutable_value(param).data()[entry] = theta;
    return (up - down) / (hi - lo);
}

std::vector<Matrix> finite_difference_gradient(const ModelSpec& spec, const ParamSet& params,
                                               const Batch& batch, double h) {
    if (!(h > 0.0)) throw InvalidInput("finite_difference_gradient: h must be positive");
    ParamSet probe = params;
    std::vector<Matrix> grads;
    for (std::size_t p = 0; p < probe.size(); ++p) {
        Matrix g(probe[p].value.rows(), probe[p].value.cols());
        for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = central_difference(spec, probe, batch, p, i, h);
        grads.push_back(std::move(g));
    }
    return grads;
}

} // namespace adago::models

namespace adago::models {

GradientCheck gradient_check(const ModelSpec& spec, const ParamSet& params, const Batch& batch,
                             std::size_t probes, std::uint64_t seed, double h, double floor) {
    ParamSet work = params;
    loss_and_grad(spec, work, batch);
    const std::vector<Matrix> analytic = work.grads();

    data::CounterRng rng(seed, data::Stream::probe);
    std::uniform_int_distribution<std::size_t> pick_param(0, work.size() - 1);
    GradientCheck out;
    for (std::size_t k = 0; k < probes; ++k) {
        const std::size_t p = pick_param(rng);
        std::uniform_int_distribution<std::size_t> pick_entry(0, work[p].value.size() - 1);
        const std::size_t e = pick_entry(rng);
        const double fd = central_difference(spec, work, batch, p, e, h);
        const double an = analytic[p].data()[e];
        const double scale = std::max({std::abs(fd), std::abs(an), floor});
        out.max_relative_error = std::max(out.max_relative_error, std::abs(fd - an) / scale);
        ++out.probes;
    }
    return out;
}

} // namespace adago::models
