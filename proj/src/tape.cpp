#include "idenet/tape.hpp"

#include <cmath>
#include <cstring>

#include "idenet/kernels.hpp"

namespace idenet::nn {

Tensor Tape::push(Node n) {
    const int32_t id = static_cast<int32_t>(nodes_.size());
    const Shape shape = n.shape;
    nodes_.push_back(std::move(n));
    return {this, id, shape};
}

void Tape::check_same_shape(Tensor a, Tensor b, const char* what) const {
    if (!(node(a).shape == node(b).shape))
        throw ShapeMismatch(std::string(what) + ": operand shapes differ");
}

Tensor Tape::parameter(Shape shape, const double* values) {
    Node n;
    n.op = Op::Leaf;
    n.shape = shape;
    n.values.assign(values, values + shape.size());
    n.needs_grad = true;
    return push(std::move(n));
}

Tensor Tape::constant(Shape shape, const double* values) {
    Node n;
    n.op = Op::Leaf;
    n.shape = shape;
    n.values.assign(values, values + shape.size());
    return push(std::move(n));
}

Tensor Tape::constant(Shape shape, double fill) {
    Node n;
    n.op = Op::Leaf;
    n.shape = shape;
    n.values.assign(shape.size(), fill);
    return push(std::move(n));
}

Tensor Tape::matmul(Tensor a, Tensor b) {
    if (node(a).shape.cols != node(b).shape.rows)
        throw ShapeMismatch("matmul: inner dimensions differ");
    Node n;
    n.op = Op::Matmul;
    n.shape = {node(a).shape.rows, node(b).shape.cols};
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = node(a).needs_grad || node(b).needs_grad;
    n.values.assign(n.shape.size(), 0.0);
    kernels::gemm(node(a).values.data(), node(b).values.data(), n.values.data(),
                  node(a).shape.rows, node(a).shape.cols, node(b).shape.cols, true);
    return push(std::move(n));
}

Tensor Tape::add(Tensor a, Tensor b) {
    check_same_shape(a, b, "add");
    Node n;
    n.op = Op::Add;
    n.shape = node(a).shape;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = node(a).needs_grad || node(b).needs_grad;
    n.values.resize(n.shape.size());
    kernels::add(node(a).values.data(), node(b).values.data(), n.values.data(), n.shape.size());
    return push(std::move(n));
}

Tensor Tape::add_rowvec(Tensor a, Tensor bias) {
    if (node(bias).shape.rows != 1 || node(bias).shape.cols != node(a).shape.cols)
        throw ShapeMismatch("add_rowvec: bias must be 1 x cols");
    Node n;
    n.op = Op::AddRowvec;
    n.shape = node(a).shape;
    n.a = a.id;
    n.b = bias.id;
    n.needs_grad = node(a).needs_grad || node(bias).needs_grad;
    n.values.resize(n.shape.size());
    const auto& av = node(a).values;
    const auto& bv = node(bias).values;
    const int64_t cols = n.shape.cols;
    for (int64_t r = 0; r < n.shape.rows; ++r)
        kernels::add(av.data() + r * cols, bv.data(), n.values.data() + r * cols, cols);
    return push(std::move(n));
}

Tensor Tape::sub(Tensor a, Tensor b) {
    check_same_shape(a, b, "sub");
    Node n;
    n.op = Op::Sub;
    n.shape = node(a).shape;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = node(a).needs_grad || node(b).needs_grad;
    n.values.resize(n.shape.size());
    kernels::sub(node(a).values.data(), node(b).values.data(), n.values.data(), n.shape.size());
    return push(std::move(n));
}

Tensor Tape::mul(Tensor a, Tensor b) {
    check_same_shape(a, b, "mul");
    Node n;
    n.op = Op::Mul;
    n.shape = node(a).shape;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = node(a).needs_grad || node(b).needs_grad;
    n.values.resize(n.shape.size());
    kernels::mul(node(a).values.data(), node(b).values.data(), n.values.data(), n.shape.size());
    return push(std::move(n));
}

Tensor Tape::scale(Tensor a, double factor) {
    Node n;
    n.op = Op::Scale;
    n.shape = node(a).shape;
    n.a = a.id;
    n.scalar = factor;
    n.needs_grad = node(a).needs_grad;
    n.values.resize(n.shape.size());
    for (int64_t i = 0; i < n.shape.size(); ++i) n.values[i] = factor * node(a).values[i];
    return push(std::move(n));
}

Tensor Tape::add_scalar(Tensor a, double addend) {
    Node n;
    n.op = Op::AddScalar;
    n.shape = node(a).shape;
    n.a = a.id;
    n.scalar = addend;
    n.needs_grad = node(a).needs_grad;
    n.values.resize(n.shape.size());
    for (int64_t i = 0; i < n.shape.size(); ++i) n.values[i] = addend + node(a).values[i];
    return push(std::move(n));
}

Tensor Tape::relu(Tensor a) {
    Node n;
    n.op = Op::Relu;
    n.shape = node(a).shape;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.values.resize(n.shape.size());
    kernels::relu(node(a).values.data(), n.values.data(), n.shape.size());
    return push(std::move(n));
}

Tensor Tape::tanh(Tensor a) {
    Node n;
    n.op = Op::Tanh;
    n.shape = node(a).shape;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.values.resize(n.shape.size());
    for (int64_t i = 0; i < n.shape.size(); ++i) n.values[i] = std::tanh(node(a).values[i]);
    return push(std::move(n));
}

Tensor Tape::sigmoid(Tensor a) {
    Node n;
    n.op = Op::Sigmoid;
    n.shape = node(a).shape;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.values.resize(n.shape.size());
    for (int64_t i = 0; i < n.shape.size(); ++i)
        n.values[i] = 1.0 / (1.0 + std::exp(-node(a).values[i]));
    return push(std::move(n));
}

Tensor Tape::exp(Tensor a) {
    Node n;
    n.op = Op::Exp;
    n.shape = node(a).shape;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.values.resize(n.shape.size());
    for (int64_t i = 0; i < n.shape.size(); ++i) n.values[i] = std::exp(node(a).values[i]);
    return push(std::move(n));
}

Tensor Tape::square(Tensor a) {
    Node n;
    n.op = Op::Square;
    n.shape = node(a).shape;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.values.resize(n.shape.size());
    kernels::square(node(a).values.data(), n.values.data(), n.shape.size());
    return push(std::move(n));
}

Tensor Tape::concat_cols(const std::vector<Tensor>& parts) {
    if (parts.empty()) throw ShapeMismatch("concat_cols: no operands");
    Node n;
    n.op = Op::ConcatCols;
    int64_t cols = 0;
    for (const Tensor& t : parts) {
        if (node(t).shape.rows != node(parts[0]).shape.rows)
            throw ShapeMismatch("concat_cols: row counts differ");
        cols += node(t).shape.cols;
        n.inputs.push_back(t.id);
        n.needs_grad = n.needs_grad || node(t).needs_grad;
    }
    n.shape = {node(parts[0]).shape.rows, cols};
    n.values.resize(n.shape.size());
    for (int64_t r = 0; r < n.shape.rows; ++r) {
        int64_t offset = 0;
        for (const Tensor& t : parts) {
            const int64_t w = node(t).shape.cols;
            std::memcpy(n.values.data() + r * cols + offset, node(t).values.data() + r * w,
                        w * sizeof(double));
            offset += w;
        }
    }
    return push(std::move(n));
}

Tensor Tape::gather_rows(Tensor a, const std::vector<int64_t>& index) {
    Node n;
    n.op = Op::GatherRows;
    n.shape = {static_cast<int64_t>(index.size()), node(a).shape.cols};
    n.a = a.id;
    n.index = &index;
    n.needs_grad = node(a).needs_grad;
    n.values.resize(n.shape.size());
    const int64_t cols = n.shape.cols;
    for (size_t r = 0; r < index.size(); ++r)
        std::memcpy(n.values.data() + r * cols, node(a).values.data() + index[r] * cols,
                    cols * sizeof(double));
    return push(std::move(n));
}

Tensor Tape::row_masked_aggregate(Tensor edge_values, const std::vector<int64_t>& receiver,
                                  int64_t out_rows) {
    if (node(edge_values).shape.rows != static_cast<int64_t>(receiver.size()))
        throw ShapeMismatch("row_masked_aggregate: one receiver per edge row required");
    Node n;
    n.op = Op::SegmentSum;
    n.shape = {out_rows, node(edge_values).shape.cols};
    n.a = edge_values.id;
    n.index = &receiver;
    n.needs_grad = node(edge_values).needs_grad;
    n.values.assign(n.shape.size(), 0.0);
    const int64_t cols = n.shape.cols;
    const auto& ev = node(edge_values).values;
    for (size_t e = 0; e < receiver.size(); ++e)
        kernels::axpy(1.0, ev.data() + e * cols, n.values.data() + receiver[e] * cols, cols);
    return push(std::move(n));
}

Tensor Tape::scale_rows(Tensor a, const std::vector<double>& factors) {
    if (node(a).shape.rows != static_cast<int64_t>(factors.size()))
        throw ShapeMismatch("scale_rows: one factor per row required");
    Node n;
    n.op = Op::ScaleRows;
    n.shape = node(a).shape;
    n.a = a.id;
    n.factors = &factors;
    n.needs_grad = node(a).needs_grad;
    n.values.resize(n.shape.size());
    const int64_t cols = n.shape.cols;
    for (int64_t r = 0; r < n.shape.rows; ++r)
        for (int64_t ccol = 0; ccol < cols; ++ccol)
            n.values[r * cols + ccol] = factors[r] * node(a).values[r * cols + ccol];
    return push(std::move(n));
}

Tensor Tape::safe_div(Tensor num, Tensor den, double eps) {
    check_same_shape(num, den, "safe_div");
    Node n;
    n.op = Op::SafeDiv;
    n.shape = node(num).shape;
    n.a = num.id;
    n.b = den.id;
    n.scalar = eps;
    n.needs_grad = node(num).needs_grad || node(den).needs_grad;
    n.values.resize(n.shape.size());
    for (int64_t i = 0; i < n.shape.size(); ++i) {
        const double d = node(den).values[i];
        n.values[i] = std::abs(d) > eps ? node(num).values[i] / d : 0.0;
    }
    return push(std::move(n));
}

Tensor Tape::sim_exp(Tensor a, Tensor b) {
    check_same_shape(a, b, "sim_exp");
    Node n;
    n.op = Op::SimExp;
    n.shape = node(a).shape;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = node(a).needs_grad || node(b).needs_grad;
    n.values.resize(n.shape.size());
    for (int64_t i = 0; i < n.shape.size(); ++i) {
        const double d = node(a).values[i] - node(b).values[i];
        n.values[i] = std::exp(-d * d);
    }
    return push(std::move(n));
}

Tensor Tape::batch_norm(Tensor a, Tensor gamma, Tensor beta, BatchNormState& state,
                        bool training) {
    const int64_t rows = node(a).shape.rows;
    const int64_t cols = node(a).shape.cols;
    if (node(gamma).shape.cols != cols || node(beta).shape.cols != cols ||
        node(gamma).shape.rows != 1 || node(beta).shape.rows != 1)
        throw ShapeMismatch("batch_norm: gamma/beta must be 1 x cols");
    if (!state.initialized) {
        state.running_mean.assign(cols, 0.0);
        state.running_var.assign(cols, 1.0);
        state.initialized = true;
    }

    Node n;
    n.op = Op::BatchNorm;
    n.shape = node(a).shape;
    n.a = a.id;
    n.b = gamma.id;
    n.c = beta.id;
    n.scalar = training ? 1.0 : 0.0;
    n.needs_grad = node(a).needs_grad || node(gamma).needs_grad || node(beta).needs_grad;
    n.values.resize(n.shape.size());
    // aux layout: mean[cols], inv_std[cols], xhat[rows*cols]
    n.aux.resize(2 * cols + rows * cols);
    double* mean = n.aux.data();
    double* inv_std = n.aux.data() + cols;
    double* xhat = n.aux.data() + 2 * cols;

    const auto& av = node(a).values;
    if (training) {
        if (rows < 2) throw ShapeMismatch("batch_norm: training mode needs at least two rows");
        for (int64_t j = 0; j < cols; ++j) {
            double s = 0.0;
            for (int64_t r = 0; r < rows; ++r) s += av[r * cols + j];
            mean[j] = s / rows;
            double var = 0.0;
            for (int64_t r = 0; r < rows; ++r) {
                const double d = av[r * cols + j] - mean[j];
                var += d * d;
            }
            const double biased = var / rows;
            inv_std[j] = 1.0 / std::sqrt(biased + state.eps);
            state.running_mean[j] =
                (1.0 - state.momentum) * state.running_mean[j] + state.momentum * mean[j];
            state.running_var[j] = (1.0 - state.momentum) * state.running_var[j] +
                                   state.momentum * var / (rows - 1);
        }
    } else {
        for (int64_t j = 0; j < cols; ++j) {
            mean[j] = state.running_mean[j];
            inv_std[j] = 1.0 / std::sqrt(state.running_var[j] + state.eps);
        }
    }
    const auto& gv = node(gamma).values;
    const auto& bv = node(beta).values;
    for (int64_t r = 0; r < rows; ++r) {
        for (int64_t j = 0; j < cols; ++j) {
            const double xh = (av[r * cols + j] - mean[j]) * inv_std[j];
            xhat[r * cols + j] = xh;
            n.values[r * cols + j] = gv[j] * xh + bv[j];
        }
    }
    return push(std::move(n));
}

Tensor Tape::sum_all(Tensor a) {
    Node n;
    n.op = Op::SumAll;
    n.shape = {1, 1};
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    double s = 0.0;
    for (const double v : node(a).values) s += v;
    n.values = {s};
    return push(std::move(n));
}

Tensor Tape::mean_all(Tensor a) {
    Node n;
    n.op = Op::MeanAll;
    n.shape = {1, 1};
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    double s = 0.0;
    for (const double v : node(a).values) s += v;
    n.values = {s / node(a).shape.size()};
    return push(std::move(n));
}

Tensor Tape::variance_all(Tensor a) {
    const int64_t count = node(a).shape.size();
    if (count < 2) throw ShapeMismatch("variance_all: needs at least two elements");
    Node n;
    n.op = Op::VarianceAll;
    n.shape = {1, 1};
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    double s = 0.0;
    for (const double v : node(a).values) s += v;
    const double mean = s / count;
    double var = 0.0;
    for (const double v : node(a).values) var += (v - mean) * (v - mean);
    n.values = {var / (count - 1)};
    n.aux = {mean};
    return push(std::move(n));
}

const std::vector<double>& Tape::values(Tensor t) const { return node(t).values; }

const std::vector<double>& Tape::gradient(Tensor t) const {
    if (node(t).grad.empty()) throw std::logic_error("gradient not computed for this tensor");
    return node(t).grad;
}

void Tape::backward(Tensor loss) {
    if (!(node(loss).shape == Shape{1, 1}))
        throw ShapeMismatch("backward: loss must be a 1x1 tensor");

    for (auto& n : nodes_)
        if (n.needs_grad) n.grad.assign(n.values.size(), 0.0);
    Node& top = nodes_[loss.id];
    if (!top.needs_grad) return;  // constant loss, all gradients stay zero
    top.grad[0] = 1.0;

    for (int32_t id = loss.id; id >= 0; --id) {
        Node& n = nodes_[id];
        if (!n.needs_grad || n.grad.empty()) continue;
        const double* g = n.grad.data();
        const int64_t size = n.shape.size();
        const int64_t cols = n.shape.cols;

        auto grad_of = [&](int32_t input) -> double* {
            return nodes_[input].needs_grad ? nodes_[input].grad.data() : nullptr;
        };

        switch (n.op) {
            case Op::Leaf:
                break;
            case Op::Matmul: {
                Node& A = nodes_[n.a];
                Node& B = nodes_[n.b];
                const int64_t m = A.shape.rows, k = A.shape.cols, p = B.shape.cols;
                if (A.needs_grad) {
                    // dA += dC * B^T
                    std::vector<double> bt(k * p);
                    for (int64_t r = 0; r < k; ++r)
                        for (int64_t q = 0; q < p; ++q) bt[q * k + r] = B.values[r * p + q];
                    kernels::gemm(g, bt.data(), A.grad.data(), m, p, k, true);
                }
                if (B.needs_grad) {
                    // dB += A^T * dC
                    std::vector<double> at(k * m);
                    for (int64_t r = 0; r < m; ++r)
                        for (int64_t q = 0; q < k; ++q) at[q * m + r] = A.values[r * k + q];
                    kernels::gemm(at.data(), g, B.grad.data(), k, m, p, true);
                }
                break;
            }
            case Op::Add:
                if (double* ga = grad_of(n.a)) kernels::axpy(1.0, g, ga, size);
                if (double* gb = grad_of(n.b)) kernels::axpy(1.0, g, gb, size);
                break;
            case Op::AddRowvec: {
                if (double* ga = grad_of(n.a)) kernels::axpy(1.0, g, ga, size);
                if (double* gb = grad_of(n.b)) {
                    for (int64_t r = 0; r < n.shape.rows; ++r)
                        kernels::axpy(1.0, g + r * cols, gb, cols);
                }
                break;
            }
            case Op::Sub:
                if (double* ga = grad_of(n.a)) kernels::axpy(1.0, g, ga, size);
                if (double* gb = grad_of(n.b)) kernels::axpy(-1.0, g, gb, size);
                break;
            case Op::Mul: {
                if (double* ga = grad_of(n.a)) {
                    const auto& bv = nodes_[n.b].values;
                    for (int64_t i = 0; i < size; ++i) ga[i] += g[i] * bv[i];
                }
                if (double* gb = grad_of(n.b)) {
                    const auto& av = nodes_[n.a].values;
                    for (int64_t i = 0; i < size; ++i) gb[i] += g[i] * av[i];
                }
                break;
            }
            case Op::Scale:
                if (double* ga = grad_of(n.a)) kernels::axpy(n.scalar, g, ga, size);
                break;
            case Op::AddScalar:
                if (double* ga = grad_of(n.a)) kernels::axpy(1.0, g, ga, size);
                break;
            case Op::Relu:
                if (double* ga = grad_of(n.a))
                    kernels::relu_backward(nodes_[n.a].values.data(), g, ga, size);
                break;
            case Op::Tanh:
                if (double* ga = grad_of(n.a)) {
                    for (int64_t i = 0; i < size; ++i)
                        ga[i] += g[i] * (1.0 - n.values[i] * n.values[i]);
                }
                break;
            case Op::Sigmoid:
                if (double* ga = grad_of(n.a)) {
                    for (int64_t i = 0; i < size; ++i)
                        ga[i] += g[i] * n.values[i] * (1.0 - n.values[i]);
                }
                break;
            case Op::Exp:
                if (double* ga = grad_of(n.a)) {
                    for (int64_t i = 0; i < size; ++i) ga[i] += g[i] * n.values[i];
                }
                break;
            case Op::Square:
                if (double* ga = grad_of(n.a)) {
                    const auto& av = nodes_[n.a].values;
                    for (int64_t i = 0; i < size; ++i) ga[i] += g[i] * 2.0 * av[i];
                }
                break;
            case Op::ConcatCols: {
                int64_t offset = 0;
                for (const int32_t input : n.inputs) {
                    Node& part = nodes_[input];
                    const int64_t w = part.shape.cols;
                    if (part.needs_grad) {
                        for (int64_t r = 0; r < n.shape.rows; ++r)
                            kernels::axpy(1.0, g + r * cols + offset, part.grad.data() + r * w, w);
                    }
                    offset += w;
                }
                break;
            }
            case Op::GatherRows:
                if (double* ga = grad_of(n.a)) {
                    for (int64_t r = 0; r < n.shape.rows; ++r)
                        kernels::axpy(1.0, g + r * cols, ga + (*n.index)[r] * cols, cols);
                }
                break;
            case Op::SegmentSum:
                if (double* ga = grad_of(n.a)) {
                    const auto& receiver = *n.index;
                    for (size_t e = 0; e < receiver.size(); ++e)
                        kernels::axpy(1.0, g + receiver[e] * cols, ga + e * cols, cols);
                }
                break;
            case Op::ScaleRows:
                if (double* ga = grad_of(n.a)) {
                    for (int64_t r = 0; r < n.shape.rows; ++r)
                        kernels::axpy((*n.factors)[r], g + r * cols, ga + r * cols, cols);
                }
                break;
            case Op::SafeDiv: {
                const auto& num = nodes_[n.a].values;
                const auto& den = nodes_[n.b].values;
                double* ga = grad_of(n.a);
                double* gb = grad_of(n.b);
                for (int64_t i = 0; i < size; ++i) {
                    if (std::abs(den[i]) <= n.scalar) continue;
                    if (ga) ga[i] += g[i] / den[i];
                    if (gb) gb[i] -= g[i] * num[i] / (den[i] * den[i]);
                }
                break;
            }
            case Op::SimExp: {
                const auto& av = nodes_[n.a].values;
                const auto& bv = nodes_[n.b].values;
                double* ga = grad_of(n.a);
                double* gb = grad_of(n.b);
                for (int64_t i = 0; i < size; ++i) {
                    const double d = av[i] - bv[i];
                    const double dv = g[i] * n.values[i] * -2.0 * d;
                    if (ga) ga[i] += dv;
                    if (gb) gb[i] -= dv;
                }
                break;
            }
            case Op::BatchNorm: {
                const int64_t rows = n.shape.rows;
                const double* mean = n.aux.data();
                const double* inv_std = n.aux.data() + cols;
                const double* xhat = n.aux.data() + 2 * cols;
                const auto& gv = nodes_[n.b].values;
                double* ggamma = grad_of(n.b);
                double* gbeta = grad_of(n.c);
                for (int64_t r = 0; r < rows && (ggamma || gbeta); ++r) {
                    for (int64_t j = 0; j < cols; ++j) {
                        if (ggamma) ggamma[j] += g[r * cols + j] * xhat[r * cols + j];
                        if (gbeta) gbeta[j] += g[r * cols + j];
                    }
                }
                if (double* ga = grad_of(n.a)) {
                    if (n.scalar > 0.5) {
                        // training mode: gradients flow through mean and var
                        for (int64_t j = 0; j < cols; ++j) {
                            double sum_g = 0.0, sum_gx = 0.0;
                            for (int64_t r = 0; r < rows; ++r) {
                                const double gy = g[r * cols + j] * gv[j];
                                sum_g += gy;
                                sum_gx += gy * xhat[r * cols + j];
                            }
                            for (int64_t r = 0; r < rows; ++r) {
                                const double gy = g[r * cols + j] * gv[j];
                                ga[r * cols + j] +=
                                    inv_std[j] *
                                    (gy - sum_g / rows - xhat[r * cols + j] * sum_gx / rows);
                            }
                        }
                    } else {
                        for (int64_t r = 0; r < rows; ++r)
                            for (int64_t j = 0; j < cols; ++j)
                                ga[r * cols + j] += g[r * cols + j] * gv[j] * inv_std[j];
                    }
                }
                (void)mean;
                break;
            }
            case Op::SumAll:
                if (double* ga = grad_of(n.a)) {
                    const int64_t in_size = nodes_[n.a].shape.size();
                    for (int64_t i = 0; i < in_size; ++i) ga[i] += g[0];
                }
                break;
            case Op::MeanAll:
                if (double* ga = grad_of(n.a)) {
                    const int64_t in_size = nodes_[n.a].shape.size();
                    const double share = g[0] / in_size;
                    for (int64_t i = 0; i < in_size; ++i) ga[i] += share;
                }
                break;
            case Op::VarianceAll:
                if (double* ga = grad_of(n.a)) {
                    const int64_t in_size = nodes_[n.a].shape.size();
                    const double mean = n.aux[0];
                    const auto& av = nodes_[n.a].values;
                    const double scale = 2.0 * g[0] / (in_size - 1);
                    for (int64_t i = 0; i < in_size; ++i) ga[i] += scale * (av[i] - mean);
                }
                break;
        }
    }
}

void Tape::clear() { nodes_.clear(); }

std::vector<double> inv_sqrt_degrees(const AttributedNetwork& net) {
    std::vector<double> out(net.n, 0.0);
    for (int64_t i = 0; i < net.n; ++i) {
        const int64_t deg = net.degree(i);
        out[i] = deg > 0 ? 1.0 / std::sqrt(static_cast<double>(deg)) : 0.0;
    }
    return out;
}

std::vector<double> triangle_count_per_edge(const AttributedNetwork& net) {
    const auto mutual = net.mutual_neighbor_counts();
    std::vector<double> out(net.col_indices.size(), 0.0);
    for (size_t slot = 0; slot < net.col_indices.size(); ++slot)
        out[slot] = mutual[net.payload_index[slot]];
    return out;
}

}  // namespace idenet::nn
