#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "idenet/attributed_network.hpp"

namespace idenet::nn {

struct Shape {
    int64_t rows = 0;
    int64_t cols = 0;
    int64_t size() const { return rows * cols; }
    bool operator==(const Shape&) const = default;
};

class Tape;

// handle into a tape; cheap to copy, valid until the tape is cleared
struct Tensor {
    Tape* tape = nullptr;
    int32_t id = -1;
    Shape shape;
};

class ShapeMismatch : public std::invalid_argument {
public:
    explicit ShapeMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// running statistics for one batch-norm layer, owned by the model
struct BatchNormState {
    std::vector<double> running_mean;
    std::vector<double> running_var;
    double momentum = 0.1;
    double eps = 1e-5;
    bool initialized = false;
};

// Reverse-mode tape over row-major 2-d value buffers. One recording session
// is single threaded; independent tapes can run on separate threads. Index
// vectors passed to gather/segment ops are borrowed and must outlive the
// tape.
class Tape {
public:
    // leaves: `parameter` participates in backward, `constant` does not
    Tensor parameter(Shape shape, const double* values);
    Tensor constant(Shape shape, const double* values);
    Tensor constant(Shape shape, double fill);

    Tensor matmul(Tensor a, Tensor b);
    Tensor add(Tensor a, Tensor b);
    // bias is 1 x cols, added to every row
    Tensor add_rowvec(Tensor a, Tensor bias);
    Tensor sub(Tensor a, Tensor b);
    Tensor mul(Tensor a, Tensor b);
    Tensor scale(Tensor a, double factor);
    Tensor add_scalar(Tensor a, double addend);
    Tensor relu(Tensor a);
    Tensor tanh(Tensor a);
    Tensor sigmoid(Tensor a);
    Tensor exp(Tensor a);
    Tensor square(Tensor a);
    Tensor concat_cols(const std::vector<Tensor>& parts);
    // out[r] = a[index[r]]
    Tensor gather_rows(Tensor a, const std::vector<int64_t>& index);
    // per-receiver sums of edge rows: out[receiver[e]] += a[e]
    Tensor row_masked_aggregate(Tensor edge_values, const std::vector<int64_t>& receiver,
                                int64_t out_rows);
    // row r scaled by factors[r] (constant weights)
    Tensor scale_rows(Tensor a, const std::vector<double>& factors);
    // num/den elementwise, 0 wherever |den| <= eps
    Tensor safe_div(Tensor num, Tensor den, double eps = 1e-12);
    // exp(-(a-b)^2) elementwise
    Tensor sim_exp(Tensor a, Tensor b);
    Tensor batch_norm(Tensor a, Tensor gamma, Tensor beta, BatchNormState& state, bool training);
    Tensor sum_all(Tensor a);
    Tensor mean_all(Tensor a);
    // sample variance (n-1 denominator), 1x1
    Tensor variance_all(Tensor a);

    const std::vector<double>& values(Tensor t) const;
    const std::vector<double>& gradient(Tensor t) const;

    // seeds d(loss)/d(loss) = 1 and accumulates gradients for every
    // parameter leaf; loss must be 1x1
    void backward(Tensor loss);

    size_t node_count() const { return nodes_.size(); }
    void clear();

private:
    enum class Op {
        Leaf, Matmul, Add, AddRowvec, Sub, Mul, Scale, AddScalar, Relu, Tanh, Sigmoid, Exp,
        Square, ConcatCols, GatherRows, SegmentSum, ScaleRows, SafeDiv, SimExp, BatchNorm,
        SumAll, MeanAll, VarianceAll,
    };

    struct Node {
        Op op;
        Shape shape;
        std::vector<double> values;
        std::vector<double> grad;
        bool needs_grad = false;
        int32_t a = -1, b = -1, c = -1;  // inputs (c: batch-norm beta)
        double scalar = 0.0;
        const std::vector<int64_t>* index = nullptr;
        const std::vector<double>* factors = nullptr;
        std::vector<int32_t> inputs;     // concat only
        std::vector<double> aux;         // op scratch saved for backward
    };

    Tensor push(Node node);
    Node& node(Tensor t) { return nodes_[t.id]; }
    const Node& node(Tensor t) const { return nodes_[t.id]; }
    void check_same_shape(Tensor a, Tensor b, const char* what) const;

    std::vector<Node> nodes_;
};

// degree^(-1/2) per node, 0 for isolated nodes
std::vector<double> inv_sqrt_degrees(const AttributedNetwork& network);

// common-neighbour count per directed CSR slot
std::vector<double> triangle_count_per_edge(const AttributedNetwork& network);

}  // namespace idenet::nn
