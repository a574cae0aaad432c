#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "affect/rng.hpp"
#include "affect/tensor.hpp"

namespace affect {

// Named tensor map used for trainable parameters and for gradients.
// std::map keeps iteration order deterministic for serialization and updates.
class ParamSet {
public:
    void add(const std::string& name, Tensor t);
    bool has(const std::string& name) const { return tensors_.count(name) != 0; }
    Tensor& at(const std::string& name);
    const Tensor& at(const std::string& name) const;
    // Shape-checked replacement; parameter shapes are fixed at initialization.
    void set(const std::string& name, Tensor t);

    std::size_t count() const { return tensors_.size(); }
    std::size_t total_values() const;
    const std::map<std::string, Tensor>& entries() const { return tensors_; }
    std::map<std::string, Tensor>& entries() { return tensors_; }

    bool operator==(const ParamSet& other) const { return tensors_ == other.tensors_; }

private:
    std::map<std::string, Tensor> tensors_;
};

ParamSet zeros_like(const ParamSet& params);

enum class Activation { identity, relu, sigmoid, tanh };
enum class LayerKind { dense, lstm, dropout, activation };

struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    Activation act = Activation::identity;
    double dropout_rate = 0.5;
};

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Scalar activations. Sigmoid/tanh outputs are nudged off their asymptotes so
// the open-interval range contract holds even for saturating inputs.
double apply_activation(Activation a, double z);
// Derivative expressed through the activation output y.
double activation_derivative_from_output(Activation a, double y);
void apply_activation_inplace(Activation a, Tensor& t);

// --- initialization ------------------------------------------------------

// Symmetric uniform with bound sqrt(6 / (fan_in + fan_out)); biases zero.
void init_dense(ParamSet& params, const std::string& prefix, std::size_t in_dim,
                std::size_t out_dim, RngState& rng);

// Gate order along the 4H axis is [input, forget, candidate, output].
// Forget-gate bias starts at 1, the rest at 0.
void init_lstm(ParamSet& params, const std::string& prefix, std::size_t in_dim,
               std::size_t hidden, RngState& rng);

// Builds a ParamSet for a layer chain; names are "layer<i>.<tensor>".
// Dense/lstm layers must agree with the running width of the chain.
ParamSet init_params(const std::vector<LayerSpec>& spec, RngState& rng);

// --- dense ---------------------------------------------------------------

struct DenseCache {
    Tensor x;  // input, batch x in
    Tensor y;  // post-activation output, batch x out
};

// act(x W + b) for x: batch x in, W: in x out, b: out.
Tensor dense_forward(const Tensor& x, const Tensor& W, const Tensor& b, Activation act);
Tensor dense_forward(const Tensor& x, const Tensor& W, const Tensor& b, Activation act,
                     DenseCache& cache);
// Accumulates dW/db and returns dX. dY is batch x out.
Tensor dense_backward(const Tensor& dY, const Tensor& W, Activation act,
                      const DenseCache& cache, Tensor& dW, Tensor& db);

// --- lstm ----------------------------------------------------------------

struct LstmCache {
    Tensor x;      // T x D
    Tensor gates;  // T x 4H, post-activation [i f g o]
    Tensor cell;   // T x H
    Tensor hidden; // T x H
};

struct LstmResult {
    Tensor hidden_seq;   // T x H
    Tensor last_hidden;  // H
};

// Standard LSTM over a T x D sequence; h_0 = c_0 = 0.
//   i,f,o = sigmoid, g = tanh, c_t = f*c_{t-1} + i*g, h_t = o*tanh(c_t)
LstmResult lstm_forward(const Tensor& seq, const Tensor& Wx, const Tensor& Wh, const Tensor& b);
LstmResult lstm_forward(const Tensor& seq, const Tensor& Wx, const Tensor& Wh, const Tensor& b,
                        LstmCache& cache);
// dH is T x H (zero rows where no gradient arrives). Accumulates dWx/dWh/db;
// dX is filled when non-null.
void lstm_backward(const Tensor& dH, const Tensor& Wx, const Tensor& Wh,
                   const LstmCache& cache, Tensor& dWx, Tensor& dWh, Tensor& db,
                   Tensor* dX = nullptr);

// --- dropout -------------------------------------------------------------

enum class Mode { train, eval };

struct DropoutCache {
    Tensor mask;  // entries are 0 or 1/(1-rate); empty when dropout was a no-op
};

// Inverted dropout: train mode zeroes entries with probability `rate` and
// scales survivors by 1/(1-rate); eval mode is the identity.
Tensor dropout_apply(const Tensor& x, double rate, Mode mode, RngState& rng);
// frozen_mask, when non-null, replaces fresh sampling (gradient checking).
Tensor dropout_forward(const Tensor& x, double rate, Mode mode, RngState* rng,
                       DropoutCache& cache, const Tensor* frozen_mask = nullptr);
Tensor dropout_backward(const Tensor& dY, const DropoutCache& cache);

}  // namespace affect
