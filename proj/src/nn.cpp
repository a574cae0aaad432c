#include "affect/nn.hpp"

#include <cmath>
#include <limits>

#include "affect/errors.hpp"

namespace affect {

namespace {

constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon() / 2;

std::string layer_to_string(const LayerSpec& l, std::size_t index) {
    std::string kind;
    switch (l.kind) {
        case LayerKind::dense: kind = "dense"; break;
        case LayerKind::lstm: kind = "lstm"; break;
        case LayerKind::dropout: kind = "dropout"; break;
        case LayerKind::activation: kind = "activation"; break;
    }
    return "layer" + std::to_string(index) + " (" + kind + " " + std::to_string(l.in_dim) +
           "->" + std::to_string(l.out_dim) + ")";
}

void fill_uniform(Tensor& t, double bound, RngState& rng) {
    for (double& v : t.values()) v = rng.uniform(-bound, bound);
}

}  // namespace

void ParamSet::add(const std::string& name, Tensor t) {
    if (!tensors_.emplace(name, std::move(t)).second)
        throw ConfigError("duplicate parameter name: " + name);
}

Tensor& ParamSet::at(const std::string& name) {
    auto it = tensors_.find(name);
    if (it == tensors_.end()) throw ConfigError("unknown parameter: " + name);
    return it->second;
}

const Tensor& ParamSet::at(const std::string& name) const {
    auto it = tensors_.find(name);
    if (it == tensors_.end()) throw ConfigError("unknown parameter: " + name);
    return it->second;
}

void ParamSet::set(const std::string& name, Tensor t) {
    Tensor& current = at(name);
    if (!current.same_shape(t))
        throw ConfigError("parameter " + name + " shape is fixed at " +
                          shape_to_string(current) + ", got " + shape_to_string(t));
    current = std::move(t);
}

std::size_t ParamSet::total_values() const {
    std::size_t n = 0;
    for (const auto& [name, t] : tensors_) n += t.size();
    return n;
}

ParamSet zeros_like(const ParamSet& params) {
    ParamSet out;
    for (const auto& [name, t] : params.entries()) out.add(name, Tensor(t.shape()));
    return out;
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
    }
    return "identity";
}

Activation activation_from_name(const std::string& name) {
    if (name == "identity") return Activation::identity;
    if (name == "relu") return Activation::relu;
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "tanh") return Activation::tanh;
    throw ConfigError("unknown activation: " + name);
}

double apply_activation(Activation a, double z) {
    switch (a) {
        case Activation::identity:
            return z;
        case Activation::relu:
            return z > 0.0 ? z : 0.0;
        case Activation::sigmoid: {
            double s = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                                : std::exp(z) / (1.0 + std::exp(z));
            if (s >= 1.0) s = kBelowOne;
            if (s <= 0.0) s = std::numeric_limits<double>::min();
            return s;
        }
        case Activation::tanh: {
            double t = std::tanh(z);
            if (t >= 1.0) t = kBelowOne;
            if (t <= -1.0) t = -kBelowOne;
            return t;
        }
    }
    return z;
}

double activation_derivative_from_output(Activation a, double y) {
    switch (a) {
        case Activation::identity: return 1.0;
        case Activation::relu: return y > 0.0 ? 1.0 : 0.0;
        case Activation::sigmoid: return y * (1.0 - y);
        case Activation::tanh: return 1.0 - y * y;
    }
    return 1.0;
}

void apply_activation_inplace(Activation a, Tensor& t) {
    if (a == Activation::identity) return;
    for (double& v : t.values()) v = apply_activation(a, v);
}

void init_dense(ParamSet& params, const std::string& prefix, std::size_t in_dim,
                std::size_t out_dim, RngState& rng) {
    if (in_dim == 0 || out_dim == 0)
        throw ConfigError("dense layer " + prefix + " has a zero dimension");
    Tensor W(std::vector<std::size_t>{in_dim, out_dim});
    double bound = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    fill_uniform(W, bound, rng);
    params.add(prefix + ".W", std::move(W));
    params.add(prefix + ".b", Tensor(std::vector<std::size_t>{out_dim}));
}

void init_lstm(ParamSet& params, const std::string& prefix, std::size_t in_dim,
               std::size_t hidden, RngState& rng) {
    if (in_dim == 0 || hidden == 0)
        throw ConfigError("lstm layer " + prefix + " has a zero dimension");
    Tensor Wx(std::vector<std::size_t>{in_dim, 4 * hidden});
    Tensor Wh(std::vector<std::size_t>{hidden, 4 * hidden});
    // Per-gate fan: each gate block maps in_dim (resp. hidden) to hidden.
    fill_uniform(Wx, std::sqrt(6.0 / static_cast<double>(in_dim + hidden)), rng);
    fill_uniform(Wh, std::sqrt(6.0 / static_cast<double>(hidden + hidden)), rng);
    Tensor b(std::vector<std::size_t>{4 * hidden});
    for (std::size_t j = 0; j < hidden; ++j) b[hidden + j] = 1.0;  // forget gate
    params.add(prefix + ".Wx", std::move(Wx));
    params.add(prefix + ".Wh", std::move(Wh));
    params.add(prefix + ".b", std::move(b));
}

ParamSet init_params(const std::vector<LayerSpec>& spec, RngState& rng) {
    ParamSet params;
    std::size_t width = 0;    // running output width of the chain
    std::size_t last = 0;     // index of the layer that set `width`
    bool have_width = false;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const LayerSpec& l = spec[i];
        std::string prefix = "layer" + std::to_string(i);
        switch (l.kind) {
            case LayerKind::dense:
            case LayerKind::lstm:
                if (have_width && l.in_dim != width)
                    throw ConfigError("dimension chain mismatch: " +
                                      layer_to_string(spec[last], last) + " feeds " +
                                      layer_to_string(l, i));
                if (l.kind == LayerKind::dense)
                    init_dense(params, prefix, l.in_dim, l.out_dim, rng);
                else
                    init_lstm(params, prefix, l.in_dim, l.out_dim, rng);
                width = l.out_dim;
                last = i;
                have_width = true;
                break;
            case LayerKind::dropout:
                if (l.dropout_rate < 0.0 || l.dropout_rate >= 1.0)
                    throw ConfigError("dropout rate must lie in [0,1), got " +
                                      std::to_string(l.dropout_rate));
                break;
            case LayerKind::activation:
                break;  // width preserved, no parameters
        }
    }
    return params;
}

// --- dense ---------------------------------------------------------------

namespace {

void check_dense_shapes(const Tensor& x, const Tensor& W, const Tensor& b) {
    if (x.cols() != W.rows() || W.cols() != b.size())
        throw ConfigError("dense shape mismatch: x " + shape_to_string(x) + " vs W " +
                          shape_to_string(W) + ", b " + shape_to_string(b));
}

Tensor dense_affine(const Tensor& x, const Tensor& W, const Tensor& b) {
    std::size_t batch = x.rows(), in = x.cols(), out = W.cols();
    Tensor y(std::vector<std::size_t>{batch, out});
    for (std::size_t r = 0; r < batch; ++r) {
        const double* xr = x.row_ptr(r);
        double* yr = y.row_ptr(r);
        for (std::size_t j = 0; j < out; ++j) yr[j] = b[j];
        for (std::size_t i = 0; i < in; ++i) {
            double xi = xr[i];
            if (xi == 0.0) continue;
            const double* wr = W.row_ptr(i);
            for (std::size_t j = 0; j < out; ++j) yr[j] += xi * wr[j];
        }
    }
    return y;
}

}  // namespace

Tensor dense_forward(const Tensor& x, const Tensor& W, const Tensor& b, Activation act) {
    check_dense_shapes(x, W, b);
    Tensor y = dense_affine(x, W, b);
    apply_activation_inplace(act, y);
    return y;
}

Tensor dense_forward(const Tensor& x, const Tensor& W, const Tensor& b, Activation act,
                     DenseCache& cache) {
    Tensor y = dense_forward(x, W, b, act);
    cache.x = x;
    cache.y = y;
    return y;
}

Tensor dense_backward(const Tensor& dY, const Tensor& W, Activation act,
                      const DenseCache& cache, Tensor& dW, Tensor& db) {
    std::size_t batch = cache.x.rows(), in = W.rows(), out = W.cols();
    if (dW.empty()) dW = Tensor(std::vector<std::size_t>{in, out});
    if (db.empty()) db = Tensor(std::vector<std::size_t>{out});

    // dZ = dY * act'(y), reusing dY's storage shape
    Tensor dZ = dY;
    for (std::size_t r = 0; r < batch; ++r) {
        double* dzr = dZ.row_ptr(r);
        const double* yr = cache.y.row_ptr(r);
        for (std::size_t j = 0; j < out; ++j)
            dzr[j] *= activation_derivative_from_output(act, yr[j]);
    }

    Tensor dX(std::vector<std::size_t>{batch, in});
    for (std::size_t r = 0; r < batch; ++r) {
        const double* xr = cache.x.row_ptr(r);
        const double* dzr = dZ.row_ptr(r);
        double* dxr = dX.row_ptr(r);
        for (std::size_t i = 0; i < in; ++i) {
            double xi = xr[i];
            double* dwr = dW.row_ptr(i);
            const double* wr = W.row_ptr(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < out; ++j) {
                dwr[j] += xi * dzr[j];
                acc += wr[j] * dzr[j];
            }
            dxr[i] = acc;
        }
        for (std::size_t j = 0; j < out; ++j) db[j] += dzr[j];
    }
    return dX;
}

// --- lstm ----------------------------------------------------------------

namespace {

void check_lstm_shapes(const Tensor& seq, const Tensor& Wx, const Tensor& Wh, const Tensor& b) {
    if (seq.rows() == 0 || seq.size() == 0)
        throw ConfigError("lstm input sequence is empty");
    std::size_t hidden4 = Wx.cols();
    if (seq.cols() != Wx.rows() || Wh.cols() != hidden4 || Wh.rows() * 4 != hidden4 ||
        b.size() != hidden4)
        throw ConfigError("lstm shape mismatch: seq " + shape_to_string(seq) + ", Wx " +
                          shape_to_string(Wx) + ", Wh " + shape_to_string(Wh) + ", b " +
                          shape_to_string(b));
}

}  // namespace

LstmResult lstm_forward(const Tensor& seq, const Tensor& Wx, const Tensor& Wh, const Tensor& b,
                        LstmCache& cache) {
    check_lstm_shapes(seq, Wx, Wh, b);
    std::size_t T = seq.rows(), D = seq.cols(), H = Wh.rows();

    cache.x = seq;
    cache.gates = Tensor(std::vector<std::size_t>{T, 4 * H});
    cache.cell = Tensor(std::vector<std::size_t>{T, H});
    cache.hidden = Tensor(std::vector<std::size_t>{T, H});

    std::vector<double> z(4 * H);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t j = 0; j < 4 * H; ++j) z[j] = b[j];
        const double* xt = seq.row_ptr(t);
        for (std::size_t i = 0; i < D; ++i) {
            double xi = xt[i];
            if (xi == 0.0) continue;
            const double* wr = Wx.row_ptr(i);
            for (std::size_t j = 0; j < 4 * H; ++j) z[j] += xi * wr[j];
        }
        if (t > 0) {
            const double* hprev = cache.hidden.row_ptr(t - 1);
            for (std::size_t k = 0; k < H; ++k) {
                double hk = hprev[k];
                if (hk == 0.0) continue;
                const double* wr = Wh.row_ptr(k);
                for (std::size_t j = 0; j < 4 * H; ++j) z[j] += hk * wr[j];
            }
        }
        double* gt = cache.gates.row_ptr(t);
        double* ct = cache.cell.row_ptr(t);
        double* ht = cache.hidden.row_ptr(t);
        const double* cprev = t > 0 ? cache.cell.row_ptr(t - 1) : nullptr;
        for (std::size_t k = 0; k < H; ++k) {
            double ig = apply_activation(Activation::sigmoid, z[k]);
            double fg = apply_activation(Activation::sigmoid, z[H + k]);
            double gg = apply_activation(Activation::tanh, z[2 * H + k]);
            double og = apply_activation(Activation::sigmoid, z[3 * H + k]);
            gt[k] = ig;
            gt[H + k] = fg;
            gt[2 * H + k] = gg;
            gt[3 * H + k] = og;
            double c = ig * gg + (cprev ? fg * cprev[k] : 0.0);
            ct[k] = c;
            ht[k] = og * std::tanh(c);
        }
    }

    LstmResult out;
    out.hidden_seq = cache.hidden;
    out.last_hidden = Tensor(std::vector<std::size_t>{H});
    const double* last = cache.hidden.row_ptr(T - 1);
    for (std::size_t k = 0; k < H; ++k) out.last_hidden[k] = last[k];
    return out;
}

LstmResult lstm_forward(const Tensor& seq, const Tensor& Wx, const Tensor& Wh, const Tensor& b) {
    LstmCache cache;
    return lstm_forward(seq, Wx, Wh, b, cache);
}

void lstm_backward(const Tensor& dH, const Tensor& Wx, const Tensor& Wh,
                   const LstmCache& cache, Tensor& dWx, Tensor& dWh, Tensor& db, Tensor* dX) {
    std::size_t T = cache.x.rows(), D = cache.x.cols(), H = Wh.rows();
    if (dH.rows() != T || dH.cols() != H)
        throw ConfigError("lstm backward: dH " + shape_to_string(dH) + " does not match T=" +
                          std::to_string(T) + ", H=" + std::to_string(H));
    if (dWx.empty()) dWx = Tensor(std::vector<std::size_t>{D, 4 * H});
    if (dWh.empty()) dWh = Tensor(std::vector<std::size_t>{H, 4 * H});
    if (db.empty()) db = Tensor(std::vector<std::size_t>{4 * H});
    if (dX && dX->empty()) *dX = Tensor(std::vector<std::size_t>{T, D});

    std::vector<double> dh(H, 0.0), dc(H, 0.0), dz(4 * H);
    for (std::size_t t = T; t-- > 0;) {
        const double* gt = cache.gates.row_ptr(t);
        const double* ct = cache.cell.row_ptr(t);
        const double* cprev = t > 0 ? cache.cell.row_ptr(t - 1) : nullptr;
        const double* dht_in = dH.row_ptr(t);

        for (std::size_t k = 0; k < H; ++k) {
            double ig = gt[k], fg = gt[H + k], gg = gt[2 * H + k], og = gt[3 * H + k];
            double tc = std::tanh(ct[k]);
            double dht = dh[k] + dht_in[k];
            double dct = dc[k] + dht * og * (1.0 - tc * tc);
            double d_og = dht * tc;
            double d_ig = dct * gg;
            double d_gg = dct * ig;
            double d_fg = cprev ? dct * cprev[k] : 0.0;
            dz[k] = d_ig * ig * (1.0 - ig);
            dz[H + k] = d_fg * fg * (1.0 - fg);
            dz[2 * H + k] = d_gg * (1.0 - gg * gg);
            dz[3 * H + k] = d_og * og * (1.0 - og);
            dc[k] = dct * fg;  // flows to c_{t-1}
        }

        const double* xt = cache.x.row_ptr(t);
        for (std::size_t i = 0; i < D; ++i) {
            double xi = xt[i];
            double* dwr = dWx.row_ptr(i);
            const double* wr = Wx.row_ptr(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < 4 * H; ++j) {
                dwr[j] += xi * dz[j];
                acc += wr[j] * dz[j];
            }
            if (dX) (*dX)(t, i) = acc;
        }
        for (std::size_t j = 0; j < 4 * H; ++j) db[j] += dz[j];

        if (t > 0) {
            const double* hprev = cache.hidden.row_ptr(t - 1);
            for (std::size_t k = 0; k < H; ++k) {
                double hk = hprev[k];
                double* dwr = dWh.row_ptr(k);
                const double* wr = Wh.row_ptr(k);
                double acc = 0.0;
                for (std::size_t j = 0; j < 4 * H; ++j) {
                    dwr[j] += hk * dz[j];
                    acc += wr[j] * dz[j];
                }
                dh[k] = acc;
            }
        }
    }
}

// --- dropout -------------------------------------------------------------

Tensor dropout_forward(const Tensor& x, double rate, Mode mode, RngState* rng,
                       DropoutCache& cache, const Tensor* frozen_mask) {
    if (rate < 0.0 || rate >= 1.0)
        throw ConfigError("dropout rate must lie in [0,1), got " + std::to_string(rate));
    cache.mask = Tensor();
    if (mode == Mode::eval || rate == 0.0) return x;

    if (frozen_mask) {
        cache.mask = *frozen_mask;
    } else {
        if (!rng) throw UsageError("train-mode dropout needs an rng");
        cache.mask = Tensor(x.shape());
        double keep_scale = 1.0 / (1.0 - rate);
        for (double& m : cache.mask.values()) m = rng->uniform() < rate ? 0.0 : keep_scale;
    }
    Tensor y = x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] *= cache.mask[i];
    return y;
}

Tensor dropout_apply(const Tensor& x, double rate, Mode mode, RngState& rng) {
    DropoutCache cache;
    return dropout_forward(x, rate, mode, &rng, cache);
}

Tensor dropout_backward(const Tensor& dY, const DropoutCache& cache) {
    if (cache.mask.empty()) return dY;
    Tensor dX = dY;
    for (std::size_t i = 0; i < dX.size(); ++i) dX[i] *= cache.mask[i];
    return dX;
}

}  // namespace affect
