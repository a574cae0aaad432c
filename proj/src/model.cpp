#include "affect/model.hpp"

#include <cmath>

#include "affect/errors.hpp"
#include "affect/frames.hpp"

namespace affect {

const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::visual: return "visual";
        case ModelKind::audio: return "audio";
        case ModelKind::audio_lstm: return "audio-lstm";
        case ModelKind::text: return "text";
        case ModelKind::trimodal_early: return "trimodal-early";
    }
    return "trimodal-early";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "visual") return ModelKind::visual;
    if (name == "audio") return ModelKind::audio;
    if (name == "audio-lstm") return ModelKind::audio_lstm;
    if (name == "text") return ModelKind::text;
    if (name == "trimodal-early") return ModelKind::trimodal_early;
    throw ConfigError("unknown model kind: " + name);
}

const char* target_name(Target t) {
    return t == Target::arousal ? "arousal" : "valence";
}

Target target_from_name(const std::string& name) {
    if (name == "arousal") return Target::arousal;
    if (name == "valence") return Target::valence;
    throw ConfigError("unknown target: " + name);
}

Activation head_activation(Target t) {
    return t == Target::arousal ? Activation::sigmoid : Activation::tanh;
}

const char* loss_kind_name(LossKind k) {
    return k == LossKind::mse ? "mse" : "one_minus_ccc";
}

void ModelSpec::validate() const {
    if (visual_dim == 0 || audio_dim == 0 || text_dim == 0)
        throw ConfigError("model spec has a zero input dimension");
    if (frames == 0 || audio_frames == 0)
        throw ConfigError("model spec has a zero sequence length");
    if (lstm_hidden == 0 || branch_dense == 0 || decision_hidden == 0)
        throw ConfigError("model spec has a zero hidden size");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
        throw ConfigError("dropout rate must lie in [0,1), got " + std::to_string(dropout_rate));
}

std::size_t ModelSpec::fused_width() const {
    switch (kind) {
        case ModelKind::visual: return branch_dense;
        case ModelKind::audio: return branch_dense;
        case ModelKind::audio_lstm: return lstm_hidden;
        case ModelKind::text: return branch_dense;
        case ModelKind::trimodal_early: return 3 * branch_dense;
    }
    return branch_dense;
}

bool ModelSpec::uses_visual() const {
    return kind == ModelKind::visual || kind == ModelKind::trimodal_early;
}

bool ModelSpec::uses_audio() const {
    return kind == ModelKind::audio || kind == ModelKind::audio_lstm ||
           kind == ModelKind::trimodal_early;
}

bool ModelSpec::uses_text() const {
    return kind == ModelKind::text || kind == ModelKind::trimodal_early;
}

Model build_model(const ModelSpec& spec, RngState& rng) {
    spec.validate();
    Model model;
    model.spec = spec;
    ParamSet& p = model.params;
    if (spec.uses_visual()) {
        init_lstm(p, "visual.lstm", spec.visual_dim, spec.lstm_hidden, rng);
        init_dense(p, "visual.dense", spec.lstm_hidden, spec.branch_dense, rng);
    }
    if (spec.kind == ModelKind::audio || spec.kind == ModelKind::trimodal_early)
        init_dense(p, "audio.dense", spec.audio_dim, spec.branch_dense, rng);
    if (spec.kind == ModelKind::audio_lstm)
        init_lstm(p, "audio.lstm", spec.audio_dim, spec.lstm_hidden, rng);
    if (spec.uses_text())
        init_dense(p, "text.dense", spec.text_dim, spec.branch_dense, rng);
    init_dense(p, "head.fc1", spec.fused_width(), spec.decision_hidden, rng);
    init_dense(p, "head.fc2", spec.decision_hidden, 1, rng);
    return model;
}

namespace {

void check_modality(const Tensor& t, bool needed, const char* name, std::size_t want_cols,
                    const ModelSpec& spec) {
    if (!needed) return;
    if (t.empty())
        throw InputError(std::string("bundle is missing the ") + name + " modality required by a " +
                         model_kind_name(spec.kind) + " model");
    if (t.cols() != want_cols)
        throw InputError(std::string(name) + " feature width " + std::to_string(t.cols()) +
                         " does not match model dim " + std::to_string(want_cols));
}

Tensor as_single_row(const Tensor& t) {
    if (t.rows() == 1) return t;
    Tensor row(std::vector<std::size_t>{1, t.cols()});
    for (std::size_t j = 0; j < t.cols(); ++j) row[j] = t(0, j);
    return row;
}

const Tensor* mask_of(const ForwardCache* source, const DropoutCache ForwardCache::* member) {
    if (!source) return nullptr;
    const Tensor& m = (source->*member).mask;
    return m.empty() ? nullptr : &m;
}

}  // namespace

double model_forward(const Model& model, const FeatureBundle& bundle, Mode mode,
                     RngState* rng, ForwardCache* cache, const ForwardCache* mask_source) {
    const ModelSpec& spec = model.spec;
    check_modality(bundle.visual, spec.uses_visual(), "visual", spec.visual_dim, spec);
    check_modality(bundle.audio, spec.uses_audio(), "audio", spec.audio_dim, spec);
    check_modality(bundle.text, spec.uses_text(), "text", spec.text_dim, spec);
    if (spec.uses_visual() && bundle.visual.rows() != spec.frames)
        throw InputError("visual sequence has " + std::to_string(bundle.visual.rows()) +
                         " frames, model expects " + std::to_string(spec.frames));

    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    const ParamSet& p = model.params;

    std::vector<double> fused;
    fused.reserve(spec.fused_width());
    auto append = [&fused](const Tensor& t) {
        fused.insert(fused.end(), t.values().begin(), t.values().end());
    };

    if (spec.uses_visual()) {
        LstmResult res = lstm_forward(bundle.visual, p.at("visual.lstm.Wx"),
                                      p.at("visual.lstm.Wh"), p.at("visual.lstm.b"), c.vis_lstm);
        Tensor h(std::vector<std::size_t>{1, spec.lstm_hidden});
        for (std::size_t k = 0; k < spec.lstm_hidden; ++k) h[k] = res.last_hidden[k];
        Tensor branch = dense_forward(h, p.at("visual.dense.W"), p.at("visual.dense.b"),
                                      Activation::relu, c.vis_dense);
        branch = dropout_forward(branch, spec.dropout_rate, mode, rng, c.vis_drop,
                                 mask_of(mask_source, &ForwardCache::vis_drop));
        append(branch);
    }
    if (spec.kind == ModelKind::audio || spec.kind == ModelKind::trimodal_early) {
        Tensor branch = dense_forward(as_single_row(bundle.audio), p.at("audio.dense.W"),
                                      p.at("audio.dense.b"), Activation::relu, c.aud_dense);
        branch = dropout_forward(branch, spec.dropout_rate, mode, rng, c.aud_drop,
                                 mask_of(mask_source, &ForwardCache::aud_drop));
        append(branch);
    }
    if (spec.kind == ModelKind::audio_lstm) {
        Tensor seq = audio_frame_prep(bundle.audio, spec.audio_frames);
        LstmResult res = lstm_forward(seq, p.at("audio.lstm.Wx"), p.at("audio.lstm.Wh"),
                                      p.at("audio.lstm.b"), c.aud_lstm);
        fused.insert(fused.end(), res.last_hidden.values().begin(),
                     res.last_hidden.values().end());
    }
    if (spec.uses_text()) {
        Tensor branch = dense_forward(as_single_row(bundle.text), p.at("text.dense.W"),
                                      p.at("text.dense.b"), Activation::relu, c.txt_dense);
        branch = dropout_forward(branch, spec.dropout_rate, mode, rng, c.txt_drop,
                                 mask_of(mask_source, &ForwardCache::txt_drop));
        append(branch);
    }

    c.fused = Tensor(std::vector<std::size_t>{1, fused.size()});
    c.fused.values() = fused;

    Tensor hidden = dense_forward(c.fused, p.at("head.fc1.W"), p.at("head.fc1.b"),
                                  Activation::relu, c.head_fc1);
    hidden = dropout_forward(hidden, spec.dropout_rate, mode, rng, c.head_drop,
                             mask_of(mask_source, &ForwardCache::head_drop));
    Tensor out = dense_forward(hidden, p.at("head.fc2.W"), p.at("head.fc2.b"),
                               head_activation(spec.target), c.head_fc2);
    c.recorded = true;
    double pred = out[0];
    if (!std::isfinite(pred)) throw NumericError("model produced a non-finite prediction");
    return pred;
}

void model_backward(const Model& model, const ForwardCache& cache, double d_pred,
                    ParamSet& grads) {
    if (!cache.recorded)
        throw UsageError("model_backward called without a recorded forward pass");
    const ModelSpec& spec = model.spec;
    const ParamSet& p = model.params;
    if (grads.count() == 0) grads = zeros_like(model.params);

    Tensor dOut(std::vector<std::size_t>{1, 1});
    dOut[0] = d_pred;
    Tensor dHidden = dense_backward(dOut, p.at("head.fc2.W"), head_activation(spec.target),
                                    cache.head_fc2, grads.at("head.fc2.W"), grads.at("head.fc2.b"));
    dHidden = dropout_backward(dHidden, cache.head_drop);
    Tensor dFused = dense_backward(dHidden, p.at("head.fc1.W"), Activation::relu,
                                   cache.head_fc1, grads.at("head.fc1.W"), grads.at("head.fc1.b"));

    std::size_t offset = 0;
    auto slice = [&dFused](std::size_t start, std::size_t width) {
        Tensor s(std::vector<std::size_t>{1, width});
        for (std::size_t j = 0; j < width; ++j) s[j] = dFused[start + j];
        return s;
    };

    if (spec.uses_visual()) {
        Tensor dBranch = slice(offset, spec.branch_dense);
        offset += spec.branch_dense;
        dBranch = dropout_backward(dBranch, cache.vis_drop);
        Tensor dLast = dense_backward(dBranch, p.at("visual.dense.W"), Activation::relu,
                                      cache.vis_dense, grads.at("visual.dense.W"),
                                      grads.at("visual.dense.b"));
        Tensor dH(std::vector<std::size_t>{spec.frames, spec.lstm_hidden});
        for (std::size_t k = 0; k < spec.lstm_hidden; ++k)
            dH(spec.frames - 1, k) = dLast[k];
        lstm_backward(dH, p.at("visual.lstm.Wx"), p.at("visual.lstm.Wh"), cache.vis_lstm,
                      grads.at("visual.lstm.Wx"), grads.at("visual.lstm.Wh"),
                      grads.at("visual.lstm.b"));
    }
    if (spec.kind == ModelKind::audio || spec.kind == ModelKind::trimodal_early) {
        Tensor dBranch = slice(offset, spec.branch_dense);
        offset += spec.branch_dense;
        dBranch = dropout_backward(dBranch, cache.aud_drop);
        dense_backward(dBranch, p.at("audio.dense.W"), Activation::relu, cache.aud_dense,
                       grads.at("audio.dense.W"), grads.at("audio.dense.b"));
    }
    if (spec.kind == ModelKind::audio_lstm) {
        std::size_t T = cache.aud_lstm.x.rows();
        Tensor dH(std::vector<std::size_t>{T, spec.lstm_hidden});
        for (std::size_t k = 0; k < spec.lstm_hidden; ++k)
            dH(T - 1, k) = dFused[offset + k];
        offset += spec.lstm_hidden;
        lstm_backward(dH, p.at("audio.lstm.Wx"), p.at("audio.lstm.Wh"), cache.aud_lstm,
                      grads.at("audio.lstm.Wx"), grads.at("audio.lstm.Wh"),
                      grads.at("audio.lstm.b"));
    }
    if (spec.uses_text()) {
        Tensor dBranch = slice(offset, spec.branch_dense);
        offset += spec.branch_dense;
        dBranch = dropout_backward(dBranch, cache.txt_drop);
        dense_backward(dBranch, p.at("text.dense.W"), Activation::relu, cache.txt_dense,
                       grads.at("text.dense.W"), grads.at("text.dense.b"));
    }
}

double predict(const Model& model, const FeatureBundle& bundle, Mode mode, RngState* rng) {
    return model_forward(model, bundle, mode, rng);
}

std::vector<double> predict_batch(const Model& model,
                                  const std::vector<const FeatureBundle*>& bundles,
                                  Mode mode, RngState* rng) {
    if (bundles.empty()) throw ConfigError("predict_batch needs a non-empty batch");
    std::vector<double> preds;
    preds.reserve(bundles.size());
    for (const FeatureBundle* b : bundles) preds.push_back(model_forward(model, *b, mode, rng));
    return preds;
}

BatchGradResult compute_gradients(const Model& model,
                                  const std::vector<const FeatureBundle*>& batch,
                                  const std::vector<double>& targets, LossKind loss,
                                  Mode mode, RngState* rng,
                                  const std::vector<ForwardCache>* mask_source,
                                  std::vector<ForwardCache>* caches_out) {
    if (batch.empty()) throw ConfigError("compute_gradients needs a non-empty batch");
    if (batch.size() != targets.size())
        throw ConfigError("batch and target sizes differ");
    if (mask_source && mask_source->size() != batch.size())
        throw ConfigError("mask source size does not match the batch");

    std::vector<ForwardCache> caches(batch.size());
    BatchGradResult result;
    result.preds.resize(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const ForwardCache* masks = mask_source ? &(*mask_source)[i] : nullptr;
        result.preds[i] = model_forward(model, *batch[i], mode, rng, &caches[i], masks);
    }

    PairedSeries series{result.preds, targets};
    std::vector<double> dpred;
    if (loss == LossKind::mse) {
        MseLossResult l = mse_loss_and_grad(series);
        result.loss = l.loss;
        dpred = std::move(l.grad);
    } else {
        CccLossResult l = ccc_loss_and_grad(series);
        result.loss = l.loss;
        dpred = std::move(l.grad);
    }

    result.grads = zeros_like(model.params);
    for (std::size_t i = 0; i < batch.size(); ++i)
        model_backward(model, caches[i], dpred[i], result.grads);

    if (caches_out) *caches_out = std::move(caches);
    return result;
}

namespace {

double batch_loss(const Model& model, const std::vector<const FeatureBundle*>& batch,
                  const std::vector<double>& targets, LossKind loss, Mode mode,
                  const std::vector<ForwardCache>& masks) {
    std::vector<double> preds(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i)
        preds[i] = model_forward(model, *batch[i], mode, nullptr, nullptr, &masks[i]);
    PairedSeries series{std::move(preds), targets};
    if (loss == LossKind::mse) return mse(series);
    return ccc_loss_and_grad(series).loss;
}

}  // namespace

double finite_diff_check(Model& model, const std::vector<const FeatureBundle*>& batch,
                         const std::vector<double>& targets, LossKind loss, double eps,
                         RngState& rng, Mode mode, const ParamSet* analytic_override) {
    if (eps <= 0.0) throw ConfigError("finite difference step must be positive");

    std::vector<ForwardCache> caches;
    BatchGradResult analytic =
        compute_gradients(model, batch, targets, loss, mode, &rng, nullptr, &caches);
    const ParamSet& grads = analytic_override ? *analytic_override : analytic.grads;

    double worst = 0.0;
    for (auto& [name, theta] : model.params.entries()) {
        const Tensor& g = grads.at(name);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            double saved = theta[i];
            theta[i] = saved + eps;
            double up = batch_loss(model, batch, targets, loss, mode, caches);
            theta[i] = saved - eps;
            double down = batch_loss(model, batch, targets, loss, mode, caches);
            theta[i] = saved;
            double fd = (up - down) / (2.0 * eps);
            double denom = std::abs(fd) + std::abs(g[i]);
            double rel = std::abs(fd - g[i]) / (denom > 1e-3 ? denom : 1e-3);
            if (rel > worst) worst = rel;
        }
    }
    return worst;
}

}  // namespace affect
