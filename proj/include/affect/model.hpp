#pragma once

#include <string>
#include <vector>

#include "affect/metrics.hpp"
#include "affect/nn.hpp"
#include "affect/rng.hpp"

namespace affect {

enum class ModelKind { visual, audio, audio_lstm, text, trimodal_early };
enum class Target { arousal, valence };

const char* model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);
const char* target_name(Target t);
Target target_from_name(const std::string& name);

// Arousal heads end in sigmoid, valence heads in tanh.
Activation head_activation(Target t);

// Architecture description. Hidden sizes default to the reference network
// (LSTM 64, branch dense 256, decision hidden 1024); input dims default to
// the reference feature extractors (visual 4805, audio 1582, text 10).
struct ModelSpec {
    ModelKind kind = ModelKind::trimodal_early;
    Target target = Target::arousal;
    std::size_t visual_dim = 4805;
    std::size_t audio_dim = 1582;
    std::size_t text_dim = 10;
    std::size_t frames = 20;        // visual sequence length after sampling
    std::size_t audio_frames = 20;  // sequence length for the audio-lstm variant
    std::size_t lstm_hidden = 64;
    std::size_t branch_dense = 256;
    std::size_t decision_hidden = 1024;
    double dropout_rate = 0.5;

    void validate() const;
    std::size_t fused_width() const;  // decision-head input width
    bool uses_visual() const;
    bool uses_audio() const;
    bool uses_text() const;
};

// Model-ready inputs for one utterance.
struct FeatureBundle {
    Tensor visual;  // frames x visual_dim
    Tensor audio;   // 1 x audio_dim
    Tensor text;    // 1 x text_dim
};

struct Model {
    ModelSpec spec;
    ParamSet params;
};

Model build_model(const ModelSpec& spec, RngState& rng);

// Per-sample forward record; holds everything backward needs, including the
// dropout masks drawn during a train-mode pass.
struct ForwardCache {
    bool recorded = false;
    LstmCache vis_lstm;
    DenseCache vis_dense;
    DropoutCache vis_drop;
    DenseCache aud_dense;
    DropoutCache aud_drop;
    LstmCache aud_lstm;
    DenseCache txt_dense;
    DropoutCache txt_drop;
    Tensor fused;  // 1 x fused_width
    DenseCache head_fc1;
    DropoutCache head_drop;
    DenseCache head_fc2;
};

// Scalar prediction. `rng` is required in train mode when dropout_rate > 0;
// `mask_source`, when given, reuses that cache's dropout masks instead of
// sampling (used by the gradient checker).
double model_forward(const Model& model, const FeatureBundle& bundle, Mode mode,
                     RngState* rng, ForwardCache* cache = nullptr,
                     const ForwardCache* mask_source = nullptr);

// Accumulates d(loss)/d(params) into `grads` from a recorded forward pass.
void model_backward(const Model& model, const ForwardCache& cache, double d_pred,
                    ParamSet& grads);

double predict(const Model& model, const FeatureBundle& bundle, Mode mode = Mode::eval,
               RngState* rng = nullptr);
std::vector<double> predict_batch(const Model& model,
                                  const std::vector<const FeatureBundle*>& bundles,
                                  Mode mode = Mode::eval, RngState* rng = nullptr);

enum class LossKind { mse, one_minus_ccc };
const char* loss_kind_name(LossKind k);

struct BatchGradResult {
    double loss = 0.0;
    std::vector<double> preds;
    ParamSet grads;
};

// One recorded forward pass over the batch, the batch loss, and exact
// analytic gradients for every parameter. Dropout masks drawn during the
// forward pass are retained in `caches_out` when requested.
BatchGradResult compute_gradients(const Model& model,
                                  const std::vector<const FeatureBundle*>& batch,
                                  const std::vector<double>& targets, LossKind loss,
                                  Mode mode, RngState* rng,
                                  const std::vector<ForwardCache>* mask_source = nullptr,
                                  std::vector<ForwardCache>* caches_out = nullptr);

// Central-difference check of every parameter against the analytic gradient,
// with dropout masks frozen from one recorded pass. Returns the worst guarded
// relative error. `analytic_override` substitutes the gradient being checked
// (harness sensitivity testing).
double finite_diff_check(Model& model, const std::vector<const FeatureBundle*>& batch,
                         const std::vector<double>& targets, LossKind loss, double eps,
                         RngState& rng, Mode mode = Mode::train,
                         const ParamSet* analytic_override = nullptr);

}  // namespace affect
