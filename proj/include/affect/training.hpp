#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affect/late_fusion.hpp"
#include "affect/metrics.hpp"
#include "affect/model.hpp"

namespace affect {

struct TrainConfig {
    Target target = Target::arousal;
    std::size_t max_epochs = 300;
    std::size_t patience = 20;  // 0 disables early stopping
    std::size_t batch_size = 32;
    double learning_rate = 1e-2;
    std::optional<double> fine_tune_lr;  // defaults to learning_rate
    std::uint64_t seed = 7;
    bool shuffle = true;
    bool verbose = false;  // per-epoch progress lines on stdout

    void validate() const;
};

// Reference configuration: learning rate 1e-2 for arousal, 1e-3 for valence.
TrainConfig default_train_config(Target target);

// One labeled utterance ready for a model.
struct LabeledBundle {
    std::string utterance_id;
    std::string video_id;
    FeatureBundle features;
    double arousal = 0.0;
    double valence = 0.0;
};

using ExampleSet = std::vector<LabeledBundle>;

double target_of(const LabeledBundle& example, Target target);

// Decides when to stop from a stream of monitored validation losses.
// Improvement means strictly below the best seen; training stops once
// `patience` consecutive epochs fail to improve.
class EarlyStopper {
public:
    explicit EarlyStopper(std::size_t patience) : patience_(patience) {}

    // Returns true when training should stop after this epoch.
    bool observe(double val_loss);

    std::size_t best_epoch() const { return best_epoch_; }  // 1-based
    double best_loss() const { return best_loss_; }
    bool improved_last() const { return streak_ == 0; }

private:
    std::size_t patience_;
    std::size_t epoch_ = 0;
    std::size_t best_epoch_ = 0;
    double best_loss_ = 0.0;
    std::size_t streak_ = 0;
};

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
    MetricsReport val_report;
};

struct TrainHistory {
    std::string monitor;  // "mse" or "one_minus_ccc"
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;  // 1-based
    double best_val_loss = 0.0;
    double first_batch_loss = 0.0;  // loss of epoch 1's first minibatch
    std::string stop_reason;        // "early-stopping" or "max-epochs"
};

// One optimization phase: seeded shuffling, minibatch updates, end-of-epoch
// validation, early stopping, best-epoch weight restoration. The monitored
// validation loss matches the phase objective (MSE, or pooled 1-CCC).
TrainHistory train_phase(Model& model, const ExampleSet& train_set, const ExampleSet& val_set,
                         const TrainConfig& cfg, LossKind loss);

struct FitResult {
    TrainHistory phase1;  // MSE pretraining
    TrainHistory phase2;  // 1-CCC refinement
};

// MSE pretraining followed by 1-CCC fine-tuning from the phase-1 best weights.
FitResult fit_and_refine(Model& model, const ExampleSet& train_set, const ExampleSet& val_set,
                         const TrainConfig& cfg);

// Least-squares combination of three trained unimodal models' predictions.
LateFusionCombiner fit_late_fusion(const Model& visual, const Model& audio, const Model& text,
                                   const ExampleSet& fit_set, Target target);

MetricsReport evaluate_model(const Model& model, const ExampleSet& data, Target target);
MetricsReport evaluate_late_fusion(const Model& visual, const Model& audio, const Model& text,
                                   const LateFusionCombiner& combiner, const ExampleSet& data,
                                   Target target);

}  // namespace affect
