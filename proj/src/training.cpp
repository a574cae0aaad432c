#include "affect/training.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "affect/adam.hpp"
#include "affect/errors.hpp"

namespace affect {

void TrainConfig::validate() const {
    if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
    if (patience >= max_epochs && patience != 0)
        throw ConfigError("patience must be smaller than max_epochs");
    if (batch_size < 2) throw ConfigError("batch_size must be at least 2 (CCC needs batch statistics)");
    if (learning_rate < 0.0) throw ConfigError("learning rate must be non-negative");
}

TrainConfig default_train_config(Target target) {
    TrainConfig cfg;
    cfg.target = target;
    cfg.learning_rate = target == Target::arousal ? 1e-2 : 1e-3;
    return cfg;
}

double target_of(const LabeledBundle& example, Target target) {
    return target == Target::arousal ? example.arousal : example.valence;
}

bool EarlyStopper::observe(double val_loss) {
    ++epoch_;
    if (best_epoch_ == 0 || val_loss < best_loss_) {
        best_loss_ = val_loss;
        best_epoch_ = epoch_;
        streak_ = 0;
        return false;
    }
    ++streak_;
    return patience_ > 0 && streak_ >= patience_;
}

namespace {

// Fisher-Yates with explicit draws; std::shuffle is implementation-defined.
void shuffle_indices(std::vector<std::size_t>& idx, RngState& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, i - 1));
        std::swap(idx[i - 1], idx[j]);
    }
}

std::vector<std::vector<std::size_t>> make_batches(const std::vector<std::size_t>& order,
                                                   std::size_t batch_size, LossKind loss) {
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t pos = 0; pos < order.size(); pos += batch_size) {
        std::size_t end = std::min(pos + batch_size, order.size());
        batches.emplace_back(order.begin() + pos, order.begin() + end);
    }
    // CCC statistics need two samples; fold a trailing singleton into the
    // previous batch.
    if (loss == LossKind::one_minus_ccc && batches.size() > 1 && batches.back().size() < 2) {
        batches[batches.size() - 2].push_back(batches.back()[0]);
        batches.pop_back();
    }
    return batches;
}

std::vector<double> eval_predictions(const Model& model, const ExampleSet& data) {
    std::vector<double> preds;
    preds.reserve(data.size());
    for (const LabeledBundle& ex : data)
        preds.push_back(predict(model, ex.features, Mode::eval));
    return preds;
}

std::vector<double> targets_of(const ExampleSet& data, Target target) {
    std::vector<double> t;
    t.reserve(data.size());
    for (const LabeledBundle& ex : data) t.push_back(target_of(ex, target));
    return t;
}

double monitored_val_loss(const MetricsReport& report, LossKind loss) {
    return loss == LossKind::mse ? report.mse : 1.0 - report.ccc;
}

}  // namespace

TrainHistory train_phase(Model& model, const ExampleSet& train_set, const ExampleSet& val_set,
                         const TrainConfig& cfg, LossKind loss) {
    cfg.validate();
    if (train_set.empty() || val_set.empty())
        throw ConfigError("training and validation sets must be non-empty");
    if (val_set.size() < 2)
        throw ConfigError("validation set needs at least 2 utterances for CCC monitoring");

    TrainHistory history;
    history.monitor = loss == LossKind::mse ? "mse" : "one_minus_ccc";

    RngState rng(cfg.seed);
    OptimizerState opt = make_optimizer(model.params, cfg.learning_rate);
    EarlyStopper stopper(cfg.patience);

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> val_targets = targets_of(val_set, cfg.target);

    ParamSet best_params = model.params;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        if (cfg.shuffle) shuffle_indices(order, rng);

        double loss_sum = 0.0;
        std::size_t seen = 0;
        auto batches = make_batches(order, cfg.batch_size, loss);
        for (std::size_t bi = 0; bi < batches.size(); ++bi) {
            const auto& batch_idx = batches[bi];
            std::vector<const FeatureBundle*> batch;
            std::vector<double> targets;
            batch.reserve(batch_idx.size());
            for (std::size_t k : batch_idx) {
                batch.push_back(&train_set[k].features);
                targets.push_back(target_of(train_set[k], cfg.target));
            }
            BatchGradResult step =
                compute_gradients(model, batch, targets, loss, Mode::train, &rng);
            if (!std::isfinite(step.loss))
                throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(bi + 1));
            if (epoch == 1 && bi == 0) history.first_batch_loss = step.loss;
            adam_step(model.params, step.grads, opt);
            loss_sum += step.loss * static_cast<double>(batch_idx.size());
            seen += batch_idx.size();
        }

        EpochRecord record;
        record.epoch = epoch;
        record.train_loss = loss_sum / static_cast<double>(seen);

        PairedSeries val_series{eval_predictions(model, val_set), val_targets};
        record.val_report = evaluate_report(val_series);
        record.val_loss = monitored_val_loss(record.val_report, loss);
        if (!std::isfinite(record.val_loss))
            throw NumericError("non-finite validation loss at epoch " + std::to_string(epoch));
        history.epochs.push_back(record);

        if (cfg.verbose)
            std::printf("%zu\t%.6f\t%.6f\t%.6f\n", epoch, record.train_loss, record.val_loss,
                        record.val_report.ccc);

        bool stop = stopper.observe(record.val_loss);
        if (stopper.improved_last()) best_params = model.params;
        if (stop) {
            history.stop_reason = "early-stopping";
            break;
        }
    }
    if (history.stop_reason.empty()) history.stop_reason = "max-epochs";
    history.best_epoch = stopper.best_epoch();
    history.best_val_loss = stopper.best_loss();
    model.params = std::move(best_params);
    return history;
}

FitResult fit_and_refine(Model& model, const ExampleSet& train_set, const ExampleSet& val_set,
                         const TrainConfig& cfg) {
    FitResult result;
    result.phase1 = train_phase(model, train_set, val_set, cfg, LossKind::mse);

    TrainConfig refine_cfg = cfg;
    refine_cfg.learning_rate = cfg.fine_tune_lr.value_or(cfg.learning_rate);
    refine_cfg.seed = splitmix64(cfg.seed ^ 0x66696e65ULL);  // distinct phase-2 stream
    result.phase2 = train_phase(model, train_set, val_set, refine_cfg, LossKind::one_minus_ccc);
    return result;
}

LateFusionCombiner fit_late_fusion(const Model& visual, const Model& audio, const Model& text,
                                   const ExampleSet& fit_set, Target target) {
    if (fit_set.empty()) throw ConfigError("late fusion fit set is empty");
    for (const Model* m : {&visual, &audio, &text})
        if (m->spec.target != target)
            throw ConfigError("late fusion expects all unimodal models trained for " +
                              std::string(target_name(target)));

    std::array<std::vector<double>, 3> preds;
    const Model* models[3] = {&visual, &audio, &text};
    for (std::size_t k = 0; k < 3; ++k) {
        preds[k].reserve(fit_set.size());
        for (const LabeledBundle& ex : fit_set)
            preds[k].push_back(predict(*models[k], ex.features, Mode::eval));
    }
    return fit_linear_combiner(preds, targets_of(fit_set, target));
}

MetricsReport evaluate_model(const Model& model, const ExampleSet& data, Target target) {
    if (data.size() < 2) throw ConfigError("evaluation needs at least 2 utterances");
    PairedSeries series{eval_predictions(model, data), targets_of(data, target)};
    return evaluate_report(series);
}

MetricsReport evaluate_late_fusion(const Model& visual, const Model& audio, const Model& text,
                                   const LateFusionCombiner& combiner, const ExampleSet& data,
                                   Target target) {
    if (data.size() < 2) throw ConfigError("evaluation needs at least 2 utterances");
    std::vector<double> preds;
    preds.reserve(data.size());
    for (const LabeledBundle& ex : data) {
        std::array<double, 3> p{predict(visual, ex.features, Mode::eval),
                                predict(audio, ex.features, Mode::eval),
                                predict(text, ex.features, Mode::eval)};
        preds.push_back(late_fusion_predict(p, combiner, target));
    }
    PairedSeries series{std::move(preds), targets_of(data, target)};
    return evaluate_report(series);
}

}  // namespace affect
