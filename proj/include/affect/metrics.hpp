#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace affect {

// Prediction / ground-truth pair over the same utterances.
struct PairedSeries {
    std::vector<double> pred;
    std::vector<double> gnd;

    std::size_t n() const { return pred.size(); }
    void validate() const;  // equal non-zero lengths, finite entries
};

// Population convention: divide by n.
struct SeriesStats {
    double mean = 0.0;
    double variance = 0.0;
};

SeriesStats series_stats(const std::vector<double>& x);

struct MetricsReport {
    double ccc = 0.0;
    std::optional<double> pearson;  // empty when either variance is zero
    double mse = 0.0;
    std::size_t n = 0;
};

// Mean squared error; valid for n >= 1.
double mse(const PairedSeries& s);

// Sample correlation from population moments; std::nullopt when either
// series is constant. Requires n >= 2.
std::optional<double> pearson(const PairedSeries& s);

// Concordance correlation coefficient:
//   ccc = 2 cov(pred, gnd) / (var(gnd) + var(pred) + (mean(gnd) - mean(pred))^2)
// Requires n >= 2. A constant predictor against a varying ground truth gives 0.
// Both series constant with equal means makes the denominator vanish and is
// rejected as degenerate.
double ccc(const PairedSeries& s);

struct CccLossResult {
    double loss = 0.0;               // 1 - ccc
    std::vector<double> grad;        // d loss / d pred_i, gnd held fixed
};

// Requires n >= 2 and a non-constant ground truth.
CccLossResult ccc_loss_and_grad(const PairedSeries& s);

// MSE loss with its gradient w.r.t. predictions: 2 (pred_i - gnd_i) / n.
struct MseLossResult {
    double loss = 0.0;
    std::vector<double> grad;
};

MseLossResult mse_loss_and_grad(const PairedSeries& s);

// ccc / pearson / mse from one pass over the moments. Requires n >= 2.
MetricsReport evaluate_report(const PairedSeries& s);

}  // namespace affect
