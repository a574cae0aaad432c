#include "affect/metrics.hpp"

#include <cmath>

#include "affect/errors.hpp"

namespace affect {

namespace {

double covariance(const std::vector<double>& a, const std::vector<double>& b,
                  double mean_a, double mean_b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - mean_a) * (b[i] - mean_b);
    return acc / static_cast<double>(a.size());
}

void require_pair_stats(const PairedSeries& s) {
    s.validate();
    if (s.n() < 2) throw ConfigError("at least 2 samples required for correlation statistics");
}

}  // namespace

void PairedSeries::validate() const {
    if (pred.empty()) throw ConfigError("paired series must hold at least one sample");
    if (pred.size() != gnd.size())
        throw ConfigError("paired series length mismatch: pred has " +
                          std::to_string(pred.size()) + ", gnd has " + std::to_string(gnd.size()));
    for (double v : pred)
        if (!std::isfinite(v)) throw NumericError("non-finite prediction in paired series");
    for (double v : gnd)
        if (!std::isfinite(v)) throw NumericError("non-finite ground truth in paired series");
}

SeriesStats series_stats(const std::vector<double>& x) {
    SeriesStats st;
    for (double v : x) st.mean += v;
    st.mean /= static_cast<double>(x.size());
    for (double v : x) st.variance += (v - st.mean) * (v - st.mean);
    st.variance /= static_cast<double>(x.size());
    return st;
}

double mse(const PairedSeries& s) {
    s.validate();
    double acc = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
        double d = s.pred[i] - s.gnd[i];
        acc += d * d;
    }
    return acc / static_cast<double>(s.n());
}

std::optional<double> pearson(const PairedSeries& s) {
    require_pair_stats(s);
    SeriesStats sp = series_stats(s.pred);
    SeriesStats sg = series_stats(s.gnd);
    if (sp.variance == 0.0 || sg.variance == 0.0) return std::nullopt;
    double cov = covariance(s.pred, s.gnd, sp.mean, sg.mean);
    double r = cov / (std::sqrt(sp.variance) * std::sqrt(sg.variance));
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    return r;
}

double ccc(const PairedSeries& s) {
    require_pair_stats(s);
    SeriesStats sp = series_stats(s.pred);
    SeriesStats sg = series_stats(s.gnd);
    double mean_diff = sg.mean - sp.mean;
    double denom = sg.variance + sp.variance + mean_diff * mean_diff;
    if (denom == 0.0)
        throw NumericError("ccc undefined: both series constant with equal means");
    double cov = covariance(s.pred, s.gnd, sp.mean, sg.mean);
    double value = 2.0 * cov / denom;
    if (value > 1.0) value = 1.0;
    if (value < -1.0) value = -1.0;
    return value;
}

CccLossResult ccc_loss_and_grad(const PairedSeries& s) {
    require_pair_stats(s);
    std::size_t n = s.n();
    SeriesStats sp = series_stats(s.pred);
    SeriesStats sg = series_stats(s.gnd);
    if (sg.variance == 0.0)
        throw NumericError("ccc loss undefined for a constant ground truth");

    double mean_diff = sg.mean - sp.mean;
    double denom = sg.variance + sp.variance + mean_diff * mean_diff;
    double cov = covariance(s.pred, s.gnd, sp.mean, sg.mean);
    double numer = 2.0 * cov;

    CccLossResult out;
    out.loss = 1.0 - numer / denom;
    out.grad.resize(n);
    // d cov / d p_i = (g_i - mean_g) / n
    // d denom / d p_i = (2 (p_i - mean_p) - 2 (mean_g - mean_p)) / n
    double inv = 1.0 / (static_cast<double>(n) * denom * denom);
    for (std::size_t i = 0; i < n; ++i) {
        double dnum = 2.0 * (s.gnd[i] - sg.mean);
        double dden = 2.0 * (s.pred[i] - sp.mean) - 2.0 * mean_diff;
        out.grad[i] = -(dnum * denom - numer * dden) * inv;
    }
    return out;
}

MseLossResult mse_loss_and_grad(const PairedSeries& s) {
    s.validate();
    MseLossResult out;
    out.grad.resize(s.n());
    double inv_n = 1.0 / static_cast<double>(s.n());
    for (std::size_t i = 0; i < s.n(); ++i) {
        double d = s.pred[i] - s.gnd[i];
        out.loss += d * d * inv_n;
        out.grad[i] = 2.0 * d * inv_n;
    }
    return out;
}

MetricsReport evaluate_report(const PairedSeries& s) {
    require_pair_stats(s);
    MetricsReport report;
    report.n = s.n();
    report.mse = mse(s);
    report.pearson = pearson(s);
    report.ccc = ccc(s);
    return report;
}

}  // namespace affect
