#include "affect/late_fusion.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "affect/errors.hpp"

namespace affect {

double late_fusion_predict(const std::array<double, 3>& preds,
                           const LateFusionCombiner& combiner, Target target) {
    double y = combiner.bias;
    for (std::size_t k = 0; k < 3; ++k) {
        if (!std::isfinite(preds[k])) throw NumericError("non-finite prediction in late fusion");
        y += combiner.weights[k] * preds[k];
    }
    double lo = target == Target::arousal ? 0.0 : -1.0;
    return std::min(1.0, std::max(lo, y));
}

LateFusionCombiner fit_linear_combiner(const std::array<std::vector<double>, 3>& predictions,
                                       const std::vector<double>& targets) {
    std::size_t n = targets.size();
    if (n == 0) throw ConfigError("late fusion fit needs at least one sample");
    for (const auto& p : predictions)
        if (p.size() != n) throw ConfigError("late fusion prediction length mismatch");

    // normal equations over the design [p_visual, p_audio, p_text, 1]
    constexpr std::size_t kDim = 4;
    constexpr double kRidge = 1e-8;
    double A[kDim][kDim] = {};
    double rhs[kDim] = {};
    auto column = [&](std::size_t j, std::size_t i) {
        return j < 3 ? predictions[j][i] : 1.0;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < kDim; ++r) {
            for (std::size_t c = 0; c < kDim; ++c) A[r][c] += column(r, i) * column(c, i);
            rhs[r] += column(r, i) * targets[i];
        }
    }
    for (std::size_t r = 0; r < kDim; ++r) A[r][r] += kRidge;

    // Gaussian elimination with partial pivoting
    std::size_t perm[kDim] = {0, 1, 2, 3};
    double min_pivot = std::numeric_limits<double>::infinity();
    double max_pivot = 0.0;
    for (std::size_t col = 0; col < kDim; ++col) {
        std::size_t best = col;
        for (std::size_t r = col + 1; r < kDim; ++r)
            if (std::abs(A[perm[r]][col]) > std::abs(A[perm[best]][col])) best = r;
        std::swap(perm[col], perm[best]);
        double pivot = A[perm[col]][col];
        min_pivot = std::min(min_pivot, std::abs(pivot));
        max_pivot = std::max(max_pivot, std::abs(pivot));
        if (std::abs(pivot) < 1e-14)
            throw NumericError("late fusion normal equations are singular (pivot ratio " +
                               std::to_string(max_pivot / (std::abs(pivot) + 1e-300)) + ")");
        for (std::size_t r = col + 1; r < kDim; ++r) {
            double f = A[perm[r]][col] / pivot;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < kDim; ++c) A[perm[r]][c] -= f * A[perm[col]][c];
            rhs[perm[r]] -= f * rhs[perm[col]];
        }
    }
    double sol[kDim];
    for (std::size_t col = kDim; col-- > 0;) {
        double acc = rhs[perm[col]];
        for (std::size_t c = col + 1; c < kDim; ++c) acc -= A[perm[col]][c] * sol[c];
        sol[col] = acc / A[perm[col]][col];
    }

    LateFusionCombiner combiner;
    combiner.weights = {sol[0], sol[1], sol[2]};
    combiner.bias = sol[3];
    return combiner;
}

void save_combiner(const LateFusionCombiner& combiner, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write combiner file: " + path.string());
    char buf[512];
    std::snprintf(buf, sizeof(buf), "late_fusion v1\nweights %.17g %.17g %.17g\nbias %.17g\n",
                  combiner.weights[0], combiner.weights[1], combiner.weights[2], combiner.bias);
    out << buf;
    if (!out.good()) throw IoError("failed writing combiner file: " + path.string());
}

LateFusionCombiner load_combiner(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open combiner file: " + path.string());
    std::string tag, version, field;
    in >> tag >> version;
    if (tag != "late_fusion" || version != "v1")
        throw IoError("unrecognized combiner file: " + path.string());
    LateFusionCombiner combiner;
    in >> field >> combiner.weights[0] >> combiner.weights[1] >> combiner.weights[2];
    if (field != "weights") throw IoError("malformed combiner file: " + path.string());
    in >> field >> combiner.bias;
    if (field != "bias" || !in) throw IoError("malformed combiner file: " + path.string());
    return combiner;
}

}  // namespace affect
