#include "affect/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace affect {

Tensor::Tensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (std::size_t d : shape_) {
        if (d == 0) throw ConfigError("tensor shape has a zero dimension");
        n *= d;
    }
    if (shape_.empty()) n = 0;
    data_.assign(n, fill);
    cols_ = shape_.empty() ? 0 : shape_.back();
}

Tensor Tensor::row(std::initializer_list<double> values) {
    return matrix(1, values.size(), values);
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values) {
    Tensor t(std::vector<std::size_t>{rows, cols});
    if (values.size() != rows * cols)
        throw ConfigError("tensor literal has wrong element count");
    std::copy(values.begin(), values.end(), t.data_.begin());
    return t;
}

Tensor Tensor::from_vector(std::vector<double> values) {
    Tensor t;
    t.shape_ = {values.size()};
    t.cols_ = values.size();
    t.data_ = std::move(values);
    return t;
}

std::size_t Tensor::rows() const {
    if (shape_.size() >= 2) return shape_[shape_.size() - 2];
    return shape_.empty() ? 0 : 1;
}

std::size_t Tensor::cols() const {
    return shape_.empty() ? 0 : shape_.back();
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void Tensor::fill(double v) {
    std::fill(data_.begin(), data_.end(), v);
}

std::string shape_to_string(const Tensor& t) {
    std::ostringstream os;
    os << '[';
    const auto& s = t.shape();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << 'x';
        os << s[i];
    }
    os << ']';
    return os.str();
}

}  // namespace affect
