#include "kanhsi/nn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kanhsi/errors.hpp"

namespace kanhsi::nn {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InputError("Matrix: data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
}

Matrix Matrix::slice_rows(std::size_t begin, std::size_t end) const {
    if (begin > end || end > rows_) {
        throw InputError("Matrix::slice_rows: range out of bounds");
    }
    Matrix out(end - begin, cols_);
    std::copy(data_.begin() + static_cast<std::ptrdiff_t>(begin * cols_),
              data_.begin() + static_cast<std::ptrdiff_t>(end * cols_), out.data_.begin());
    return out;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_finite(const Matrix& m, const char* where) {
    if (!m.all_finite()) {
        throw NumericError(std::string(where) + ": non-finite value");
    }
}

}  // namespace kanhsi::nn
