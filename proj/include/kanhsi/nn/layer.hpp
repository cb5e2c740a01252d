#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "kanhsi/nn/matrix.hpp"

namespace kanhsi::nn {

/// A differentiable layer with its own analytic backward pass.
///
/// Parameters live in one flat vector per layer; gradients() has the same
/// layout and holds d(loss)/d(param) for the batch of the last backward().
/// forward() caches what backward() needs, so an instance is not reentrant.
/// infer() is const and touches no cache; it may be called concurrently on
/// disjoint row ranges.
class Layer {
public:
    virtual ~Layer() = default;

    virtual std::string kind() const = 0;
    virtual std::size_t in_dim() const = 0;
    virtual std::size_t out_dim() const = 0;

    virtual Matrix forward(const Matrix& x) = 0;
    /// Returns d(loss)/d(x) and overwrites gradients().
    virtual Matrix backward(const Matrix& grad_out) = 0;
    virtual Matrix infer(const Matrix& x) const = 0;

    virtual std::span<double> parameters() = 0;
    virtual std::span<const double> parameters() const = 0;
    virtual std::span<const double> gradients() const = 0;

    /// Re-establish parameter constraints after an optimizer step.
    virtual void project_parameters() {}
};

}  // namespace kanhsi::nn
