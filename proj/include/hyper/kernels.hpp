#pragma once

#include <span>

#include "hyper/rng.hpp"
#include "hyper/tensor.hpp"

namespace hyper {

enum class Mode { train, eval };

// --- 1D valid convolution (cross-correlation: no kernel flip, stride 1) ---
//
// filters is l_f x n_f; output is l_m x n_f with l_m = signal.size() - l_f + 1
// and out(i, j) = sum_k signal[i + k] * filters(k, j).
Matrix conv1d_valid(std::span<const double> signal, const Matrix& filters);

// Accumulates into grad_signal and grad_filters (callers zero them).
void conv1d_valid_backward(std::span<const double> signal, const Matrix& filters,
                           const Matrix& grad_out, std::span<double> grad_signal,
                           Matrix& grad_filters);

// --- Linear map: out[j] = sum_i input[i] * weights(i, j) ---
Vector linear(std::span<const double> input, const Matrix& weights);

void linear_backward(std::span<const double> input, const Matrix& weights,
                     std::span<const double> grad_out, std::span<double> grad_input,
                     Matrix& grad_weights);

// --- Elementwise nonlinearities ---
double sigmoid(double x);  // stable for large |x|

void relu_inplace(std::span<double> x);
void sigmoid_inplace(std::span<double> x);

// grad_in[i] = grad_out[i] * (pre_activation[i] > 0); subgradient 0 at 0.
void relu_backward(std::span<const double> pre_activation, std::span<const double> grad_out,
                   std::span<double> grad_in);

// --- Inverted dropout ---
//
// Train mode zeroes each entry with probability `rate` and scales survivors
// by 1/(1-rate); the applied per-entry scale is recorded in `mask` so the
// backward pass is exact. Eval mode is the identity (mask all ones).
void dropout_inplace(std::span<double> x, double rate, Mode mode, Rng& rng, Vector& mask);

void dropout_backward(std::span<const double> grad_out, const Vector& mask,
                      std::span<double> grad_in);

// --- Batch normalization over a batch_size x features matrix ---
struct BatchNormState {
  Vector gamma;
  Vector beta;
  Vector running_mean;
  Vector running_var;
  double epsilon = 1e-5;
  double momentum = 0.1;
};

BatchNormState make_batchnorm_state(std::size_t features);

struct BatchNormCache {
  Vector mean;
  Vector inv_std;
  Matrix x_hat;
};

// Train mode normalizes with batch statistics (biased variance) and updates
// running stats by EMA: running = (1-momentum)*running + momentum*batch,
// using the unbiased variance estimate for running_var. Eval mode applies the
// per-feature affine map derived from the running statistics. Train mode
// requires batch_size >= 2.
Matrix batchnorm_forward(const Matrix& x, BatchNormState& state, Mode mode,
                         BatchNormCache* cache = nullptr);

// Accumulates into grad_gamma / grad_beta; overwrites grad_in.
void batchnorm_backward(const Matrix& grad_out, const BatchNormCache& cache,
                        const BatchNormState& state, Matrix& grad_in, Vector& grad_gamma,
                        Vector& grad_beta);

// --- Binary cross-entropy, mean-reduced ---
//
// Probabilities are clamped to [1e-12, 1 - 1e-12] before taking logs.
double bce_loss(std::span<const double> p, std::span<const double> y);

// Gradient of bce_loss(sigmoid(s), y) wrt the pre-sigmoid scores s, in the
// fused form (p - y) / n. Accumulates into grad_scores.
void bce_sigmoid_backward(std::span<const double> p, std::span<const double> y,
                          std::span<double> grad_scores);

}  // namespace hyper
