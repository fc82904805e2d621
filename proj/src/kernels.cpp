#include "hyper/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyper {

Matrix conv1d_valid(std::span<const double> signal, const Matrix& filters) {
  const std::size_t d_e = signal.size();
  const std::size_t l_f = filters.rows;
  const std::size_t n_f = filters.cols;
  check_shape(l_f >= 1, "conv1d_valid: filter length must be >= 1");
  check_shape(l_f <= d_e, "conv1d_valid: filter length exceeds signal length");
  const std::size_t l_m = d_e - l_f + 1;
  Matrix out(l_m, n_f);
  for (std::size_t i = 0; i < l_m; ++i) {
    for (std::size_t k = 0; k < l_f; ++k) {
      const double s = signal[i + k];
      const double* f = filters.v.data() + k * n_f;
      double* o = out.v.data() + i * n_f;
      for (std::size_t j = 0; j < n_f; ++j) o[j] += s * f[j];
    }
  }
  return out;
}

void conv1d_valid_backward(std::span<const double> signal, const Matrix& filters,
                           const Matrix& grad_out, std::span<double> grad_signal,
                           Matrix& grad_filters) {
  const std::size_t l_f = filters.rows;
  const std::size_t n_f = filters.cols;
  const std::size_t l_m = grad_out.rows;
  check_shape(grad_out.cols == n_f && l_m == signal.size() - l_f + 1,
              "conv1d_valid_backward: gradient shape");
  check_shape(grad_signal.size() == signal.size() && grad_filters.rows == l_f &&
                  grad_filters.cols == n_f,
              "conv1d_valid_backward: output buffers");
  for (std::size_t i = 0; i < l_m; ++i) {
    const double* g = grad_out.v.data() + i * n_f;
    for (std::size_t k = 0; k < l_f; ++k) {
      const double* f = filters.v.data() + k * n_f;
      double* gf = grad_filters.v.data() + k * n_f;
      const double s = signal[i + k];
      double acc = 0.0;
      for (std::size_t j = 0; j < n_f; ++j) {
        acc += g[j] * f[j];
        gf[j] += g[j] * s;
      }
      grad_signal[i + k] += acc;
    }
  }
}

Vector linear(std::span<const double> input, const Matrix& weights) {
  check_shape(input.size() == weights.rows, "linear: input length vs weight rows");
  Vector out(weights.cols, 0.0);
  for (std::size_t i = 0; i < weights.rows; ++i) {
    const double x = input[i];
    if (x == 0.0) continue;
    const double* w = weights.v.data() + i * weights.cols;
    for (std::size_t j = 0; j < weights.cols; ++j) out[j] += x * w[j];
  }
  return out;
}

void linear_backward(std::span<const double> input, const Matrix& weights,
                     std::span<const double> grad_out, std::span<double> grad_input,
                     Matrix& grad_weights) {
  check_shape(input.size() == weights.rows && grad_out.size() == weights.cols,
              "linear_backward: shapes");
  check_shape(grad_input.size() == weights.rows && grad_weights.rows == weights.rows &&
                  grad_weights.cols == weights.cols,
              "linear_backward: output buffers");
  for (std::size_t i = 0; i < weights.rows; ++i) {
    const double* w = weights.v.data() + i * weights.cols;
    double* gw = grad_weights.v.data() + i * weights.cols;
    const double x = input[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < weights.cols; ++j) {
      acc += grad_out[j] * w[j];
      gw[j] += x * grad_out[j];
    }
    grad_input[i] += acc;
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void relu_inplace(std::span<double> x) {
  for (double& e : x) e = e > 0.0 ? e : 0.0;
}

void sigmoid_inplace(std::span<double> x) {
  for (double& e : x) e = sigmoid(e);
}

void relu_backward(std::span<const double> pre_activation, std::span<const double> grad_out,
                   std::span<double> grad_in) {
  for (std::size_t i = 0; i < pre_activation.size(); ++i)
    grad_in[i] = pre_activation[i] > 0.0 ? grad_out[i] : 0.0;
}

void dropout_inplace(std::span<double> x, double rate, Mode mode, Rng& rng, Vector& mask) {
  if (rate < 0.0 || rate >= 1.0)
    throw std::invalid_argument("dropout: rate must be in [0, 1)");
  mask.assign(x.size(), 1.0);
  if (mode == Mode::eval || rate == 0.0) return;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (rng.next_double() < rate) {
      mask[i] = 0.0;
      x[i] = 0.0;
    } else {
      mask[i] = keep_scale;
      x[i] *= keep_scale;
    }
  }
}

void dropout_backward(std::span<const double> grad_out, const Vector& mask,
                      std::span<double> grad_in) {
  for (std::size_t i = 0; i < grad_out.size(); ++i) grad_in[i] = grad_out[i] * mask[i];
}

BatchNormState make_batchnorm_state(std::size_t features) {
  BatchNormState s;
  s.gamma.assign(features, 1.0);
  s.beta.assign(features, 0.0);
  s.running_mean.assign(features, 0.0);
  s.running_var.assign(features, 1.0);
  return s;
}

Matrix batchnorm_forward(const Matrix& x, BatchNormState& state, Mode mode,
                         BatchNormCache* cache) {
  const std::size_t n = x.rows;
  const std::size_t f = x.cols;
  check_shape(state.gamma.size() == f, "batchnorm: feature count vs state");
  Matrix out(n, f);
  if (mode == Mode::eval) {
    for (std::size_t j = 0; j < f; ++j) {
      const double scale = state.gamma[j] / std::sqrt(state.running_var[j] + state.epsilon);
      const double shift = state.beta[j] - scale * state.running_mean[j];
      for (std::size_t i = 0; i < n; ++i) out(i, j) = scale * x(i, j) + shift;
    }
    return out;
  }
  if (n < 2) throw std::invalid_argument("batchnorm: train mode requires batch_size >= 2");
  if (cache != nullptr) {
    cache->mean.assign(f, 0.0);
    cache->inv_std.assign(f, 0.0);
    cache->x_hat = Matrix(n, f);
  }
  for (std::size_t j = 0; j < f; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    const double inv_std = 1.0 / std::sqrt(var + state.epsilon);
    for (std::size_t i = 0; i < n; ++i) {
      const double xh = (x(i, j) - mean) * inv_std;
      out(i, j) = state.gamma[j] * xh + state.beta[j];
      if (cache != nullptr) cache->x_hat(i, j) = xh;
    }
    if (cache != nullptr) {
      cache->mean[j] = mean;
      cache->inv_std[j] = inv_std;
    }
    const double unbiased = var * static_cast<double>(n) / static_cast<double>(n - 1);
    state.running_mean[j] = (1.0 - state.momentum) * state.running_mean[j] + state.momentum * mean;
    state.running_var[j] = (1.0 - state.momentum) * state.running_var[j] + state.momentum * unbiased;
  }
  return out;
}

void batchnorm_backward(const Matrix& grad_out, const BatchNormCache& cache,
                        const BatchNormState& state, Matrix& grad_in, Vector& grad_gamma,
                        Vector& grad_beta) {
  const std::size_t n = grad_out.rows;
  const std::size_t f = grad_out.cols;
  check_shape(cache.x_hat.rows == n && cache.x_hat.cols == f, "batchnorm_backward: cache shape");
  check_shape(grad_in.rows == n && grad_in.cols == f && grad_gamma.size() == f &&
                  grad_beta.size() == f,
              "batchnorm_backward: output buffers");
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < f; ++j) {
    double sum_dy = 0.0;
    double sum_dy_xhat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum_dy += grad_out(i, j);
      sum_dy_xhat += grad_out(i, j) * cache.x_hat(i, j);
    }
    grad_beta[j] += sum_dy;
    grad_gamma[j] += sum_dy_xhat;
    const double scale = state.gamma[j] * cache.inv_std[j];
    for (std::size_t i = 0; i < n; ++i) {
      grad_in(i, j) = scale * (grad_out(i, j) - inv_n * sum_dy -
                               cache.x_hat(i, j) * inv_n * sum_dy_xhat);
    }
  }
}

namespace {
constexpr double kProbClamp = 1e-12;

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }
}  // namespace

double bce_loss(std::span<const double> p, std::span<const double> y) {
  check_shape(p.size() == y.size(), "bce_loss: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = clamp_prob(p[i]);
    acc += y[i] * std::log(pi) + (1.0 - y[i]) * std::log(1.0 - pi);
  }
  return -acc / static_cast<double>(p.size());
}

void bce_sigmoid_backward(std::span<const double> p, std::span<const double> y,
                          std::span<double> grad_scores) {
  check_shape(p.size() == y.size() && p.size() == grad_scores.size(),
              "bce_sigmoid_backward: length mismatch");
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) grad_scores[i] += (p[i] - y[i]) * inv_n;
}

}  // namespace hyper
