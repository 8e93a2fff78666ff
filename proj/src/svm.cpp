// Copyright 2026 The Chitin Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chitin/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chitin/error.hpp"
#include "chitin/parallel.hpp"

namespace chitin {

double gamma_scale(const Matrix& x) {
  if (x.data.empty()) return 1.0;
  double mean = 0.0;
  for (double v : x.data) mean += v;
  mean /= static_cast<double>(x.data.size());
  double var = 0.0;
  for (double v : x.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.data.size());
  if (!(var > 0.0)) return 1.0;
  return 1.0 / (static_cast<double>(x.cols) * var);
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return std::exp(-gamma * d);
}

Matrix kernel_matrix(const Matrix& x, double gamma) {
  Matrix k(x.rows, x.rows);
  parallel_for(x.rows, [&](std::size_t i) {
    k(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) k(i, j) = rbf_kernel(x.row(i), x.row(j), gamma);
  });
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = i + 1; j < x.rows; ++j) k(i, j) = k(j, i);
  }
  return k;
}

double BinarySvm::decision(std::span<const double> x, double gamma) const {
  double f = bias;
  for (std::size_t i = 0; i < coef.size(); ++i) f += coef[i] * rbf_kernel(support_vectors.row(i), x, gamma);
  return f;
}

std::vector<double> SvmModel::decision(std::span<const double> x) const {
  if (machines.empty()) throw Error(ErrorCode::UntrainedModel, "svm model has no machines");
  if (x.size() != n_features) {
    throw Error(ErrorCode::ShapeMismatch, "svm expects " + std::to_string(n_features) + " features, got " +
                                              std::to_string(x.size()));
  }
  std::vector<double> out;
  out.reserve(machines.size());
  for (const auto& m : machines) out.push_back(m.decision(x, gamma));
  return out;
}

int SvmModel::predict(std::span<const double> x) const {
  const auto d = decision(x);
  return static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
}

bool SvmModel::converged() const {
  return std::all_of(machines.begin(), machines.end(), [](const BinarySvm& m) { return m.converged; });
}

namespace {

constexpr double kTau = 1e-12;

}  // namespace

BinarySvm train_binary_svm(const Matrix& x, std::span<const double> y, const Matrix& kernel,
                           const SvmParams& params) {
  const std::size_t n = x.rows;
  const double c = params.c;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of the dual objective

  auto up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0); };
  auto low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c); };

  BinarySvm out;
  const long long cap = static_cast<long long>(params.max_passes) * static_cast<long long>(std::max<std::size_t>(n, 1));
  long long iter = 0;
  out.converged = false;
  for (; iter < cap; ++iter) {
    // First index: maximal violating pair, first-order side.
    double g_max = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (up(t) && -y[t] * grad[t] > g_max) {
        g_max = -y[t] * grad[t];
        i = t;
      }
    }
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    double best_obj = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (!low(t)) continue;
      const double v = -y[t] * grad[t];
      g_min = std::min(g_min, v);
      if (i == n) continue;
      const double b = g_max - v;
      if (b > 0) {
        double a = kernel(i, i) + kernel(t, t) - 2.0 * kernel(i, t);
        if (a <= 0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj < best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (i == n || j == n || g_max - g_min < params.tol) {
      out.converged = true;
      break;
    }

    const double yi = y[i], yj = y[j];
    const double old_ai = alpha[i], old_aj = alpha[j];
    const double qii = kernel(i, i), qjj = kernel(j, j), qij = yi * yj * kernel(i, j);
    if (yi != yj) {
      double quad = qii + qjj + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }

    const double d_ai = alpha[i] - old_ai, d_aj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (yi * kernel(t, i) * d_ai + yj * kernel(t, j) * d_aj);
    }
  }
  out.iterations = static_cast<int>(iter);

  // Bias from free vectors, else the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -ub, free_sum = 0.0;
  int n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      free_sum += yg;
    }
  }
  double rho;
  if (n_free > 0) {
    rho = free_sum / n_free;
  } else if (std::isinf(ub) && std::isinf(lb)) {
    rho = 0.0;
  } else if (std::isinf(ub)) {
    rho = lb;
  } else if (std::isinf(lb)) {
    rho = ub;
  } else {
    rho = (ub + lb) / 2.0;
  }
  out.bias = -rho;

  std::vector<std::size_t> sv;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0) sv.push_back(t);
  }
  out.support_vectors = x.select_rows(sv);
  for (std::size_t t : sv) {
    out.alpha.push_back(alpha[t]);
    out.coef.push_back(alpha[t] * y[t]);
  }
  return out;
}

SvmModel train_svm_rbf(const Matrix& x, std::span<const int> y, int n_classes, const SvmParams& params) {
  if (x.rows == 0 || y.size() != x.rows) throw Error(ErrorCode::ShapeMismatch, "rows and labels disagree");
  if (n_classes < 1) throw Error(ErrorCode::ShapeMismatch, "n_classes must be positive");
  for (int label : y) {
    if (label < 0 || label >= n_classes) throw Error(ErrorCode::ShapeMismatch, "label out of range");
  }
  if (!(params.c > 0.0) || !(params.tol > 0.0) || params.max_passes < 1) {
    throw Error(ErrorCode::InvalidArgument, "invalid svm parameters");
  }

  SvmModel model;
  model.c = params.c;
  model.gamma = params.gamma > 0.0 ? params.gamma : gamma_scale(x);
  model.n_features = x.cols;
  const Matrix kernel = kernel_matrix(x, model.gamma);

  model.machines.resize(static_cast<std::size_t>(n_classes));
  parallel_for(model.machines.size(), [&](std::size_t c) {
    std::vector<double> target(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) target[i] = static_cast<std::size_t>(y[i]) == c ? 1.0 : -1.0;
    model.machines[c] = train_binary_svm(x, target, kernel, params);
  });
  return model;
}

}  // namespace chitin
