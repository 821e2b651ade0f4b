#include "digitwise/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace digitwise::kernels {

namespace {

int initial_threads() {
  if (const char* env = std::getenv("DIGITWISE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) {
        return n;
      }
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

int& threads_setting() {
  static int threads = initial_threads();
  return threads;
}

// Four interleaved partial sums; the reduction order depends only on n.
double dot(const double* a, const double* b, Eigen::Index n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  Eigen::Index i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) {
    s0 += a[i] * b[i];
  }
  return (s0 + s1) + (s2 + s3);
}

constexpr Eigen::Index kRowBlock = 64;

}  // namespace

void set_thread_count(int threads) { threads_setting() = std::max(1, threads); }

int thread_count() { return threads_setting(); }

namespace serial {

Eigen::VectorXd column_mean(const Eigen::MatrixXd& samples) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(samples.cols());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
      sum(j) += samples(i, j);
    }
  }
  return sum / static_cast<double>(samples.rows());
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& samples) {
  const auto d = samples.cols();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double xj = samples(i, j);
      for (Eigen::Index k = j; k < d; ++k) {
        g(j, k) += xj * samples(i, k);
      }
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < j; ++k) {
      g(j, k) = g(k, j);
    }
  }
  return g;
}

Eigen::MatrixXd cross(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& targets) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(samples.cols(), targets.cols());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
      for (Eigen::Index t = 0; t < targets.cols(); ++t) {
        out(j, t) += samples(i, j) * targets(i, t);
      }
    }
  }
  return out;
}

Eigen::MatrixXd project(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& weights) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(samples.rows(), weights.rows());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index t = 0; t < weights.rows(); ++t) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < samples.cols(); ++j) {
        acc += samples(i, j) * weights(t, j);
      }
      out(i, t) = acc;
    }
  }
  return out;
}

}  // namespace serial

namespace parallel {

Eigen::VectorXd column_mean(const Eigen::MatrixXd& samples) {
  const auto n = samples.rows();
  const auto d = samples.cols();
  Eigen::VectorXd mean(d);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (Eigen::Index j = 0; j < d; ++j) {
    const double* col = samples.data() + j * n;
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      s += col[i];
    }
    mean(j) = s / static_cast<double>(n);
  }
  return mean;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& samples) {
  const auto n = samples.rows();
  const auto d = samples.cols();
  Eigen::MatrixXd g(d, d);
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
  for (Eigen::Index j = 0; j < d; ++j) {
    const double* cj = samples.data() + j * n;
    for (Eigen::Index k = j; k < d; ++k) {
      const double v = dot(cj, samples.data() + k * n, n);
      g(j, k) = v;
      g(k, j) = v;
    }
  }
  return g;
}

Eigen::MatrixXd cross(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& targets) {
  const auto n = samples.rows();
  Eigen::MatrixXd out(samples.cols(), targets.cols());
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    const double* cj = samples.data() + j * n;
    for (Eigen::Index t = 0; t < targets.cols(); ++t) {
      out(j, t) = dot(cj, targets.data() + t * n, n);
    }
  }
  return out;
}

Eigen::MatrixXd project(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& weights) {
  const auto n = samples.rows();
  const auto d = samples.cols();
  const auto k = weights.rows();
  Eigen::MatrixXd out(n, k);
  const Eigen::Index blocks = (n + kRowBlock - 1) / kRowBlock;
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index lo = b * kRowBlock;
    const Eigen::Index hi = std::min(n, lo + kRowBlock);
    for (Eigen::Index t = 0; t < k; ++t) {
      double acc[kRowBlock] = {};
      for (Eigen::Index j = 0; j < d; ++j) {
        const double w = weights(t, j);
        const double* col = samples.data() + j * n;
        for (Eigen::Index i = lo; i < hi; ++i) {
          acc[i - lo] += col[i] * w;
        }
      }
      for (Eigen::Index i = lo; i < hi; ++i) {
        out(i, t) = acc[i - lo];
      }
    }
  }
  return out;
}

}  // namespace parallel

}  // namespace digitwise::kernels
