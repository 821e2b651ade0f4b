#pragma once

// Dense kernels behind probe training and PCA.
//
// Sample matrices are n x d, column-major (one contiguous column per
// feature). Every function exists twice:
//   serial::   textbook loops in sample order, kept as the test reference;
//   parallel:: OpenMP over output entries. Each output entry is reduced by
//              exactly one thread in a fixed order, so results are bitwise
//              identical for any thread count.

#include <Eigen/Dense>

namespace digitwise::kernels {

// Worker count for the parallel kernels. Initialized from DIGITWISE_THREADS
// when set, otherwise the OpenMP default.
void set_thread_count(int threads);
[[nodiscard]] int thread_count();

namespace serial {

[[nodiscard]] Eigen::VectorXd column_mean(const Eigen::MatrixXd& samples);
// samples^T samples
[[nodiscard]] Eigen::MatrixXd gram(const Eigen::MatrixXd& samples);
// samples^T targets
[[nodiscard]] Eigen::MatrixXd cross(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& targets);
// samples * weights^T, weights is k x d
[[nodiscard]] Eigen::MatrixXd project(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& weights);

}  // namespace serial

namespace parallel {

[[nodiscard]] Eigen::VectorXd column_mean(const Eigen::MatrixXd& samples);
[[nodiscard]] Eigen::MatrixXd gram(const Eigen::MatrixXd& samples);
[[nodiscard]] Eigen::MatrixXd cross(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& targets);
[[nodiscard]] Eigen::MatrixXd project(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& weights);

}  // namespace parallel

}  // namespace digitwise::kernels
