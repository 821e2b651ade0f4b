#pragma once

// Top-two principal component projections of hidden representations.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "digitwise/repstore.hpp"

namespace digitwise {

struct ProjectedPoint {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

struct Projection2D {
  std::vector<ProjectedPoint> points;
  std::array<double, 2> component_variance{};  // descending, sample covariance (n - 1)
  Eigen::VectorXd mean;
  Eigen::MatrixXd loadings;  // d x 2, orthonormal columns
};

// PCA of the rows of `samples` (n x d). Each loading is signed to have a
// non-negative inner product with the first item's centered vector (the next
// item breaks an exact tie). Throws std::invalid_argument for n < 3 and
// DataError for zero variance.
[[nodiscard]] Projection2D pca_samples(const Eigen::MatrixXd& samples, std::span<const std::string> labels);

// Items of one layer (all items when `items` is empty).
[[nodiscard]] Projection2D pca_project(const RepresentationDataset& ds, std::size_t layer,
                                       std::span<const std::size_t> items = {});

// Averages the layer's vectors over groups sharing digit i, then projects the
// `base` group means. Point labels are the digit values.
[[nodiscard]] Projection2D group_average_by_digit(const RepresentationDataset& ds, std::size_t layer,
                                                  int digit_index, int base,
                                                  std::span<const std::size_t> items = {});

// Angle of each point around the origin in [0, 2*pi).
[[nodiscard]] std::vector<double> point_angles(const Projection2D& projection);

// Fisher-Lee style circular rank correlation between two circular samples:
// both are replaced by uniform scores 2*pi*rank/n and the result is
// max(|mean exp(i(a - b))|, |mean exp(i(a + b))|), 1 for a perfect cyclic
// ordering in either direction.
[[nodiscard]] double circular_rank_correlation(std::span<const double> a, std::span<const double> b);

[[nodiscard]] std::string projection_csv(const Projection2D& projection);
[[nodiscard]] std::string projection_svg(const Projection2D& projection, const std::string& title);

}  // namespace digitwise
