#include "digitwise/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "digitwise/errors.hpp"
#include "digitwise/kernels.hpp"
#include "digitwise/numeral.hpp"
#include "digitwise/probekit.hpp"
#include "digitwise/svg.hpp"

namespace digitwise {

Projection2D pca_samples(const Eigen::MatrixXd& samples, std::span<const std::string> labels) {
  const auto n = samples.rows();
  const auto d = samples.cols();
  if (n < 3) {
    throw std::invalid_argument("PCA needs at least 3 items, got " + std::to_string(n));
  }
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw std::invalid_argument("label count does not match samples");
  }
  Projection2D out;
  out.mean = kernels::parallel::column_mean(samples);
  Eigen::MatrixXd centered = samples;
  centered.rowwise() -= out.mean.transpose();
  const double raw = samples.squaredNorm();
  const double denom = static_cast<double>(n - 1);

  Eigen::MatrixXd loadings(d, 2);
  Eigen::Vector2d variance;
  if (d <= n) {
    const Eigen::MatrixXd cov = kernels::parallel::gram(centered) / denom;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const auto& vals = eig.eigenvalues();  // ascending
    for (int c = 0; c < 2; ++c) {
      const Eigen::Index idx = d - 1 - c;
      if (idx >= 0) {
        variance(c) = vals(idx);
        loadings.col(c) = eig.eigenvectors().col(idx);
      } else {
        variance(c) = 0.0;
        loadings.col(c).setZero();
      }
    }
  } else {
    // Fewer items than features: eigendecompose the n x n Gram matrix.
    const Eigen::MatrixXd transposed = centered.transpose();
    const Eigen::MatrixXd k = kernels::parallel::gram(transposed) / denom;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    for (int c = 0; c < 2; ++c) {
      const Eigen::Index idx = n - 1 - c;
      variance(c) = eig.eigenvalues()(idx);
      Eigen::VectorXd l = centered.transpose() * eig.eigenvectors().col(idx);
      const double norm = l.norm();
      loadings.col(c) = norm > 0.0 ? (l / norm).eval() : Eigen::VectorXd::Zero(d);
    }
  }
  if (!(variance(0) > 1e-20 * raw / static_cast<double>(n))) {
    throw DataError("zero variance: all selected vectors are identical");
  }
  variance = variance.cwiseMax(0.0);

  for (int c = 0; c < 2; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const double s = loadings.col(c).dot(centered.row(r).transpose());
      if (s != 0.0) {
        if (s < 0.0) {
          loadings.col(c) *= -1.0;
        }
        break;
      }
    }
  }

  const Eigen::MatrixXd projected = centered * loadings;
  out.points.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) {
    out.points.push_back({labels[static_cast<std::size_t>(r)], projected(r, 0), projected(r, 1)});
  }
  out.component_variance = {variance(0), variance(1)};
  out.loadings = std::move(loadings);
  return out;
}

Projection2D pca_project(const RepresentationDataset& ds, std::size_t layer, std::span<const std::size_t> items) {
  std::vector<std::size_t> all;
  if (items.empty()) {
    all.resize(ds.items());
    std::iota(all.begin(), all.end(), std::size_t{0});
    items = all;
  }
  const Eigen::MatrixXd samples = gather_rows(ds, layer, items);
  std::vector<std::string> labels;
  labels.reserve(items.size());
  for (auto i : items) {
    labels.push_back(ds.meta().labels.at(i).to_string());
  }
  return pca_samples(samples, labels);
}

Projection2D group_average_by_digit(const RepresentationDataset& ds, std::size_t layer, int digit_index,
                                    int base, std::span<const std::size_t> items) {
  if (base < 2 || digit_index < 0) {
    throw std::invalid_argument("grouping needs base >= 2 and digit index >= 0");
  }
  std::vector<std::size_t> all;
  if (items.empty()) {
    all.resize(ds.items());
    std::iota(all.begin(), all.end(), std::size_t{0});
    items = all;
  }
  const auto values = ds.numeric_labels();
  const Eigen::MatrixXd samples = gather_rows(ds, layer, items);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(base, samples.cols());
  std::vector<std::size_t> counts(static_cast<std::size_t>(base), 0);
  for (std::size_t r = 0; r < items.size(); ++r) {
    const int g = digit_of(values[items[r]], base, digit_index);
    sums.row(g) += samples.row(static_cast<Eigen::Index>(r));
    ++counts[static_cast<std::size_t>(g)];
  }
  std::vector<std::string> labels;
  for (int g = 0; g < base; ++g) {
    if (counts[static_cast<std::size_t>(g)] == 0) {
      throw DataError("no items have digit value " + std::to_string(g) + " at index " +
                      std::to_string(digit_index));
    }
    sums.row(g) /= static_cast<double>(counts[static_cast<std::size_t>(g)]);
    labels.push_back(std::to_string(g));
  }
  return pca_samples(sums, labels);
}

std::vector<double> point_angles(const Projection2D& projection) {
  std::vector<double> out;
  out.reserve(projection.points.size());
  for (const auto& p : projection.points) {
    double a = std::atan2(p.y, p.x);
    if (a < 0.0) {
      a += 2.0 * std::numbers::pi;
    }
    out.push_back(a);
  }
  return out;
}

double circular_rank_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("circular rank correlation needs two equal-length samples");
  }
  const std::size_t n = a.size();
  auto uniform_scores = [n](std::span<const double> v) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return v[l] < v[r]; });
    std::vector<double> scores(n);
    for (std::size_t rank = 0; rank < n; ++rank) {
      scores[order[rank]] = 2.0 * std::numbers::pi * static_cast<double>(rank) / static_cast<double>(n);
    }
    return scores;
  };
  const auto sa = uniform_scores(a);
  const auto sb = uniform_scores(b);
  std::complex<double> minus{0.0, 0.0};
  std::complex<double> plus{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    minus += std::polar(1.0, sa[k] - sb[k]);
    plus += std::polar(1.0, sa[k] + sb[k]);
  }
  return std::max(std::abs(minus), std::abs(plus)) / static_cast<double>(n);
}

std::string projection_csv(const Projection2D& projection) {
  std::string out = "label,x,y\n";
  char buf[64];
  for (const auto& p : projection.points) {
    std::string label = p.label;
    if (label.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : label) {
        quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      }
      label = quoted + "\"";
    }
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", p.x, p.y);
    out += label + buf;
  }
  return out;
}

std::string projection_svg(const Projection2D& projection, const std::string& title) {
  std::vector<svg::LabeledPoint> pts;
  pts.reserve(projection.points.size());
  for (const auto& p : projection.points) {
    pts.push_back({p.label, p.x, p.y});
  }
  return svg::scatter(pts, title);
}

}  // namespace digitwise
