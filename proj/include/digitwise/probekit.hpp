#pragma once

// Circular and linear digit probes.
//
// A circular probe for (layer, base, digit i) is a 2 x d map P fitted in
// closed form so that P (h - center) lands on circle_map(x_i, base):
//
//   P = Y^T X (X^T X + lambda I)^-1
//
// with X the centered training vectors (n x d) and Y the circle targets
// (n x 2). All probes of one layer share the factorization of X^T X.
//
// Centering without an offset would pin the output for the mean vector to the
// origin, which breaks digits whose training distribution is unbalanced (the
// leading digit of 1..2000 is almost always 0 or 1). The probe therefore adds
// back the training mean of Y:
//
//   output(h) = P (h - center) + offset
//
// which equals the uncentered fit with an unpenalized constant feature. With
// centering off both center and offset are zero.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "digitwise/numeral.hpp"
#include "digitwise/repstore.hpp"

namespace digitwise {

inline constexpr int kProbeFormatVersion = 1;

struct ProbeOptions {
  bool center = true;
  // lambda = ridge_factor * mean(diag(X^T X))
  double ridge_factor = 1e-6;
  // Factorizations with a larger condition estimate are rejected.
  double max_condition = 1e12;
};

struct CircularProbe {
  std::size_t layer = 0;
  int base = 10;
  int digit_index = 0;  // 0 = units
  Eigen::Matrix<double, 2, Eigen::Dynamic> weights;
  Eigen::VectorXd center;
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();  // training mean of the targets
  double lambda = 0.0;

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(weights.cols()); }
};

// Probe output P (h - center) + offset for one hidden vector.
template <typename T>
[[nodiscard]] Eigen::Vector2d probe_output(const CircularProbe& probe, std::span<const T> h) {
  if (h.size() != probe.dim()) {
    throw std::invalid_argument("hidden vector has dim " + std::to_string(h.size()) +
                                ", probe expects " + std::to_string(probe.dim()));
  }
  Eigen::Vector2d out = probe.offset;
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double centered = static_cast<double>(h[j]) - probe.center(static_cast<Eigen::Index>(j));
    out(0) += probe.weights(0, static_cast<Eigen::Index>(j)) * centered;
    out(1) += probe.weights(1, static_cast<Eigen::Index>(j)) * centered;
  }
  return out;
}

template <typename T>
[[nodiscard]] int predict_digit(const CircularProbe& probe, std::span<const T> h) {
  const Eigen::Vector2d p = probe_output(probe, h);
  return decode_angle(p(0), p(1), probe.base);
}

// Probes must share layer and base and cover digit indices 0..w-1 once each.
template <typename T>
[[nodiscard]] Natural reconstruct_number(std::span<const CircularProbe> probes, std::span<const T> h);

// Cached centered training matrix and factorized normal equations for one layer.
class NormalEquations {
 public:
  NormalEquations(const RepresentationDataset& ds, std::span<const std::size_t> train,
                  std::size_t layer, const ProbeOptions& options = {});

  // Ridge solution for each target column; returns k x d weights.
  [[nodiscard]] Eigen::MatrixXd solve(const Eigen::MatrixXd& targets) const;

  [[nodiscard]] const Eigen::VectorXd& center() const { return center_; }
  [[nodiscard]] const Eigen::MatrixXd& samples() const { return samples_; }
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] std::size_t layer() const { return layer_; }

 private:
  std::size_t layer_;
  Eigen::MatrixXd samples_;  // n x d, centered
  Eigen::VectorXd center_;
  double lambda_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

// Gathers rows of one layer into an n x d matrix (minus center when given).
[[nodiscard]] Eigen::MatrixXd gather_rows(const RepresentationDataset& ds, std::size_t layer,
                                          std::span<const std::size_t> items,
                                          const Eigen::VectorXd* center = nullptr);

// Circle targets (cos, sin) of digit i for each label.
[[nodiscard]] Eigen::MatrixXd circle_targets(std::span<const Natural> labels, int base, int digit_index);

// Width of each base over the dataset's numeric label range.
[[nodiscard]] int label_width(const RepresentationDataset& ds, int base);

[[nodiscard]] CircularProbe train_circular_probe(const RepresentationDataset& ds,
                                                 std::span<const std::size_t> train,
                                                 std::size_t layer, int base, int digit_index,
                                                 const ProbeOptions& options = {});

// One probe per (layer, base, digit position), sharing per-layer factorizations.
[[nodiscard]] std::vector<CircularProbe> train_probe_set(const RepresentationDataset& ds,
                                                         std::span<const std::size_t> train,
                                                         std::span<const std::size_t> layers,
                                                         std::span<const int> bases,
                                                         const ProbeOptions& options = {});

struct AccuracyRow {
  int base = 10;
  std::size_t layer = 0;
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
};

struct BaseAggregate {
  int base = 10;
  std::optional<double> mean_from_layer;  // mean over layers >= AccuracyTable::min_layer
  double max = 0.0;
  std::size_t argmax_layer = 0;
};

struct AccuracyTable {
  std::size_t min_layer = 3;
  std::vector<AccuracyRow> rows;  // sorted by (base, layer)
  std::vector<BaseAggregate> aggregates;

  [[nodiscard]] const AccuracyRow* find(int base, std::size_t layer) const;
  [[nodiscard]] const BaseAggregate* aggregate(int base) const;
};

[[nodiscard]] std::vector<BaseAggregate> aggregate_rows(std::span<const AccuracyRow> rows,
                                                        std::size_t min_layer);

struct SuiteOptions {
  ProbeOptions probe;
  std::size_t min_layer = 3;
};

// Trains per-digit probes on split.train and scores all-digit exact match on
// split.val, for every (base, layer).
[[nodiscard]] AccuracyTable evaluate_suite(const RepresentationDataset& ds, const Split& split,
                                           std::span<const int> bases,
                                           std::span<const std::size_t> layers,
                                           const SuiteOptions& options = {});

// Applies trained probes unchanged to another dataset (all items when `items`
// is empty). One row per (base, layer) probe group.
[[nodiscard]] std::vector<AccuracyRow> evaluate_transfer(std::span<const CircularProbe> probes,
                                                         const RepresentationDataset& other,
                                                         std::span<const std::size_t> items = {});

enum class LinearTargetKind { kDigit, kValue };

struct LinearTarget {
  LinearTargetKind kind = LinearTargetKind::kValue;
  int base = 10;
  int digit_index = 0;
};

struct LinearProbe {
  std::size_t layer = 0;
  LinearTarget target;
  Eigen::VectorXd weights;
  double bias = 0.0;
  // Predictions are rounded and clamped to [lo, hi].
  double lo = 0.0;
  double hi = 0.0;
};

[[nodiscard]] LinearProbe train_linear_probe(const RepresentationDataset& ds,
                                             std::span<const std::size_t> train, std::size_t layer,
                                             const LinearTarget& target,
                                             const ProbeOptions& options = {});

[[nodiscard]] Natural predict_linear(const LinearProbe& probe, std::span<const float> h);

[[nodiscard]] double evaluate_linear(const LinearProbe& probe, const RepresentationDataset& ds,
                                     std::span<const std::size_t> items);

// The value the linear probe is trained to emit for a label.
[[nodiscard]] Natural linear_truth(const LinearTarget& target, Natural label);

[[nodiscard]] nlohmann::json to_json(const CircularProbe& probe);
[[nodiscard]] CircularProbe circular_probe_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json probe_set_to_json(std::span<const CircularProbe> probes);
[[nodiscard]] std::vector<CircularProbe> probe_set_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const AccuracyTable& table);
[[nodiscard]] std::string to_text(const AccuracyTable& table);

}  // namespace digitwise
