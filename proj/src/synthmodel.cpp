#include "digitwise/synthmodel.hpp"

#include <omp.h>

#include <stdexcept>
#include <string>

#include "digitwise/kernels.hpp"
#include "digitwise/rng.hpp"

namespace digitwise {

double SyntheticSpec::signal_scale(int digit_index) const {
  return signal_scales.empty() ? 1.0 : signal_scales.at(static_cast<std::size_t>(digit_index));
}

void validate(const SyntheticSpec& spec) {
  if (spec.base < 2 || spec.width < 1) {
    throw std::invalid_argument("synthetic spec needs base >= 2 and width >= 1");
  }
  if (2 * static_cast<std::size_t>(spec.width) + spec.distractor_dim > spec.hidden_dim) {
    throw std::invalid_argument("subspace budget exceeded: 2*width + distractor_dim > hidden_dim");
  }
  if (!spec.signal_scales.empty() && spec.signal_scales.size() != static_cast<std::size_t>(spec.width)) {
    throw std::invalid_argument("signal_scales must have one entry per digit");
  }
  for (double s : spec.signal_scales) {
    if (!(s > 0.0)) {
      throw std::invalid_argument("signal scales must be > 0");
    }
  }
  if (!(spec.noise_sigma >= 0.0) || !(spec.distractor_sigma >= 0.0)) {
    throw std::invalid_argument("noise levels must be >= 0");
  }
  if (!checked_pow(static_cast<Natural>(spec.base), spec.width)) {
    throw std::invalid_argument("base^width overflows 64 bits");
  }
}

Eigen::MatrixXd synthetic_basis(const SyntheticSpec& spec) {
  validate(spec);
  const auto d = static_cast<Eigen::Index>(spec.hidden_dim);
  const auto k = static_cast<Eigen::Index>(2 * static_cast<std::size_t>(spec.width) + spec.distractor_dim);
  SplitMix64 rng(derive_seed(spec.seed, {0}));
  Eigen::MatrixXd gaussian(d, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      gaussian(r, c) = rng.normal();
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  return qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
}

RepresentationDataset generate(const SyntheticSpec& spec, std::span<const Natural> labels,
                               std::size_t num_layers, const std::string& model_name) {
  validate(spec);
  if (num_layers < 1 || labels.empty()) {
    throw std::invalid_argument("need at least one layer and one label");
  }
  const Natural limit = *checked_pow(static_cast<Natural>(spec.base), spec.width);
  for (auto x : labels) {
    if (x >= limit) {
      throw std::invalid_argument("label " + std::to_string(x) + " does not fit in " +
                                  std::to_string(spec.width) + " base-" + std::to_string(spec.base) +
                                  " digits");
    }
  }
  const Eigen::MatrixXd basis = synthetic_basis(spec);
  const std::size_t d = spec.hidden_dim;
  const std::size_t n = labels.size();
  const auto frame_cols = 2 * static_cast<Eigen::Index>(spec.width);

  // Noiseless planted signal, shared by all layers.
  Eigen::MatrixXd signal = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  for (std::size_t item = 0; item < n; ++item) {
    for (int i = 0; i < spec.width; ++i) {
      const auto p = circle_map(digit_of(labels[item], spec.base, i), spec.base);
      const double s = spec.signal_scale(i);
      signal.col(static_cast<Eigen::Index>(item)) +=
          s * (p.x * basis.col(2 * i) + p.y * basis.col(2 * i + 1));
    }
  }

  std::vector<float> tensor(num_layers * n * d);
  const auto total = static_cast<long>(num_layers * n);
#pragma omp parallel for schedule(static) num_threads(kernels::thread_count())
  for (long cell = 0; cell < total; ++cell) {
    const auto layer = static_cast<std::size_t>(cell) / n;
    const auto item = static_cast<std::size_t>(cell) % n;
    SplitMix64 rng(derive_seed(spec.seed, {1, layer, item}));
    Eigen::VectorXd h = signal.col(static_cast<Eigen::Index>(item));
    for (std::size_t k = 0; k < spec.distractor_dim; ++k) {
      h += spec.distractor_sigma * rng.normal() * basis.col(frame_cols + static_cast<Eigen::Index>(k));
    }
    if (spec.noise_sigma > 0.0) {
      for (std::size_t j = 0; j < d; ++j) {
        h(static_cast<Eigen::Index>(j)) += spec.noise_sigma * rng.normal();
      }
    }
    float* out = tensor.data() + static_cast<std::size_t>(cell) * d;
    for (std::size_t j = 0; j < d; ++j) {
      out[j] = static_cast<float>(h(static_cast<Eigen::Index>(j)));
    }
  }

  DatasetMeta meta;
  meta.model_name = model_name;
  meta.num_layers = static_cast<std::uint32_t>(num_layers);
  meta.num_items = static_cast<std::uint32_t>(n);
  meta.hidden_dim = static_cast<std::uint32_t>(d);
  meta.labels.assign(labels.begin(), labels.end());
  return {std::move(meta), std::move(tensor)};
}

int true_digit(const SyntheticSpec& spec, Natural x, int digit_index) {
  const auto limit = checked_pow(static_cast<Natural>(spec.base), spec.width);
  if (digit_index < 0 || (limit && x >= *limit)) {
    throw std::invalid_argument("label or digit index out of range for the synthetic spec");
  }
  return digit_of(x, spec.base, digit_index);
}

std::vector<Natural> label_range(Natural lo, Natural hi) {
  if (lo > hi) {
    throw std::invalid_argument("empty label range");
  }
  std::vector<Natural> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (Natural x = lo; x <= hi; ++x) {
    out.push_back(x);
  }
  return out;
}

}  // namespace digitwise
