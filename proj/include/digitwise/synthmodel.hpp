#pragma once

// Synthetic hidden representations with planted circular digit structure:
//
//   h(x) = sum_i s_i R_i circle_base(x_i) + D g + sigma * eps
//
// R_i are mutually orthogonal 2-d frames, D spans a distractor subspace
// orthogonal to every frame, g ~ N(0, distractor_sigma^2 I) and
// eps ~ N(0, I) are drawn fresh per (layer, item). Frames are shared by all
// layers; only the noise differs.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "digitwise/numeral.hpp"
#include "digitwise/repstore.hpp"

namespace digitwise {

struct SyntheticSpec {
  std::size_t hidden_dim = 256;
  int base = 10;
  int width = 3;
  std::vector<double> signal_scales;  // empty means 1 for every digit
  double noise_sigma = 0.05;
  std::size_t distractor_dim = 32;
  double distractor_sigma = 1.0;
  std::uint64_t seed = 0;

  [[nodiscard]] double signal_scale(int digit_index) const;
};

// Throws std::invalid_argument on a violated invariant.
void validate(const SyntheticSpec& spec);

// d x (2*width + distractor_dim) orthonormal basis: columns 2i, 2i+1 form the
// frame of digit i, the rest span the distractor subspace.
[[nodiscard]] Eigen::MatrixXd synthetic_basis(const SyntheticSpec& spec);

[[nodiscard]] RepresentationDataset generate(const SyntheticSpec& spec, std::span<const Natural> labels,
                                             std::size_t num_layers,
                                             const std::string& model_name = "synthetic");

// Digit i of x in spec.base (positions beyond width read as 0).
[[nodiscard]] int true_digit(const SyntheticSpec& spec, Natural x, int digit_index);

// Labels lo, lo+1, ..., hi.
[[nodiscard]] std::vector<Natural> label_range(Natural lo, Natural hi);

}  // namespace digitwise
