#pragma once

// Digit-flip interventions in base 10.
//
// A patch holds an orthonormal basis (u, v) of a circular probe's plane.
// Applying it removes the in-plane component of h and adds it back reversed
// and scaled: h' = h - (1 + a) proj, proj = (u.h) u + (v.h) v. Reversal
// negates both circle coordinates, i.e. adds base/2 = 5 to the decoded digit.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "digitwise/numeral.hpp"
#include "digitwise/probekit.hpp"

namespace digitwise {

inline constexpr double kDefaultPatchScale = 19.0;
inline constexpr int kPatchFormatVersion = 1;

struct InterventionPatch {
  std::size_t layer = 0;
  int base = 10;
  int digit_index = 0;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double scale = kDefaultPatchScale;
  Natural source_number = 0;

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(u.size()); }
};

// Gram-Schmidt on the probe's two weight rows. Throws std::invalid_argument
// for non-base-10 probes and for linearly dependent rows.
[[nodiscard]] InterventionPatch make_patch(const CircularProbe& probe,
                                           double scale = kDefaultPatchScale,
                                           Natural source = 0);

[[nodiscard]] Eigen::VectorXd apply_patch(const InterventionPatch& patch, std::span<const double> h);
[[nodiscard]] Eigen::VectorXd apply_patch(const InterventionPatch& patch, std::span<const float> h);

// x with digit i replaced by (x_i + 5) mod 10. Throws when x >= 10^width or
// i >= width.
[[nodiscard]] Natural intended_result(Natural x, int digit_index, int width = 3);

enum class Outcome { kExact, kClose, kOther };

struct OutcomeClass {
  Outcome kind = Outcome::kOther;
  Natural intended = 0;
  Natural observed = 0;
  // Distance exactly 10^i: an off-by-one in the edited digit, not close.
  bool boundary = false;

  [[nodiscard]] bool close() const { return kind != Outcome::kOther; }
};

[[nodiscard]] OutcomeClass classify_outcome(Natural x, int digit_index, Natural observed, int width = 3);

[[nodiscard]] const char* outcome_name(Outcome kind);

// Bisection for the largest scale that keeps the model numeric. Requires
// is_numeric(lo) && !is_numeric(hi); returns lo' with hi' - lo' <= tol.
[[nodiscard]] double calibrate_scale(const std::function<bool(double)>& is_numeric, double lo,
                                     double hi, double tol);

[[nodiscard]] nlohmann::json to_json(const InterventionPatch& patch);
[[nodiscard]] InterventionPatch patch_from_json(const nlohmann::json& j);

}  // namespace digitwise
