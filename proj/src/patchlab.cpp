#include "digitwise/patchlab.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "digitwise/errors.hpp"

namespace digitwise {

using nlohmann::json;

namespace {

template <typename T>
Eigen::VectorXd apply_impl(const InterventionPatch& patch, std::span<const T> h) {
  if (h.size() != patch.dim()) {
    throw std::invalid_argument("hidden vector has dim " + std::to_string(h.size()) +
                                ", patch expects " + std::to_string(patch.dim()));
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(h.size()));
  for (std::size_t j = 0; j < h.size(); ++j) {
    out(static_cast<Eigen::Index>(j)) = static_cast<double>(h[j]);
  }
  const double cu = patch.u.dot(out);
  const double cv = patch.v.dot(out);
  out -= (1.0 + patch.scale) * (cu * patch.u + cv * patch.v);
  return out;
}

}  // namespace

InterventionPatch make_patch(const CircularProbe& probe, double scale, Natural source) {
  if (probe.base != 10) {
    throw std::invalid_argument("interventions are defined for base 10 only");
  }
  if (!std::isfinite(scale)) {
    throw std::invalid_argument("patch scale must be finite");
  }
  const Eigen::VectorXd r0 = probe.weights.row(0).transpose();
  const Eigen::VectorXd r1 = probe.weights.row(1).transpose();
  const double n0 = r0.norm();
  if (!(n0 > 0.0)) {
    throw std::invalid_argument("probe row is zero; plane undefined");
  }
  Eigen::VectorXd u = r0 / n0;
  Eigen::VectorXd v = r1 - u.dot(r1) * u;
  v -= u.dot(v) * u;  // second pass
  const double nv = v.norm();
  if (!(nv > 1e-10 * std::max(r1.norm(), n0))) {
    throw std::invalid_argument("probe rows are linearly dependent; plane undefined");
  }
  InterventionPatch patch;
  patch.layer = probe.layer;
  patch.base = probe.base;
  patch.digit_index = probe.digit_index;
  patch.u = std::move(u);
  patch.v = v / nv;
  patch.scale = scale;
  patch.source_number = source;
  return patch;
}

Eigen::VectorXd apply_patch(const InterventionPatch& patch, std::span<const double> h) {
  return apply_impl(patch, h);
}

Eigen::VectorXd apply_patch(const InterventionPatch& patch, std::span<const float> h) {
  return apply_impl(patch, h);
}

Natural intended_result(Natural x, int digit_index, int width) {
  if (width < 1 || digit_index < 0 || digit_index >= width) {
    throw std::invalid_argument("digit index " + std::to_string(digit_index) + " outside width " +
                                std::to_string(width));
  }
  auto dv = to_digits(x, 10, width);
  auto& d = dv.digits[static_cast<std::size_t>(width - 1 - digit_index)];
  d = (d + 5) % 10;
  return from_digits(dv);
}

OutcomeClass classify_outcome(Natural x, int digit_index, Natural observed, int width) {
  OutcomeClass out;
  out.intended = intended_result(x, digit_index, width);
  out.observed = observed;
  const Natural distance = observed > out.intended ? observed - out.intended : out.intended - observed;
  const Natural step = *checked_pow(10, digit_index);
  if (distance == 0) {
    out.kind = Outcome::kExact;
  } else if (distance < step) {
    out.kind = Outcome::kClose;
  } else {
    out.kind = Outcome::kOther;
    out.boundary = distance == step;
  }
  return out;
}

const char* outcome_name(Outcome kind) {
  switch (kind) {
    case Outcome::kExact:
      return "exact";
    case Outcome::kClose:
      return "close";
    case Outcome::kOther:
      return "other";
  }
  return "other";
}

double calibrate_scale(const std::function<bool(double)>& is_numeric, double lo, double hi, double tol) {
  if (!(lo < hi) || !(tol > 0.0)) {
    throw std::invalid_argument("calibration needs lo < hi and tol > 0");
  }
  if (!is_numeric(lo)) {
    throw std::invalid_argument("predicate is false at the lower endpoint");
  }
  if (is_numeric(hi)) {
    throw std::invalid_argument("predicate is true at the upper endpoint");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (is_numeric(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

json to_json(const InterventionPatch& patch) {
  return json{{"format_version", kPatchFormatVersion},
              {"layer", patch.layer},
              {"base", patch.base},
              {"digit_index", patch.digit_index},
              {"scale", patch.scale},
              {"source_number", patch.source_number},
              {"u", std::vector<double>(patch.u.begin(), patch.u.end())},
              {"v", std::vector<double>(patch.v.begin(), patch.v.end())}};
}

InterventionPatch patch_from_json(const json& j) {
  try {
    if (j.at("format_version").get<int>() != kPatchFormatVersion) {
      throw FormatError("unsupported patch format_version");
    }
    InterventionPatch p;
    p.layer = j.at("layer").get<std::size_t>();
    p.base = j.at("base").get<int>();
    p.digit_index = j.at("digit_index").get<int>();
    p.scale = j.at("scale").get<double>();
    p.source_number = j.at("source_number").get<Natural>();
    const auto u = j.at("u").get<std::vector<double>>();
    const auto v = j.at("v").get<std::vector<double>>();
    if (u.size() != v.size() || u.empty()) {
      throw FormatError("patch u and v must share length d >= 1");
    }
    p.u = Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
    p.v = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    if (std::abs(p.u.norm() - 1.0) > 1e-9 || std::abs(p.v.norm() - 1.0) > 1e-9 ||
        std::abs(p.u.dot(p.v)) > 1e-6) {
      throw FormatError("patch plane is not orthonormal");
    }
    return p;
  } catch (const json::exception& e) {
    throw FormatError(std::string("patch schema violation: ") + e.what());
  }
}

}  // namespace digitwise
