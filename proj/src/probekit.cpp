#include "digitwise/probekit.hpp"

#include <array>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "digitwise/errors.hpp"
#include "digitwise/kernels.hpp"

namespace digitwise {

using nlohmann::json;

namespace {

std::vector<Natural> labels_at(const std::vector<Natural>& all, std::span<const std::size_t> items) {
  std::vector<Natural> out;
  out.reserve(items.size());
  for (auto i : items) {
    out.push_back(all.at(i));
  }
  return out;
}

void require_layer(const RepresentationDataset& ds, std::size_t layer) {
  if (layer >= ds.layers()) {
    throw std::invalid_argument("layer " + std::to_string(layer) + " out of range (dataset has " +
                                std::to_string(ds.layers()) + ")");
  }
}

// Groups probes by (layer, base) and orders each group by digit index.
std::map<std::pair<std::size_t, int>, std::vector<const CircularProbe*>> group_probes(
    std::span<const CircularProbe> probes) {
  std::map<std::pair<std::size_t, int>, std::vector<const CircularProbe*>> groups;
  for (const auto& p : probes) {
    groups[{p.layer, p.base}].push_back(&p);
  }
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(),
              [](const auto* a, const auto* b) { return a->digit_index < b->digit_index; });
    for (std::size_t k = 0; k < group.size(); ++k) {
      if (group[k]->digit_index != static_cast<int>(k)) {
        throw std::invalid_argument("probe set for layer " + std::to_string(key.first) + " base " +
                                    std::to_string(key.second) +
                                    " does not cover digit positions 0..w-1 exactly once");
      }
    }
  }
  return groups;
}

}  // namespace

template <typename T>
Natural reconstruct_number(std::span<const CircularProbe> probes, std::span<const T> h) {
  if (probes.empty()) {
    throw std::invalid_argument("empty probe set");
  }
  for (const auto& p : probes) {
    if (p.base != probes.front().base || p.layer != probes.front().layer) {
      throw std::invalid_argument("probe set mixes bases or layers");
    }
  }
  const auto groups = group_probes(probes);
  const auto& group = groups.begin()->second;
  const int width = static_cast<int>(group.size());
  DigitVector dv{probes.front().base, width, std::vector<int>(static_cast<std::size_t>(width))};
  for (int i = 0; i < width; ++i) {
    dv.digits[static_cast<std::size_t>(width - 1 - i)] = predict_digit(*group[static_cast<std::size_t>(i)], h);
  }
  return from_digits(dv);
}

template Natural reconstruct_number<float>(std::span<const CircularProbe>, std::span<const float>);
template Natural reconstruct_number<double>(std::span<const CircularProbe>, std::span<const double>);

Eigen::MatrixXd gather_rows(const RepresentationDataset& ds, std::size_t layer,
                            std::span<const std::size_t> items, const Eigen::VectorXd* center) {
  require_layer(ds, layer);
  const auto n = static_cast<Eigen::Index>(items.size());
  const auto d = static_cast<Eigen::Index>(ds.dim());
  Eigen::MatrixXd out(n, d);
#pragma omp parallel for schedule(static) num_threads(kernels::thread_count())
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto row = ds.row(layer, items[static_cast<std::size_t>(r)]);
    for (Eigen::Index j = 0; j < d; ++j) {
      out(r, j) = static_cast<double>(row[static_cast<std::size_t>(j)]) - (center ? (*center)(j) : 0.0);
    }
  }
  return out;
}

Eigen::MatrixXd circle_targets(std::span<const Natural> labels, int base, int digit_index) {
  Eigen::MatrixXd y(static_cast<Eigen::Index>(labels.size()), 2);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const auto p = circle_map(digit_of(labels[r], base, digit_index), base);
    y(static_cast<Eigen::Index>(r), 0) = p.x;
    y(static_cast<Eigen::Index>(r), 1) = p.y;
  }
  return y;
}

int label_width(const RepresentationDataset& ds, int base) {
  const auto labels = ds.numeric_labels();
  const auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
  return digit_width(base, *lo, *hi);
}

NormalEquations::NormalEquations(const RepresentationDataset& ds, std::span<const std::size_t> train,
                                 std::size_t layer, const ProbeOptions& options)
    : layer_(layer) {
  require_layer(ds, layer);
  if (train.empty()) {
    throw std::invalid_argument("empty training set");
  }
  samples_ = gather_rows(ds, layer, train);
  const double raw_trace = samples_.squaredNorm();
  if (options.center) {
    center_ = kernels::parallel::column_mean(samples_);
    samples_.rowwise() -= center_.transpose();
  } else {
    center_ = Eigen::VectorXd::Zero(samples_.cols());
  }
  Eigen::MatrixXd gram = kernels::parallel::gram(samples_);
  const double trace = gram.trace();
  // Centering identical rows leaves only rounding residue (~1e-32 relative).
  if (!(trace > 1e-20 * raw_trace) || trace == 0.0) {
    throw SingularDataError("training vectors are constant at layer " + std::to_string(layer) +
                            "; normal matrix is singular");
  }
  lambda_ = options.ridge_factor * trace / static_cast<double>(gram.rows());
  gram.diagonal().array() += lambda_;
  factor_.compute(gram);
  if (factor_.info() != Eigen::Success) {
    throw SingularDataError("normal matrix is not positive definite at layer " + std::to_string(layer));
  }
  const double rcond = factor_.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > options.max_condition) {
    throw SingularDataError("normal matrix condition estimate exceeds " +
                            std::to_string(options.max_condition) + " at layer " + std::to_string(layer));
  }
}

Eigen::MatrixXd NormalEquations::solve(const Eigen::MatrixXd& targets) const {
  if (targets.rows() != samples_.rows()) {
    throw std::invalid_argument("target rows do not match training samples");
  }
  const Eigen::MatrixXd rhs = kernels::parallel::cross(samples_, targets);
  return factor_.solve(rhs).transpose();
}

CircularProbe train_circular_probe(const RepresentationDataset& ds, std::span<const std::size_t> train,
                                   std::size_t layer, int base, int digit_index,
                                   const ProbeOptions& options) {
  const int width = label_width(ds, base);
  if (digit_index < 0 || digit_index >= width) {
    throw std::invalid_argument("digit index " + std::to_string(digit_index) + " outside width " +
                                std::to_string(width) + " for base " + std::to_string(base));
  }
  NormalEquations ne(ds, train, layer, options);
  const auto labels = labels_at(ds.numeric_labels(), train);
  CircularProbe probe;
  probe.layer = layer;
  probe.base = base;
  probe.digit_index = digit_index;
  const Eigen::MatrixXd targets = circle_targets(labels, base, digit_index);
  probe.weights = ne.solve(targets);
  if (options.center) {
    probe.offset = targets.colwise().mean().transpose();
  }
  probe.center = ne.center();
  probe.lambda = ne.lambda();
  return probe;
}

std::vector<CircularProbe> train_probe_set(const RepresentationDataset& ds,
                                           std::span<const std::size_t> train,
                                           std::span<const std::size_t> layers,
                                           std::span<const int> bases, const ProbeOptions& options) {
  const auto labels = labels_at(ds.numeric_labels(), train);
  std::vector<std::pair<int, int>> targets;  // (base, digit)
  for (int base : bases) {
    const int width = label_width(ds, base);
    for (int i = 0; i < width; ++i) {
      targets.emplace_back(base, i);
    }
  }
  Eigen::MatrixXd y(static_cast<Eigen::Index>(labels.size()), 2 * static_cast<Eigen::Index>(targets.size()));
  for (std::size_t t = 0; t < targets.size(); ++t) {
    y.middleCols(2 * static_cast<Eigen::Index>(t), 2) = circle_targets(labels, targets[t].first, targets[t].second);
  }

  std::vector<CircularProbe> probes;
  for (auto layer : layers) {
    NormalEquations ne(ds, train, layer, options);
    const Eigen::MatrixXd w = ne.solve(y);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      CircularProbe p;
      p.layer = layer;
      p.base = targets[t].first;
      p.digit_index = targets[t].second;
      p.weights = w.middleRows(2 * static_cast<Eigen::Index>(t), 2);
      if (options.center) {
        p.offset = y.middleCols(2 * static_cast<Eigen::Index>(t), 2).colwise().mean().transpose();
      }
      p.center = ne.center();
      p.lambda = ne.lambda();
      probes.push_back(std::move(p));
    }
  }
  return probes;
}

const AccuracyRow* AccuracyTable::find(int base, std::size_t layer) const {
  for (const auto& r : rows) {
    if (r.base == base && r.layer == layer) {
      return &r;
    }
  }
  return nullptr;
}

const BaseAggregate* AccuracyTable::aggregate(int base) const {
  for (const auto& a : aggregates) {
    if (a.base == base) {
      return &a;
    }
  }
  return nullptr;
}

std::vector<BaseAggregate> aggregate_rows(std::span<const AccuracyRow> rows, std::size_t min_layer) {
  std::map<int, std::vector<const AccuracyRow*>> by_base;
  for (const auto& r : rows) {
    by_base[r.base].push_back(&r);
  }
  std::vector<BaseAggregate> out;
  for (const auto& [base, group] : by_base) {
    BaseAggregate agg;
    agg.base = base;
    agg.max = -1.0;
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto* r : group) {
      if (r->accuracy > agg.max) {
        agg.max = r->accuracy;
        agg.argmax_layer = r->layer;
      }
      if (r->layer >= min_layer) {
        sum += r->accuracy;
        ++count;
      }
    }
    if (count > 0) {
      agg.mean_from_layer = sum / static_cast<double>(count);
    }
    out.push_back(agg);
  }
  return out;
}

AccuracyTable evaluate_suite(const RepresentationDataset& ds, const Split& split,
                             std::span<const int> bases, std::span<const std::size_t> layers,
                             const SuiteOptions& options) {
  if (split.val.empty()) {
    throw std::invalid_argument("validation set is empty");
  }
  std::vector<int> unique_bases(bases.begin(), bases.end());
  std::sort(unique_bases.begin(), unique_bases.end());
  unique_bases.erase(std::unique(unique_bases.begin(), unique_bases.end()), unique_bases.end());
  for (int base : unique_bases) {
    if (base < 2) {
      throw std::invalid_argument("base must be >= 2");
    }
  }
  const auto all_labels = ds.numeric_labels();
  const auto val_labels = labels_at(all_labels, split.val);

  AccuracyTable table;
  table.min_layer = options.min_layer;
  for (auto layer : layers) {
    const auto probes = train_probe_set(ds, split.train, std::span<const std::size_t>(&layer, 1),
                                        unique_bases, options.probe);
    const Eigen::VectorXd& center = probes.front().center;
    const Eigen::MatrixXd val = gather_rows(ds, layer, split.val, &center);
    Eigen::MatrixXd weights(2 * static_cast<Eigen::Index>(probes.size()), val.cols());
    for (std::size_t p = 0; p < probes.size(); ++p) {
      weights.middleRows(2 * static_cast<Eigen::Index>(p), 2) = probes[p].weights;
    }
    Eigen::MatrixXd out = kernels::parallel::project(val, weights);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      out.col(2 * static_cast<Eigen::Index>(p)).array() += probes[p].offset(0);
      out.col(2 * static_cast<Eigen::Index>(p) + 1).array() += probes[p].offset(1);
    }

    std::size_t offset = 0;
    for (int base : unique_bases) {
      std::size_t width = 0;
      while (offset + width < probes.size() && probes[offset + width].base == base) {
        ++width;
      }
      AccuracyRow row{base, layer, 0, val_labels.size(), 0.0};
      for (std::size_t r = 0; r < val_labels.size(); ++r) {
        bool all = true;
        for (std::size_t i = 0; i < width && all; ++i) {
          const auto col = 2 * static_cast<Eigen::Index>(offset + i);
          const double x = out(static_cast<Eigen::Index>(r), col);
          const double y = out(static_cast<Eigen::Index>(r), col + 1);
          all = !(x == 0.0 && y == 0.0) &&
                decode_angle(x, y, base) == digit_of(val_labels[r], base, static_cast<int>(i));
        }
        row.correct += all ? 1 : 0;
      }
      row.accuracy = static_cast<double>(row.correct) / static_cast<double>(row.total);
      table.rows.push_back(row);
      offset += width;
    }
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.base, a.layer) < std::tie(b.base, b.layer);
  });
  table.aggregates = aggregate_rows(table.rows, table.min_layer);
  return table;
}

std::vector<AccuracyRow> evaluate_transfer(std::span<const CircularProbe> probes,
                                           const RepresentationDataset& other,
                                           std::span<const std::size_t> items) {
  std::vector<std::size_t> all_items;
  if (items.empty()) {
    all_items.resize(other.items());
    for (std::size_t k = 0; k < all_items.size(); ++k) {
      all_items[k] = k;
    }
    items = all_items;
  }
  const auto labels = labels_at(other.numeric_labels(), items);
  std::vector<AccuracyRow> rows;
  for (const auto& [key, group] : group_probes(probes)) {
    const auto [layer, base] = key;
    if (group.front()->dim() != other.dim()) {
      throw std::invalid_argument("probe dim " + std::to_string(group.front()->dim()) +
                                  " does not match dataset dim " + std::to_string(other.dim()));
    }
    require_layer(other, layer);
    std::size_t correct = 0;
    const auto n = static_cast<long>(items.size());
#pragma omp parallel for reduction(+ : correct) schedule(static) num_threads(kernels::thread_count())
    for (long r = 0; r < n; ++r) {
      const auto h = other.row(layer, items[static_cast<std::size_t>(r)]);
      bool all = true;
      for (std::size_t i = 0; i < group.size() && all; ++i) {
        const Eigen::Vector2d p = probe_output(*group[i], h);
        all = !(p(0) == 0.0 && p(1) == 0.0) &&
              decode_angle(p(0), p(1), base) ==
                  digit_of(labels[static_cast<std::size_t>(r)], base, static_cast<int>(i));
      }
      correct += all ? 1 : 0;
    }
    rows.push_back({base, layer, correct, items.size(),
                    static_cast<double>(correct) / static_cast<double>(items.size())});
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.base, a.layer) < std::tie(b.base, b.layer);
  });
  return rows;
}

Natural linear_truth(const LinearTarget& target, Natural label) {
  if (target.kind == LinearTargetKind::kDigit) {
    return static_cast<Natural>(digit_of(label, target.base, target.digit_index));
  }
  return label;
}

LinearProbe train_linear_probe(const RepresentationDataset& ds, std::span<const std::size_t> train,
                               std::size_t layer, const LinearTarget& target,
                               const ProbeOptions& options) {
  if (target.kind == LinearTargetKind::kDigit && target.base < 2) {
    throw std::invalid_argument("base must be >= 2");
  }
  NormalEquations ne(ds, train, layer, options);
  const auto labels = labels_at(ds.numeric_labels(), train);
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    y(static_cast<Eigen::Index>(r)) = static_cast<double>(linear_truth(target, labels[r]));
  }
  const double mean = y.mean();
  const Eigen::MatrixXd w = ne.solve((y.array() - mean).matrix());

  LinearProbe probe;
  probe.layer = layer;
  probe.target = target;
  probe.weights = w.row(0).transpose();
  probe.bias = mean - probe.weights.dot(ne.center());
  if (target.kind == LinearTargetKind::kDigit) {
    probe.lo = 0.0;
    probe.hi = static_cast<double>(target.base - 1);
  } else {
    probe.lo = y.minCoeff();
    probe.hi = y.maxCoeff();
  }
  return probe;
}

Natural predict_linear(const LinearProbe& probe, std::span<const float> h) {
  if (h.size() != static_cast<std::size_t>(probe.weights.size())) {
    throw std::invalid_argument("hidden vector dim does not match linear probe");
  }
  double v = probe.bias;
  for (std::size_t j = 0; j < h.size(); ++j) {
    v += probe.weights(static_cast<Eigen::Index>(j)) * static_cast<double>(h[j]);
  }
  return static_cast<Natural>(std::clamp(std::round(v), probe.lo, probe.hi));
}

double evaluate_linear(const LinearProbe& probe, const RepresentationDataset& ds,
                       std::span<const std::size_t> items) {
  if (items.empty()) {
    throw std::invalid_argument("empty evaluation set");
  }
  const auto labels = ds.numeric_labels();
  std::size_t correct = 0;
  for (auto item : items) {
    correct += predict_linear(probe, ds.row(probe.layer, item)) == linear_truth(probe.target, labels[item]) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(items.size());
}

json to_json(const CircularProbe& probe) {
  std::vector<double> row0(probe.weights.row(0).begin(), probe.weights.row(0).end());
  std::vector<double> row1(probe.weights.row(1).begin(), probe.weights.row(1).end());
  std::vector<double> center(probe.center.begin(), probe.center.end());
  return json{{"format_version", kProbeFormatVersion},
              {"layer", probe.layer},
              {"base", probe.base},
              {"digit_index", probe.digit_index},
              {"lambda", probe.lambda},
              {"center", center},
              {"offset", std::vector<double>{probe.offset(0), probe.offset(1)}},
              {"weights", json::array({row0, row1})}};
}

CircularProbe circular_probe_from_json(const json& j) {
  try {
    if (j.at("format_version").get<int>() != kProbeFormatVersion) {
      throw FormatError("unsupported probe format_version");
    }
    CircularProbe p;
    p.layer = j.at("layer").get<std::size_t>();
    p.base = j.at("base").get<int>();
    p.digit_index = j.at("digit_index").get<int>();
    p.lambda = j.at("lambda").get<double>();
    const auto center = j.at("center").get<std::vector<double>>();
    const auto offset = j.at("offset").get<std::array<double, 2>>();
    p.offset = {offset[0], offset[1]};
    const auto& w = j.at("weights");
    if (w.size() != 2) {
      throw FormatError("probe weights must have exactly 2 rows");
    }
    const auto r0 = w.at(0).get<std::vector<double>>();
    const auto r1 = w.at(1).get<std::vector<double>>();
    if (r0.size() != center.size() || r1.size() != center.size() || center.empty()) {
      throw FormatError("probe weight rows and center must share length d >= 1");
    }
    if (p.base < 2 || p.digit_index < 0) {
      throw FormatError("probe base/digit_index out of range");
    }
    const auto d = static_cast<Eigen::Index>(center.size());
    p.center = Eigen::Map<const Eigen::VectorXd>(center.data(), d);
    p.weights.resize(2, d);
    p.weights.row(0) = Eigen::Map<const Eigen::RowVectorXd>(r0.data(), d);
    p.weights.row(1) = Eigen::Map<const Eigen::RowVectorXd>(r1.data(), d);
    if (!p.weights.allFinite() || !p.center.allFinite() || !p.offset.allFinite()) {
      throw FormatError("probe contains non-finite values");
    }
    return p;
  } catch (const json::exception& e) {
    throw FormatError(std::string("probe schema violation: ") + e.what());
  }
}

json probe_set_to_json(std::span<const CircularProbe> probes) {
  json arr = json::array();
  for (const auto& p : probes) {
    arr.push_back(to_json(p));
  }
  return json{{"format_version", kProbeFormatVersion}, {"probes", arr}};
}

std::vector<CircularProbe> probe_set_from_json(const json& j) {
  try {
    if (j.at("format_version").get<int>() != kProbeFormatVersion) {
      throw FormatError("unsupported probe set format_version " + j.at("format_version").dump());
    }
    std::vector<CircularProbe> out;
    for (const auto& p : j.at("probes")) {
      out.push_back(circular_probe_from_json(p));
    }
    return out;
  } catch (const json::exception& e) {
    throw FormatError(std::string("probe set schema violation: ") + e.what());
  }
}

json to_json(const AccuracyTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"base", r.base}, {"layer", r.layer}, {"correct", r.correct},
                    {"total", r.total}, {"accuracy", r.accuracy}});
  }
  json aggs = json::array();
  for (const auto& a : table.aggregates) {
    aggs.push_back({{"base", a.base},
                    {"mean_from_layer", a.mean_from_layer ? json(*a.mean_from_layer) : json(nullptr)},
                    {"max", a.max},
                    {"argmax_layer", a.argmax_layer}});
  }
  return json{{"min_layer", table.min_layer}, {"rows", rows}, {"aggregates", aggs}};
}

std::string to_text(const AccuracyTable& table) {
  std::map<std::size_t, bool> layer_set;
  for (const auto& r : table.rows) {
    layer_set[r.layer] = true;
  }
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << std::setw(6) << "base";
  for (const auto& [layer, _] : layer_set) {
    os << std::setw(7) << ("L" + std::to_string(layer));
  }
  os << std::setw(9) << ("mean>=" + std::to_string(table.min_layer)) << std::setw(7) << "max" << '\n';
  for (const auto& agg : table.aggregates) {
    os << std::setw(6) << agg.base;
    for (const auto& [layer, _] : layer_set) {
      const auto* r = table.find(agg.base, layer);
      if (r) {
        os << std::setw(7) << r->accuracy;
      } else {
        os << std::setw(7) << "-";
      }
    }
    if (agg.mean_from_layer) {
      os << std::setw(9) << *agg.mean_from_layer;
    } else {
      os << std::setw(9) << "-";
    }
    os << std::setw(7) << agg.max << '\n';
  }
  return os.str();
}

}  // namespace digitwise
