#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "digitwise/errors.hpp"
#include "digitwise/probekit.hpp"
#include "digitwise/rng.hpp"
#include "digitwise/synthmodel.hpp"

using namespace digitwise;

namespace {

SyntheticSpec noiseless_spec() {
  SyntheticSpec spec;
  spec.hidden_dim = 64;
  spec.width = 3;
  spec.noise_sigma = 0.0;
  spec.distractor_dim = 8;
  spec.seed = 21;
  return spec;
}

std::vector<std::size_t> all_items(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// ||X P^T - Y||^2 + lambda ||P||^2, evaluated directly.
double ridge_objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       const Eigen::MatrixXd& p, double lambda) {
  return (x * p.transpose() - y).squaredNorm() + lambda * p.squaredNorm();
}

}  // namespace

TEST_CASE("noiseless planted circles are recovered exactly") {
  const auto labels = label_range(0, 999);
  const auto ds = generate(noiseless_spec(), labels, 2);
  const auto split = make_split(ds.items(), {4, 900, 100});
  const std::vector<int> bases = {10};
  const std::vector<std::size_t> layers = {0, 1};
  const auto table = evaluate_suite(ds, split, bases, layers, {.min_layer = 0});
  REQUIRE(table.rows.size() == 2);
  for (const auto& row : table.rows) {
    CHECK(row.accuracy == 1.0);
    CHECK(row.total == 100);
  }
}

TEST_CASE("constant representations are singular") {
  DatasetMeta meta{"flat", 1, 20, 3, {}};
  for (Natural k = 0; k < 20; ++k) meta.labels.emplace_back(k);
  const RepresentationDataset ds(meta, std::vector<float>(60, 2.5f));
  const auto items = all_items(20);
  CHECK_THROWS_AS((void)train_circular_probe(ds, items, 0, 10, 0), SingularDataError);
}

TEST_CASE("zero probe output is undecodable") {
  // Without centering the probe is linear, so the zero vector maps to the origin.
  const auto ds = generate(noiseless_spec(), label_range(0, 99), 1);
  const auto items = all_items(ds.items());
  const auto probe = train_circular_probe(ds, items, 0, 10, 0, {.center = false});
  CHECK(probe.offset.isZero());
  CHECK(probe.center.isZero());
  const std::vector<double> origin(ds.dim(), 0.0);
  CHECK_THROWS_AS((void)predict_digit(probe, std::span<const double>(origin)), std::domain_error);
}

TEST_CASE("centered probe reproduces the training mean at the center") {
  const auto ds = generate(noiseless_spec(), label_range(0, 99), 1);
  const auto items = all_items(ds.items());
  const auto probe = train_circular_probe(ds, items, 0, 10, 1);
  const std::vector<double> at_center(probe.center.data(), probe.center.data() + probe.center.size());
  const Eigen::Vector2d out = probe_output(probe, std::span<const double>(at_center));
  CHECK((out - probe.offset).norm() < 1e-12);
}

TEST_CASE("unbalanced leading digit is recovered") {
  // Thousands digit of 1..2000 is 0 or 1 for all but one item.
  auto spec = noiseless_spec();
  spec.width = 4;
  const auto ds = generate(spec, label_range(1, 2000), 1);
  const auto split = make_split(ds.items(), {7, 1800, 200});
  const std::vector<int> bases = {10};
  const std::vector<std::size_t> layers = {0};
  for (bool center : {true, false}) {
    SuiteOptions opts{.probe = {.center = center}, .min_layer = 0};
    CHECK(evaluate_suite(ds, split, bases, layers, opts).rows.at(0).accuracy == 1.0);
  }
}

TEST_CASE("reconstruct_number from a full probe set") {
  const auto ds = generate(noiseless_spec(), label_range(0, 999), 1);
  const auto items = all_items(ds.items());
  const std::vector<std::size_t> layers = {0};
  const std::vector<int> bases = {10};
  const auto probes = train_probe_set(ds, items, layers, bases);
  REQUIRE(probes.size() == 3);
  CHECK(reconstruct_number(std::span<const CircularProbe>(probes), ds.row(0, 375)) == 375);

  auto broken = probes;
  broken[1].base = 7;
  CHECK_THROWS_AS((void)reconstruct_number(std::span<const CircularProbe>(broken), ds.row(0, 375)),
                  std::invalid_argument);
  broken = probes;
  broken[2].digit_index = 1;
  CHECK_THROWS_AS((void)reconstruct_number(std::span<const CircularProbe>(broken), ds.row(0, 375)),
                  std::invalid_argument);
}

TEST_CASE("closed form minimizes the ridge objective") {
  auto spec = noiseless_spec();
  spec.noise_sigma = 0.3;
  spec.hidden_dim = 24;
  spec.distractor_dim = 4;
  const auto ds = generate(spec, label_range(0, 199), 1);
  const auto items = all_items(ds.items());
  const auto probe = train_circular_probe(ds, items, 0, 10, 1);
  const Eigen::MatrixXd x = gather_rows(ds, 0, items, &probe.center);
  const auto labels = ds.numeric_labels();
  const Eigen::MatrixXd y = circle_targets(labels, 10, 1);
  const Eigen::MatrixXd p = probe.weights;
  const double best = ridge_objective(x, y, p, probe.lambda);

  SplitMix64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd delta(2, p.cols());
    for (Eigen::Index k = 0; k < delta.size(); ++k) delta.data()[k] = rng.normal();
    delta *= 1e-3 * p.norm() / delta.norm();
    REQUIRE(ridge_objective(x, y, p + delta, probe.lambda) >= best);
  }
}

TEST_CASE("predictions are invariant to scaling the representations") {
  auto spec = noiseless_spec();
  spec.noise_sigma = 0.05;
  const auto ds = generate(spec, label_range(0, 999), 1);
  auto meta = ds.meta();
  auto tensor = ds.tensor();
  for (float& f : tensor) f *= 4.0f;  // exact in binary32
  const RepresentationDataset scaled(meta, tensor);
  const auto split = make_split(ds.items(), {2, 900, 100});
  const auto a = train_circular_probe(ds, split.train, 0, 10, 0);
  const auto b = train_circular_probe(scaled, split.train, 0, 10, 0);
  for (std::size_t item : split.val) {
    REQUIRE(predict_digit(a, ds.row(0, item)) == predict_digit(b, scaled.row(0, item)));
  }
}

TEST_CASE("aggregates agree with rows") {
  auto spec = noiseless_spec();
  spec.noise_sigma = 0.05;
  const auto ds = generate(spec, label_range(0, 999), 5);
  const auto split = make_split(ds.items(), {1, 900, 100});
  const std::vector<int> bases = {10, 7, 3};
  const std::vector<std::size_t> layers = {0, 1, 2, 3, 4};
  const auto table = evaluate_suite(ds, split, bases, layers);
  CHECK(table.rows.size() == 15);
  for (int base : {3, 7, 10}) {
    double sum = 0, max = -1;
    int count = 0;
    for (const auto& row : table.rows) {
      if (row.base != base) continue;
      CHECK(row.accuracy == doctest::Approx(static_cast<double>(row.correct) / row.total));
      max = std::max(max, row.accuracy);
      if (row.layer >= 3) {
        sum += row.accuracy;
        ++count;
      }
    }
    const auto* agg = table.aggregate(base);
    REQUIRE(agg != nullptr);
    REQUIRE(agg->mean_from_layer.has_value());
    CHECK(*agg->mean_from_layer == doctest::Approx(sum / count));
    CHECK(agg->max == max);
    CHECK(table.find(base, agg->argmax_layer)->accuracy == max);
  }
  CHECK(table.aggregate(10)->max == 1.0);
  CHECK(table.aggregate(7)->max < 0.1);
}

TEST_CASE("too-short layer range has no mean") {
  const auto ds = generate(noiseless_spec(), label_range(0, 999), 2);
  const auto split = make_split(ds.items(), {1, 900, 100});
  const std::vector<int> bases = {10};
  const std::vector<std::size_t> layers = {0, 1};
  const auto table = evaluate_suite(ds, split, bases, layers);
  CHECK_FALSE(table.aggregate(10)->mean_from_layer.has_value());
}

TEST_CASE("empty validation split is an error") {
  const auto ds = generate(noiseless_spec(), label_range(0, 99), 1);
  const Split split{all_items(100), {}};
  const std::vector<int> bases = {10};
  const std::vector<std::size_t> layers = {0};
  CHECK_THROWS((void)evaluate_suite(ds, split, bases, layers));
}

TEST_CASE("table serialization is deterministic") {
  auto spec = noiseless_spec();
  spec.noise_sigma = 0.05;
  const auto ds = generate(spec, label_range(0, 999), 4);
  const auto split = make_split(ds.items(), {1, 900, 100});
  const std::vector<int> bases = {2, 10, 1000};
  const std::vector<std::size_t> layers = {0, 1, 2, 3};
  const auto a = evaluate_suite(ds, split, bases, layers);
  const auto b = evaluate_suite(ds, split, bases, layers);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(to_text(a) == to_text(b));
  CHECK(to_text(a).find("1000") != std::string::npos);
}

TEST_CASE("linear probe on a constant target learns only the bias") {
  auto spec = noiseless_spec();
  spec.noise_sigma = 0.05;
  const auto ds = generate(spec, label_range(100, 199), 1);
  const auto items = all_items(ds.items());
  const LinearTarget hundreds{LinearTargetKind::kDigit, 10, 2};
  const auto probe = train_linear_probe(ds, items, 0, hundreds);
  CHECK(probe.weights.norm() < 1e-6);
  CHECK(probe.bias == doctest::Approx(1.0));
  CHECK(evaluate_linear(probe, ds, items) == 1.0);
  CHECK(linear_truth(hundreds, 375) == 3);
  CHECK(linear_truth({LinearTargetKind::kValue, 10, 0}, 375) == 375);
}

TEST_CASE("transfer on the training dataset matches the suite") {
  auto spec = noiseless_spec();
  spec.noise_sigma = 0.05;
  const auto ds = generate(spec, label_range(0, 999), 2);
  const auto split = make_split(ds.items(), {3, 900, 100});
  const std::vector<int> bases = {10, 5};
  const std::vector<std::size_t> layers = {0, 1};
  const auto table = evaluate_suite(ds, split, bases, layers, {.min_layer = 0});
  const auto probes = train_probe_set(ds, split.train, layers, bases);
  const auto rows = evaluate_transfer(probes, ds, split.val);
  REQUIRE(rows.size() == table.rows.size());
  for (const auto& row : rows) {
    const auto* ref = table.find(row.base, row.layer);
    REQUIRE(ref != nullptr);
    CHECK(row.correct == ref->correct);
    CHECK(row.total == ref->total);
  }
}

TEST_CASE("probes transfer to a re-ordered dataset with fresh noise") {
  auto spec = noiseless_spec();
  spec.noise_sigma = 0.05;
  auto labels = label_range(0, 999);
  const auto ds = generate(spec, labels, 1);
  std::reverse(labels.begin(), labels.end());
  const auto other = generate(spec, labels, 1);
  const std::vector<int> bases = {10};
  const std::vector<std::size_t> layers = {0};
  const auto probes = train_probe_set(ds, all_items(1000), layers, bases);
  const auto rows = evaluate_transfer(probes, other);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].total == 1000);
  CHECK(rows[0].accuracy >= 0.99);
}

TEST_CASE("probe sets round-trip through JSON") {
  const auto ds = generate(noiseless_spec(), label_range(0, 999), 1);
  const std::vector<int> bases = {10, 1000};
  const std::vector<std::size_t> layers = {0};
  const auto probes = train_probe_set(ds, all_items(1000), layers, bases);
  const auto j = probe_set_to_json(probes);
  CHECK(j.at("format_version") == kProbeFormatVersion);
  const auto back = probe_set_from_json(nlohmann::json::parse(j.dump()));
  REQUIRE(back.size() == probes.size());
  for (std::size_t k = 0; k < probes.size(); ++k) {
    CHECK(back[k].base == probes[k].base);
    CHECK(back[k].digit_index == probes[k].digit_index);
    CHECK(back[k].weights == probes[k].weights);
    CHECK(back[k].center == probes[k].center);
    CHECK(back[k].offset == probes[k].offset);
  }
  auto bad = j;
  bad["format_version"] = 99;
  CHECK_THROWS_AS((void)probe_set_from_json(bad), FormatError);
}
