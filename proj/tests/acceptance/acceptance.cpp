// Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "digitwise/cli.hpp"
#include "digitwise/erranal.hpp"
#include "digitwise/numeral.hpp"
#include "digitwise/patchlab.hpp"
#include "digitwise/probekit.hpp"
#include "digitwise/rng.hpp"
#include "digitwise/spectra.hpp"
#include "digitwise/synthmodel.hpp"
#include "jacobi.hpp"
#include "test_util.hpp"

using namespace digitwise;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;  // <= 0: untimed
  std::function<Verdict()> check;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << v;
  return os.str();
}

std::vector<std::size_t> iota_items(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

const std::vector<int> kSweepBases = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 1000, 2000};

Verdict numeral_round_trips() {
  std::size_t checked = 0;
  for (int base : kSweepBases) {
    const int width = digit_width(base, 0, 2000);
    for (Natural x = 0; x <= 2000; ++x) {
      if (from_digits(to_digits(x, base, width)) != x) {
        return {false, "from_digits(to_digits(" + std::to_string(x) + ")) in base " + std::to_string(base)};
      }
      ++checked;
    }
    for (int digit = 0; digit < base; ++digit) {
      const auto p = circle_map(static_cast<Natural>(digit), base);
      if (decode_angle(p, base) != digit) {
        return {false, "decode(circle(" + std::to_string(digit) + ")) in base " + std::to_string(base)};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " identities"};
}

SyntheticSpec default_spec(double sigma, int width) {
  SyntheticSpec spec;
  spec.width = width;
  spec.noise_sigma = sigma;
  spec.seed = 2024;
  return spec;
}

// Lowest base-10 accuracy and highest {3,7,11} accuracy over all layers.
struct Sweep {
  double planted_min = 1.0;
  double off_max = 0.0;
};

Sweep sweep(const RepresentationDataset& ds, const Split& split) {
  const std::vector<int> bases = {3, 7, 10, 11};
  const auto layers = iota_items(ds.layers());
  const auto table = evaluate_suite(ds, split, bases, layers, {.min_layer = 0});
  Sweep s;
  for (const auto& row : table.rows) {
    if (row.base == 10) {
      s.planted_min = std::min(s.planted_min, row.accuracy);
    } else {
      s.off_max = std::max(s.off_max, row.accuracy);
    }
  }
  return s;
}

Verdict probe_recovery() {
  // Width 3 holds only 1000 distinct labels, so the 1800/200 split runs on
  // 4-digit labels 1..2000; the 3-digit set uses the same 90/10 proportion.
  struct Setup {
    int width;
    Natural lo, hi;
    std::size_t train, val;
  };
  Verdict v;
  for (const Setup& s : {Setup{3, 0, 999, 900, 100}, Setup{4, 1, 2000, 1800, 200}}) {
    const auto labels = label_range(s.lo, s.hi);
    const auto split = make_split(labels.size(), {7, s.train, s.val});
    const auto noisy = sweep(generate(default_spec(0.05, s.width), labels, 4), split);
    const auto clean = sweep(generate(default_spec(0.0, s.width), labels, 4), split);
    const bool ok = noisy.planted_min >= 0.99 && noisy.off_max <= 0.30 && clean.planted_min == 1.0;
    v.pass = v.pass && ok;
    v.detail += "w" + std::to_string(s.width) + " " + std::to_string(s.train) + "/" + std::to_string(s.val) +
                ": base10 min " + fmt(noisy.planted_min, 3) + ", {3,7,11} max " + fmt(noisy.off_max, 3) +
                ", sigma=0 " + fmt(clean.planted_min, 3) + "; ";
  }
  return v;
}

Verdict baseline_separation() {
  const auto labels = label_range(1, 2000);
  const auto split = make_split(labels.size(), {7, 1800, 200});
  const auto ds = generate(default_spec(0.05, 4), labels, 4);
  Verdict v;
  for (std::size_t layer = 0; layer < ds.layers(); ++layer) {
    const std::vector<int> bases = {10};
    const std::vector<std::size_t> layers = {layer};
    const double circular = evaluate_suite(ds, split, bases, layers, {.min_layer = 0}).rows.at(0).accuracy;
    const auto linear = train_linear_probe(ds, split.train, layer, {LinearTargetKind::kValue, 10, 0});
    const double lin = evaluate_linear(linear, ds, split.val);
    v.pass = v.pass && circular - lin >= 0.30;
    v.detail += "L" + std::to_string(layer) + " " + fmt(circular, 3) + " vs " + fmt(lin, 3) + "; ";
  }
  return v;
}

struct PatchRates {
  double shift = 0;
  double others = 0;
};

PatchRates intervention_rates(double sigma, double scale) {
  const auto labels = label_range(0, 999);
  const auto ds = generate(default_spec(sigma, 3), labels, 1);
  const auto split = make_split(ds.items(), {7, 900, 100});
  const std::vector<std::size_t> layers = {0};
  const std::vector<int> bases = {10};
  const auto probes = train_probe_set(ds, split.train, layers, bases);
  std::size_t shifted = 0, kept = 0, total = 0, others_total = 0;
  for (int digit = 0; digit < 3; ++digit) {
    const auto patch = make_patch(probes[static_cast<std::size_t>(digit)], scale);
    for (std::size_t item = 0; item < ds.items(); ++item) {
      const auto row = ds.row(0, item);
      const Eigen::VectorXd patched = apply_patch(patch, row);
      const std::span<const double> view(patched.data(), static_cast<std::size_t>(patched.size()));
      for (int j = 0; j < 3; ++j) {
        const auto& probe = probes[static_cast<std::size_t>(j)];
        const int before = predict_digit(probe, row);
        const int after = predict_digit(probe, view);
        if (j == digit) {
          shifted += after == (before + 5) % 10 ? 1 : 0;
          ++total;
        } else {
          kept += after == before ? 1 : 0;
          ++others_total;
        }
      }
    }
  }
  return {static_cast<double>(shifted) / total, static_cast<double>(kept) / others_total};
}

Verdict intervention() {
  const auto noisy = intervention_rates(0.05, kDefaultPatchScale);
  const auto clean = intervention_rates(0.0, kDefaultPatchScale);
  const auto unit = intervention_rates(0.05, 1.0);
  const bool ok = noisy.shift >= 0.95 && clean.shift == 1.0 && clean.others == 1.0 && unit.others == 1.0;
  return {ok, "shift sigma=.05 " + fmt(noisy.shift) + ", sigma=0 " + fmt(clean.shift) +
                  "; non-target sigma=0 " + fmt(clean.others) + ", sigma=.05 a=1 " + fmt(unit.others) +
                  " (info: sigma=.05 a=19 " + fmt(noisy.others) + ")"};
}

// Intended result and classification computed from decimal strings.
std::string brute_force_class(Natural x, int i, Natural observed) {
  std::string s = std::to_string(x);
  s.insert(0, 3 - s.size(), '0');
  char& c = s[s.size() - 1 - static_cast<std::size_t>(i)];
  c = static_cast<char>('0' + (c - '0' + 5) % 10);
  const long long intended = std::stoll(s);
  const long long distance = std::llabs(static_cast<long long>(observed) - intended);
  long long step = 1;
  for (int k = 0; k < i; ++k) step *= 10;
  if (distance == 0) return "exact";
  return distance < step ? "close" : "other";
}

Verdict outcome_classifier() {
  const std::vector<std::tuple<Natural, Natural, std::string>> fixtures = {
      {325, 325, "exact"}, {326, 326, "close"}, {335, 335, "other"}};
  for (const auto& [_, observed, expected] : fixtures) {
    if (outcome_name(classify_outcome(375, 1, observed).kind) != expected) {
      return {false, "fixture 375 -> " + std::to_string(observed)};
    }
  }
  SplitMix64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Natural x = rng.bounded(1000);
    const int i = static_cast<int>(rng.bounded(3));
    const Natural intended = intended_result(x, i);
    // stay near the intended value so every class is exercised
    const long long offset = static_cast<long long>(rng.bounded(241)) - 120;
    const long long obs = std::max(0LL, static_cast<long long>(intended) + offset);
    const auto got = outcome_name(classify_outcome(x, i, static_cast<Natural>(obs)).kind);
    if (got != brute_force_class(x, i, static_cast<Natural>(obs))) {
      return {false, "random fixture " + std::to_string(x) + "," + std::to_string(i) + "," + std::to_string(obs)};
    }
  }
  return {true, "3 fixtures + 100 randomized"};
}

Verdict error_lemma() {
  std::size_t pairs = 0;
  for (Natural c = 0; c < 1000; ++c) {
    for (Natural p = 0; p < 1000; ++p) {
      if (c == p) continue;
      const auto e = classify_error(c, p, 3);
      if ((e.multiple_of >= 1) != (c % 10 == p % 10) || (e.multiple_of >= 2) != (c % 100 == p % 100)) {
        return {false, "(" + std::to_string(c) + ", " + std::to_string(p) + ")"};
      }
      ++pairs;
    }
  }
  return {true, std::to_string(pairs) + " pairs"};
}

Verdict comparison_generator() {
  std::map<DigitPosition, std::set<std::pair<Natural, Natural>>> pairs;
  for (const auto& q : gen_comparison_pairs()) {
    const std::string a = std::to_string(q.a + 1000).substr(1);
    const std::string b = std::to_string(q.b + 1000).substr(1);
    int differing = 0, where = -1;
    for (int k = 0; k < 3; ++k) {
      if (a[static_cast<std::size_t>(2 - k)] != b[static_cast<std::size_t>(2 - k)]) {
        ++differing;
        where = k;
      }
    }
    if (differing != 1 || where != static_cast<int>(q.position)) {
      return {false, "pair (" + a + ", " + b + ")"};
    }
    pairs[q.position].insert({q.a, q.b});
  }
  std::string detail;
  bool ok = pairs.size() == 3;
  for (const auto& [pos, set] : pairs) {
    ok = ok && set.size() == 4500;
    detail += std::string(position_name(pos)) + " " + std::to_string(set.size()) + " ";
  }
  return {ok, detail};
}

Verdict pca_circle() {
  const auto ds = generate(default_spec(0.05, 3), label_range(0, 999), 1);
  const auto grouped = group_average_by_digit(ds, 0, 1, 10);
  std::vector<double> digits;
  for (int k = 0; k < 10; ++k) digits.push_back(2.0 * std::numbers::pi * k / 10.0);
  const double rho = circular_rank_correlation(point_angles(grouped), digits);

  // Eigenvalue check on a small-d dataset where the brute-force solve is cheap.
  SyntheticSpec small = default_spec(0.05, 3);
  small.hidden_dim = 24;
  small.distractor_dim = 6;
  const auto sds = generate(small, label_range(0, 999), 1);
  const auto items = iota_items(sds.items());
  const Eigen::MatrixXd x = gather_rows(sds, 0, items);
  const auto proj = pca_samples(x, std::vector<std::string>(items.size(), ""));
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const auto eig =
      digitwise::testing::jacobi_eigenvalues(centered.transpose() * centered / static_cast<double>(x.rows() - 1));
  const double rel = std::max(std::abs(proj.component_variance[0] - eig[0]) / eig[0],
                              std::abs(proj.component_variance[1] - eig[1]) / eig[1]);
  return {rho >= 0.9 && rel <= 1e-6, "rank correlation " + fmt(rho) + ", eigenvalue rel. error " + std::to_string(rel)};
}

Verdict cli_determinism() {
  digitwise::testing::TempDir dir;
  const auto data = dir.file("d.nrep");
  const auto log = dir.file("log.jsonl");
  digitwise::testing::spit(log, R"({"query_id":"1","task":"addition","gold":833,"prediction":"633"})"
                                "\n"
                                R"({"query_id":"2","task":"addition","gold":833,"prediction":"833"})"
                                "\n");
  const auto clog = dir.file("clog.jsonl");
  digitwise::testing::spit(clog, R"({"query_id":"1","task":"comparison","gold":171,"prediction":"121","position":"tens"})"
                                 "\n");
  const std::vector<std::pair<std::vector<std::string>, std::string>> runs = {
      {{"synth", "--out", data, "--layers", "2", "--seed", "5"}, data},
      {{"train-probes", "--in", data, "--out", dir.file("p.json")}, dir.file("p.json")},
      {{"eval-probes", "--in", data, "--out", dir.file("t.json"), "--linear-baseline"}, dir.file("t.json")},
      {{"transfer-eval", "--probes", dir.file("p.json"), "--in", data, "--out", dir.file("x.json")},
       dir.file("x.json")},
      {{"patch", "--probes", dir.file("p.json"), "--out", dir.file("patch.json"), "--layer", "1", "--digit", "1",
        "--in", data, "--report", dir.file("r.json")},
       dir.file("patch.json")},
      {{"gen-queries", "--task", "addition", "--out", dir.file("q.jsonl")}, dir.file("q.jsonl")},
      {{"gen-queries", "--task", "comparison", "--out", dir.file("c.jsonl")}, dir.file("c.jsonl")},
      {{"analyze-errors", "--task", "addition", "--in", log, "--out", dir.file("e.json")}, dir.file("e.json")},
      {{"analyze-errors", "--task", "comparison", "--in", clog, "--out", dir.file("ce.json")}, dir.file("ce.json")},
      {{"pca", "--in", data, "--out", dir.file("pca.csv"), "--group-digit", "1", "--layer", "1"},
       dir.file("pca.csv")},
      {{"calibrate", "--cmd", "awk 'BEGIN{exit !({scale} < 19.4)}'", "--out",
        dir.file("cal.json")},
       dir.file("cal.json")},
  };
  std::ostringstream sink;
  for (const auto& [args, output] : runs) {
    if (cli::run(args, sink, sink) != 0) return {false, args[0] + " failed: " + sink.str()};
    const auto bytes = digitwise::testing::slurp(output);
    std::filesystem::remove(output);
    if (cli::run({"--config", output + ".config.json"}, sink, sink) != 0) return {false, args[0] + " replay failed"};
    if (digitwise::testing::slurp(output) != bytes) return {false, args[0] + " replay differs"};
  }
  return {true, std::to_string(runs.size()) + " runs replayed byte-identically"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"numeral round trips", 1.0, numeral_round_trips},
      {"probe recovery", 30.0, probe_recovery},
      {"baseline separation", 0.0, baseline_separation},
      {"intervention correctness", 10.0, intervention},
      {"outcome classifier", 0.0, outcome_classifier},
      {"error lemma brute force", 5.0, error_lemma},
      {"comparison generator", 0.0, comparison_generator},
      {"PCA circle", 0.0, pca_circle},
      {"CLI determinism", 0.0, cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      v.pass = false;
      v.detail += " [over " + fmt(c.time_limit_s, 0) + " s limit]";
    }
    failures += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS  " : "FAIL  ") << c.name << " (" << fmt(secs, 2) << " s): " << v.detail << '\n';
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
