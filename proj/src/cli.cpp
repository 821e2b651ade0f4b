#include "digitwise/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "digitwise/erranal.hpp"
#include "digitwise/errors.hpp"
#include "digitwise/patchlab.hpp"
#include "digitwise/probekit.hpp"
#include "digitwise/repstore.hpp"
#include "digitwise/spectra.hpp"
#include "digitwise/svg.hpp"
#include "digitwise/synthmodel.hpp"

namespace digitwise::cli {

using nlohmann::json;

std::vector<long long> parse_int_list(const std::string& spec) {
  std::vector<long long> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) {
      continue;
    }
    try {
      const auto dots = part.find("..");
      std::size_t used = 0;
      if (dots == std::string::npos) {
        out.push_back(std::stoll(part, &used));
        if (used != part.size()) {
          throw std::invalid_argument(part);
        }
        continue;
      }
      const std::string lo_s = part.substr(0, dots);
      const std::string hi_s = part.substr(dots + 2);
      const long long lo = std::stoll(lo_s, &used);
      if (used != lo_s.size()) {
        throw std::invalid_argument(part);
      }
      const long long hi = std::stoll(hi_s, &used);
      if (used != hi_s.size() || hi < lo || hi - lo > 10'000'000) {
        throw std::invalid_argument(part);
      }
      for (long long v = lo; v <= hi; ++v) {
        out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad integer list element '" + part + "' in '" + spec + "'");
    }
  }
  if (out.empty()) {
    throw std::invalid_argument("empty integer list '" + spec + "'");
  }
  return out;
}

namespace {

constexpr const char* kDefaultBases = "2..14,1000,2000";

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw IoError("cannot write " + path);
  }
  f << content;
  if (!f) {
    throw IoError("write failed for " + path);
  }
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw IoError("cannot open " + path);
  }
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::vector<int> to_bases(const std::string& spec) {
  std::vector<int> out;
  for (auto v : parse_int_list(spec)) {
    if (v < 2 || v > 1'000'000) {
      throw std::invalid_argument("base " + std::to_string(v) + " out of range");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::size_t> to_layers(const std::string& spec, const RepresentationDataset& ds) {
  std::vector<std::size_t> out;
  if (spec == "all") {
    out.resize(ds.layers());
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  for (auto v : parse_int_list(spec)) {
    if (v < 0 || static_cast<std::size_t>(v) >= ds.layers()) {
      throw std::invalid_argument("layer " + std::to_string(v) + " out of range (dataset has " +
                                  std::to_string(ds.layers()) + ")");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// 0 requests the default 90/10 split of N (1800/200 for N = 2000).
SplitSpec split_spec(const RepresentationDataset& ds, std::uint64_t seed, std::size_t train, std::size_t val) {
  SplitSpec spec{seed, train, val};
  if (train == 0 && val == 0) {
    spec.val_count = ds.items() / 10;
    spec.train_count = ds.items() - spec.val_count;
  }
  return spec;
}

// Subcommand name plus every option's resolved value.
json resolved_options(const CLI::App* sub) {
  json options = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") {
      continue;
    }
    const std::string name = opt->get_lnames().front();
    if (opt->get_expected_min() == 0) {
      options[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      options[name] = opt->results().back();
    } else {
      options[name] = opt->get_default_str();
    }
  }
  return json{{"subcommand", sub->get_name()}, {"options", options}};
}

std::vector<std::string> replay_args(const json& config) {
  std::vector<std::string> args;
  try {
    args.push_back(config.at("subcommand").get<std::string>());
    for (const auto& [name, value] : config.at("options").items()) {
      if (value.is_boolean()) {
        if (value.get<bool>()) {
          args.push_back("--" + name);
        }
      } else {
        const auto s = value.get<std::string>();
        if (!s.empty()) {
          args.push_back("--" + name);
          args.push_back(s);
        }
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("config echo schema violation: ") + e.what());
  }
  return args;
}

void write_echo(const CLI::App* sub, const std::string& out_path) {
  write_text(out_path + ".config.json", resolved_options(sub).dump(2) + "\n");
}

struct SynthArgs {
  std::string out;
  std::uint64_t seed = 0;
  std::size_t dim = 256;
  int base = 10;
  int width = 3;
  double sigma = 0.05;
  std::size_t distractor_dim = 32;
  double distractor_sigma = 1.0;
  std::string signal_scales;
  std::size_t layers = 4;
  std::string labels = "0..999";
  std::string model_name = "synthetic";
};

struct ProbeArgs {
  std::string in;
  std::string out;
  std::string bases = kDefaultBases;
  std::string layers = "all";
  std::uint64_t seed = 0;
  std::size_t train = 0;
  std::size_t val = 0;
  bool no_center = false;
  double ridge = 1e-6;
  std::size_t min_layer = 3;
  bool linear_baseline = false;
};

struct TransferArgs {
  std::string probes;
  std::string in;
  std::string out;
};

struct PatchArgs {
  std::string probes;
  std::string out;
  std::size_t layer = 3;
  int digit = 0;
  Natural source = 0;
  double scale = kDefaultPatchScale;
  std::string in;
  std::string report;
};

struct QueryArgs {
  std::string task = "addition";
  std::size_t operands = 7;
  std::size_t count = 5000;
  std::uint64_t seed = 1;
  Natural max_sum = 1000;
  std::string out;
};

struct AnalyzeArgs {
  std::string task = "addition";
  std::string in;
  std::string out;
  std::string csv;
  std::string svg;
};

struct PcaArgs {
  std::string in;
  std::string out;
  std::size_t layer = 2;
  std::string labels;
  int group_digit = -1;
  int base = 10;
  std::string svg;
};

struct CalibrateArgs {
  std::string cmd;
  double lo = 1.0;
  double hi = 64.0;
  double tol = 0.5;
  std::string out;
};

ProbeOptions probe_options(const ProbeArgs& a) {
  ProbeOptions o;
  o.center = !a.no_center;
  o.ridge_factor = a.ridge;
  return o;
}

void run_synth(const SynthArgs& a, std::ostream& out) {
  SyntheticSpec spec;
  spec.hidden_dim = a.dim;
  spec.base = a.base;
  spec.width = a.width;
  spec.noise_sigma = a.sigma;
  spec.distractor_dim = a.distractor_dim;
  spec.distractor_sigma = a.distractor_sigma;
  spec.seed = a.seed;
  if (!a.signal_scales.empty()) {
    std::stringstream ss(a.signal_scales);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        spec.signal_scales.push_back(std::stod(part));
      } catch (const std::logic_error&) {
        throw std::invalid_argument("bad signal scale '" + part + "'");
      }
    }
  }
  std::vector<Natural> labels;
  for (auto v : parse_int_list(a.labels)) {
    if (v < 0) {
      throw std::invalid_argument("labels must be non-negative");
    }
    labels.push_back(static_cast<Natural>(v));
  }
  const auto ds = generate(spec, labels, a.layers, a.model_name);
  save_dataset(ds, a.out);
  out << "wrote " << a.out << ": L=" << ds.layers() << " N=" << ds.items() << " d=" << ds.dim() << '\n';
}

void run_train(const ProbeArgs& a, std::ostream& out) {
  const auto ds = load_dataset(a.in);
  const auto split = make_split(ds.items(), split_spec(ds, a.seed, a.train, a.val));
  const auto layers = to_layers(a.layers, ds);
  const auto bases = to_bases(a.bases);
  const auto probes = train_probe_set(ds, split.train, layers, bases, probe_options(a));
  write_text(a.out, probe_set_to_json(probes).dump() + "\n");
  out << "trained " << probes.size() << " probes on " << split.train.size() << " items -> " << a.out << '\n';
}

void run_eval(const ProbeArgs& a, std::ostream& out) {
  const auto ds = load_dataset(a.in);
  const auto split = make_split(ds.items(), split_spec(ds, a.seed, a.train, a.val));
  const auto layers = to_layers(a.layers, ds);
  const auto bases = to_bases(a.bases);
  SuiteOptions options;
  options.probe = probe_options(a);
  options.min_layer = a.min_layer;
  const auto table = evaluate_suite(ds, split, bases, layers, options);
  json j = to_json(table);
  j["train_count"] = split.train.size();
  j["val_count"] = split.val.size();
  out << to_text(table);
  if (a.linear_baseline) {
    json rows = json::array();
    out << "linear value probe:";
    for (auto layer : layers) {
      const auto probe = train_linear_probe(ds, split.train, layer, {LinearTargetKind::kValue, 10, 0},
                                            options.probe);
      const double acc = evaluate_linear(probe, ds, split.val);
      rows.push_back({{"layer", layer}, {"accuracy", acc}});
      out << " L" << layer << "=" << std::fixed << std::setprecision(3) << acc;
    }
    out << '\n';
    j["linear_value"] = rows;
  }
  write_text(a.out, j.dump(2) + "\n");
}

void run_transfer(const TransferArgs& a, std::ostream& out) {
  const auto probes = probe_set_from_json(read_json_file(a.probes));
  const auto ds = load_dataset(a.in);
  const auto rows = evaluate_transfer(probes, ds);
  json arr = json::array();
  out << std::fixed << std::setprecision(3);
  for (const auto& r : rows) {
    arr.push_back({{"base", r.base}, {"layer", r.layer}, {"correct", r.correct}, {"total", r.total},
                   {"accuracy", r.accuracy}});
    out << "base " << r.base << " layer " << r.layer << ": " << r.accuracy << " (" << r.correct << "/"
        << r.total << ")\n";
  }
  write_text(a.out, json{{"rows", arr}}.dump(2) + "\n");
}

void run_patch(const PatchArgs& a, std::ostream& out) {
  const auto probes = probe_set_from_json(read_json_file(a.probes));
  std::vector<CircularProbe> group;
  for (const auto& p : probes) {
    if (p.base == 10 && p.layer == a.layer) {
      group.push_back(p);
    }
  }
  const auto it = std::find_if(group.begin(), group.end(), [&](const auto& p) { return p.digit_index == a.digit; });
  if (it == group.end()) {
    throw std::invalid_argument("probe set has no base-10 probe for layer " + std::to_string(a.layer) +
                                " digit " + std::to_string(a.digit));
  }
  const auto patch = make_patch(*it, a.scale, a.source);
  write_text(a.out, to_json(patch).dump() + "\n");
  out << "wrote patch layer " << patch.layer << " digit " << patch.digit_index << " scale " << patch.scale
      << " -> " << a.out << '\n';
  if (a.in.empty()) {
    return;
  }

  // Apply to every item of a dataset and re-decode with the layer's probes.
  const auto ds = load_dataset(a.in);
  const auto labels = ds.numeric_labels();
  const int width = static_cast<int>(group.size());
  const Natural limit = *checked_pow(10, width);
  std::map<std::string, std::size_t> counts{{"exact", 0}, {"close", 0}, {"other", 0}};
  std::size_t boundary = 0;
  std::size_t total = 0;
  json source_json = nullptr;
  for (std::size_t item = 0; item < ds.items(); ++item) {
    if (labels[item] >= limit) {
      continue;
    }
    const auto patched = apply_patch(patch, ds.row(a.layer, item));
    const auto observed = reconstruct_number<double>(group, std::span<const double>(patched.data(), patched.size()));
    const auto outcome = classify_outcome(labels[item], a.digit, observed, width);
    ++counts[outcome_name(outcome.kind)];
    boundary += outcome.boundary ? 1 : 0;
    ++total;
    if (labels[item] == a.source) {
      const auto before = reconstruct_number<float>(group, ds.row(a.layer, item));
      source_json = {{"label", labels[item]}, {"decoded_before", before}, {"decoded_after", observed},
                     {"intended", outcome.intended}, {"outcome", outcome_name(outcome.kind)}};
      out << "source " << labels[item] << ": " << before << " -> " << observed << " (intended "
          << outcome.intended << ", " << outcome_name(outcome.kind) << ")\n";
    }
  }
  out << "items " << total << ": exact " << counts["exact"] << ", close " << counts["close"] << ", other "
      << counts["other"] << '\n';
  if (!a.report.empty()) {
    json r{{"items", total},          {"exact", counts["exact"]}, {"close", counts["close"]},
           {"other", counts["other"]}, {"boundary", boundary},     {"source", source_json},
           {"layer", a.layer},         {"digit_index", a.digit},   {"scale", a.scale}};
    write_text(a.report, r.dump(2) + "\n");
  }
}

void run_queries(const QueryArgs& a, std::ostream& out) {
  std::string lines;
  std::size_t n = 0;
  if (a.task == "addition") {
    for (const auto& q : gen_addition_queries(a.operands, a.count, a.seed, a.max_sum)) {
      lines += to_json(q).dump() + "\n";
      ++n;
    }
  } else if (a.task == "comparison") {
    for (const auto& q : gen_comparison_pairs()) {
      lines += to_json(q).dump() + "\n";
      ++n;
    }
  } else {
    throw std::invalid_argument("unknown task '" + a.task + "' (addition|comparison)");
  }
  write_text(a.out, lines);
  out << "wrote " << n << " " << a.task << " queries -> " << a.out << '\n';
}

void run_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const auto records = read_log_file(a.in);
  if (a.task == "addition") {
    const auto report = aggregate_addition(records);
    out << to_text(report);
    write_text(a.out, to_json(report).dump(2) + "\n");
    if (!a.csv.empty()) {
      write_text(a.csv, histogram_csv(report));
    }
    if (!a.svg.empty()) {
      std::vector<std::pair<std::string, double>> bars;
      for (const auto& [err, count] : report.histogram) {
        bars.emplace_back(std::to_string(err), static_cast<double>(count));
      }
      write_text(a.svg, svg::bar_chart(bars, "error distribution (predicted - correct)"));
    }
  } else if (a.task == "comparison") {
    const auto report = aggregate_comparison(records);
    out << to_text(report);
    write_text(a.out, to_json(report).dump(2) + "\n");
  } else {
    throw std::invalid_argument("unknown task '" + a.task + "' (addition|comparison)");
  }
}

void run_pca(const PcaArgs& a, std::ostream& out) {
  const auto ds = load_dataset(a.in);
  std::vector<std::size_t> items;
  if (!a.labels.empty()) {
    const auto wanted = parse_int_list(a.labels);
    const std::set<long long> keep(wanted.begin(), wanted.end());
    const auto labels = ds.numeric_labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (keep.count(static_cast<long long>(labels[i]))) {
        items.push_back(i);
      }
    }
    if (items.empty()) {
      throw DataError("no items match --labels " + a.labels);
    }
  }
  const auto projection = a.group_digit >= 0
                              ? group_average_by_digit(ds, a.layer, a.group_digit, a.base, items)
                              : pca_project(ds, a.layer, items);
  write_text(a.out, projection_csv(projection));
  if (!a.svg.empty()) {
    write_text(a.svg, projection_svg(projection, "layer " + std::to_string(a.layer) + " PCA"));
  }
  out << std::setprecision(6) << "points " << projection.points.size() << ", variance PC1 "
      << projection.component_variance[0] << ", PC2 " << projection.component_variance[1] << '\n';
}

void run_calibrate(const CalibrateArgs& a, std::ostream& out) {
  if (a.cmd.find("{scale}") == std::string::npos) {
    throw std::invalid_argument("--cmd must contain the {scale} placeholder");
  }
  json evaluations = json::array();
  auto is_numeric = [&](double scale) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", scale);
    std::string cmd = a.cmd;
    for (auto pos = cmd.find("{scale}"); pos != std::string::npos; pos = cmd.find("{scale}")) {
      cmd.replace(pos, 7, buf);
    }
    const int status = std::system(cmd.c_str());
    const bool ok = status == 0;
    evaluations.push_back({{"scale", scale}, {"numeric", ok}});
    return ok;
  };
  const double scale = calibrate_scale(is_numeric, a.lo, a.hi, a.tol);
  out << "calibrated scale " << scale << '\n';
  write_text(a.out, json{{"scale", scale}, {"lo", a.lo}, {"hi", a.hi}, {"tol", a.tol},
                         {"evaluations", evaluations}}.dump(2) + "\n");
}

void add_probe_flags(CLI::App* sub, ProbeArgs& a) {
  sub->add_option("--in", a.in, "NREP dataset")->required();
  sub->add_option("--out", a.out, "output path")->required();
  sub->add_option("--bases", a.bases, "bases, e.g. 2..14,1000,2000");
  sub->add_option("--layers", a.layers, "layers, e.g. 3..31, or all");
  sub->add_option("--seed", a.seed, "split seed");
  sub->add_option("--train", a.train, "train count (0 with --val 0: 90% of N)");
  sub->add_option("--val", a.val, "validation count (0 with --train 0: 10% of N)");
  sub->add_flag("--no-center", a.no_center, "do not center hidden vectors");
  sub->add_option("--ridge", a.ridge, "ridge factor relative to mean diagonal");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"digitwise: digit-wise circular probing toolkit", "digitwise"};
  app.option_defaults()->always_capture_default();
  std::string config_path;
  app.add_option("--config", config_path, "replay a <out>.config.json echo");
  app.require_subcommand(0, 1);

  SynthArgs synth;
  auto* s_synth = app.add_subcommand("synth", "generate a synthetic dataset with planted digit circles");
  s_synth->add_option("--out", synth.out, "output NREP path")->required();
  s_synth->add_option("--seed", synth.seed);
  s_synth->add_option("--dim", synth.dim);
  s_synth->add_option("--base", synth.base);
  s_synth->add_option("--width", synth.width);
  s_synth->add_option("--sigma", synth.sigma);
  s_synth->add_option("--distractor-dim", synth.distractor_dim);
  s_synth->add_option("--distractor-sigma", synth.distractor_sigma);
  s_synth->add_option("--signal-scales", synth.signal_scales, "comma-separated, one per digit");
  s_synth->add_option("--layers", synth.layers, "number of layers");
  s_synth->add_option("--labels", synth.labels);
  s_synth->add_option("--model-name", synth.model_name);

  ProbeArgs train;
  auto* s_train = app.add_subcommand("train-probes", "train circular probes and write a probe set");
  add_probe_flags(s_train, train);

  ProbeArgs eval;
  auto* s_eval = app.add_subcommand("eval-probes", "base sweep: all-digit validation accuracy table");
  add_probe_flags(s_eval, eval);
  s_eval->add_option("--min-layer", eval.min_layer, "first layer of the mean aggregate");
  s_eval->add_flag("--linear-baseline", eval.linear_baseline, "also score a linear value probe");

  TransferArgs transfer;
  auto* s_transfer = app.add_subcommand("transfer-eval", "apply trained probes to another dataset");
  s_transfer->add_option("--probes", transfer.probes)->required();
  s_transfer->add_option("--in", transfer.in)->required();
  s_transfer->add_option("--out", transfer.out)->required();

  PatchArgs patch;
  auto* s_patch = app.add_subcommand("patch", "build a +5 digit-flip patch from a probe");
  s_patch->add_option("--probes", patch.probes)->required();
  s_patch->add_option("--out", patch.out)->required();
  s_patch->add_option("--layer", patch.layer);
  s_patch->add_option("--digit", patch.digit, "digit index, 0 = units");
  s_patch->add_option("--source", patch.source, "source number recorded in the patch");
  s_patch->add_option("--scale", patch.scale);
  s_patch->add_option("--in", patch.in, "dataset to apply the patch to");
  s_patch->add_option("--report", patch.report, "outcome counts JSON (with --in)");

  QueryArgs queries;
  auto* s_queries = app.add_subcommand("gen-queries", "generate addition or comparison queries");
  s_queries->add_option("--task", queries.task, "addition|comparison");
  s_queries->add_option("--operands", queries.operands);
  s_queries->add_option("--count", queries.count);
  s_queries->add_option("--seed", queries.seed);
  s_queries->add_option("--max-sum", queries.max_sum);
  s_queries->add_option("--out", queries.out)->required();

  AnalyzeArgs analyze;
  auto* s_analyze = app.add_subcommand("analyze-errors", "error analysis over a JSONL answer log");
  s_analyze->add_option("--task", analyze.task, "addition|comparison");
  s_analyze->add_option("--in", analyze.in)->required();
  s_analyze->add_option("--out", analyze.out)->required();
  s_analyze->add_option("--csv", analyze.csv, "histogram CSV (addition)");
  s_analyze->add_option("--svg", analyze.svg, "histogram SVG (addition)");

  PcaArgs pca;
  auto* s_pca = app.add_subcommand("pca", "top-two principal component projection");
  s_pca->add_option("--in", pca.in)->required();
  s_pca->add_option("--out", pca.out, "CSV path")->required();
  s_pca->add_option("--layer", pca.layer);
  s_pca->add_option("--labels", pca.labels, "numeric label filter, e.g. 0..999");
  s_pca->add_option("--group-digit", pca.group_digit, "average groups sharing this digit (-1: off)");
  s_pca->add_option("--base", pca.base);
  s_pca->add_option("--svg", pca.svg);

  CalibrateArgs calibrate;
  auto* s_calibrate = app.add_subcommand("calibrate", "bisection for the largest numeric-preserving scale");
  s_calibrate->add_option("--cmd", calibrate.cmd, "shell command; {scale} is substituted, exit 0 = numeric")
      ->required();
  s_calibrate->add_option("--lo", calibrate.lo);
  s_calibrate->add_option("--hi", calibrate.hi);
  s_calibrate->add_option("--tol", calibrate.tol);
  s_calibrate->add_option("--out", calibrate.out)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (!config_path.empty()) {
      if (!app.get_subcommands().empty()) {
        err << "usage error: --config cannot be combined with a subcommand\n";
        return kExitUsage;
      }
      return run(replay_args(read_json_file(config_path)), out, err);
    }
    if (app.get_subcommands().empty()) {
      err << "usage error: a subcommand is required\n" << app.help();
      return kExitUsage;
    }
    const CLI::App* sub = app.get_subcommands().front();
    std::string echo_for;
    if (sub == s_synth) {
      run_synth(synth, out);
      echo_for = synth.out;
    } else if (sub == s_train) {
      run_train(train, out);
      echo_for = train.out;
    } else if (sub == s_eval) {
      run_eval(eval, out);
      echo_for = eval.out;
    } else if (sub == s_transfer) {
      run_transfer(transfer, out);
      echo_for = transfer.out;
    } else if (sub == s_patch) {
      run_patch(patch, out);
      echo_for = patch.out;
    } else if (sub == s_queries) {
      run_queries(queries, out);
      echo_for = queries.out;
    } else if (sub == s_analyze) {
      run_analyze(analyze, out);
      echo_for = analyze.out;
    } else if (sub == s_pca) {
      run_pca(pca, out);
      echo_for = pca.out;
    } else if (sub == s_calibrate) {
      run_calibrate(calibrate, out);
      echo_for = calibrate.out;
    }
    write_echo(sub, echo_for);
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace digitwise::cli
