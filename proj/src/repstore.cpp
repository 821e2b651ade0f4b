#include "digitwise/repstore.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "digitwise/errors.hpp"
#include "digitwise/rng.hpp"

namespace digitwise {

using nlohmann::json;

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) {
    out.push_back(static_cast<char>((v >> (8 * k)) & 0xFFu));
  }
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

json meta_to_json(const DatasetMeta& meta) {
  json labels = json::array();
  for (const auto& label : meta.labels) {
    if (const auto* n = std::get_if<Natural>(&label.value)) {
      labels.push_back(*n);
    } else {
      labels.push_back(std::get<std::string>(label.value));
    }
  }
  return json{{"model_name", meta.model_name},     {"num_layers", meta.num_layers},
              {"num_items", meta.num_items},       {"hidden_dim", meta.hidden_dim},
              {"labels", labels},                  {"position_policy", meta.position_policy}};
}

DatasetMeta meta_from_json(const json& j) {
  DatasetMeta meta;
  try {
    meta.model_name = j.at("model_name").get<std::string>();
    meta.num_layers = j.at("num_layers").get<std::uint32_t>();
    meta.num_items = j.at("num_items").get<std::uint32_t>();
    meta.hidden_dim = j.at("hidden_dim").get<std::uint32_t>();
    meta.position_policy = j.at("position_policy").get<std::string>();
    for (const auto& label : j.at("labels")) {
      if (label.is_number_unsigned()) {
        meta.labels.emplace_back(label.get<Natural>());
      } else if (label.is_string()) {
        meta.labels.emplace_back(label.get<std::string>());
      } else {
        throw MetadataError("labels must be non-negative integers or strings");
      }
    }
  } catch (const json::exception& e) {
    throw MetadataError(std::string("metadata schema violation: ") + e.what());
  }
  return meta;
}

}  // namespace

std::optional<Natural> Label::numeric() const {
  if (const auto* n = std::get_if<Natural>(&value)) {
    return *n;
  }
  return parse_number_words(std::get<std::string>(value));
}

std::string Label::to_string() const {
  if (const auto* n = std::get_if<Natural>(&value)) {
    return std::to_string(*n);
  }
  return std::get<std::string>(value);
}

void validate(const DatasetMeta& meta, std::size_t tensor_size) {
  if (meta.num_layers < 1 || meta.num_items < 1 || meta.hidden_dim < 1) {
    throw MetadataError("dataset dimensions must all be >= 1");
  }
  const auto expected = static_cast<std::size_t>(meta.num_layers) * meta.num_items * meta.hidden_dim;
  if (tensor_size != expected) {
    throw MetadataError("tensor holds " + std::to_string(tensor_size) + " values, shape needs " +
                        std::to_string(expected));
  }
  if (meta.labels.size() != meta.num_items) {
    throw MetadataError("labels count " + std::to_string(meta.labels.size()) +
                        " does not match num_items " + std::to_string(meta.num_items));
  }
  if (meta.position_policy != kLastTokenPolicy) {
    throw MetadataError("unsupported position_policy '" + meta.position_policy + "'");
  }
  std::set<std::pair<int, std::string>> seen;
  for (const auto& label : meta.labels) {
    const auto key = std::make_pair(static_cast<int>(label.value.index()), label.to_string());
    if (!seen.insert(key).second) {
      throw MetadataError("duplicate label " + label.to_string());
    }
  }
}

RepresentationDataset::RepresentationDataset(DatasetMeta meta, std::vector<float> tensor)
    : meta_(std::move(meta)), tensor_(std::move(tensor)) {
  validate(meta_, tensor_.size());
}

std::span<const float> RepresentationDataset::row(std::size_t layer, std::size_t item) const {
  const std::size_t d = dim();
  return {tensor_.data() + (layer * items() + item) * d, d};
}

std::vector<Natural> RepresentationDataset::numeric_labels() const {
  std::vector<Natural> out;
  out.reserve(meta_.labels.size());
  for (const auto& label : meta_.labels) {
    const auto v = label.numeric();
    if (!v) {
      throw MetadataError("label '" + label.to_string() + "' has no numeric value");
    }
    out.push_back(*v);
  }
  return out;
}

std::string sidecar_path(const std::string& path) { return path + ".meta.json"; }

void save_dataset(const RepresentationDataset& ds, const std::string& path) {
  const auto& meta = ds.meta();
  validate(meta, ds.tensor().size());
  std::string bytes;
  bytes.reserve(kNrepHeaderBytes + ds.tensor().size() * 4);
  bytes.append("NREP", 4);
  put_u32(bytes, kNrepVersion);
  put_u32(bytes, meta.num_layers);
  put_u32(bytes, meta.num_items);
  put_u32(bytes, meta.hidden_dim);
  for (float f : ds.tensor()) {
    put_u32(bytes, std::bit_cast<std::uint32_t>(f));
  }
  write_file(path, bytes);
  write_file(sidecar_path(path), meta_to_json(meta).dump(2) + "\n");
}

RepresentationDataset load_dataset(const std::string& path) {
  const std::string bytes = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() >= 4 && std::memcmp(p, "NREP", 4) != 0) {
    throw FormatError(path + ": bad magic, not an NREP file");
  }
  if (bytes.size() < kNrepHeaderBytes) {
    throw TruncationError(path + ": header truncated");
  }
  if (get_u32(p + 4) != kNrepVersion) {
    throw FormatError(path + ": unsupported NREP version " + std::to_string(get_u32(p + 4)));
  }
  const std::uint32_t layers = get_u32(p + 8);
  const std::uint32_t items = get_u32(p + 12);
  const std::uint32_t dim = get_u32(p + 16);
  const std::size_t count = static_cast<std::size_t>(layers) * items * dim;
  const std::size_t payload = bytes.size() - kNrepHeaderBytes;
  if (payload < count * 4) {
    throw TruncationError(path + ": payload has " + std::to_string(payload) + " bytes, expected " +
                          std::to_string(count * 4));
  }
  if (payload > count * 4) {
    throw FormatError(path + ": " + std::to_string(payload - count * 4) + " trailing bytes");
  }

  json j;
  try {
    j = json::parse(read_file(sidecar_path(path)));
  } catch (const json::parse_error& e) {
    throw FormatError(sidecar_path(path) + ": " + e.what());
  }
  DatasetMeta meta = meta_from_json(j);
  if (meta.num_layers != layers || meta.num_items != items || meta.hidden_dim != dim) {
    throw MetadataError(path + ": metadata shape disagrees with binary header");
  }

  std::vector<float> tensor(count);
  const unsigned char* data = p + kNrepHeaderBytes;
  for (std::size_t k = 0; k < count; ++k) {
    tensor[k] = std::bit_cast<float>(get_u32(data + 4 * k));
  }
  return {std::move(meta), std::move(tensor)};
}

Split make_split(std::size_t num_items, const SplitSpec& spec) {
  if (spec.train_count + spec.val_count > num_items) {
    throw std::invalid_argument("split " + std::to_string(spec.train_count) + "+" +
                                std::to_string(spec.val_count) + " exceeds " +
                                std::to_string(num_items) + " items");
  }
  std::vector<std::size_t> perm(num_items);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  SplitMix64 rng(spec.seed);
  for (std::size_t i = num_items; i-- > 1;) {
    std::swap(perm[i], perm[rng.bounded(i + 1)]);
  }
  Split split;
  split.train.assign(perm.begin(), perm.begin() + static_cast<long>(spec.train_count));
  split.val.assign(perm.begin() + static_cast<long>(spec.train_count),
                   perm.begin() + static_cast<long>(spec.train_count + spec.val_count));
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  return split;
}

}  // namespace digitwise
