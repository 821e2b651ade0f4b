#pragma once

// Hidden-representation dumps.
//
// On disk a dataset is two files:
//
//   <path>            NREP binary, all integers little-endian
//                       bytes 0..3   magic "NREP"
//                       bytes 4..7   u32 version (= 1)
//                       bytes 8..11  u32 L (layers)
//                       bytes 12..15 u32 N (items)
//                       bytes 16..19 u32 d (hidden dim)
//                     then L*N*d IEEE-754 binary32 values, layer-major,
//                     item-second, feature-last.
//   <path>.meta.json  {"hidden_dim", "labels", "model_name", "num_items",
//                      "num_layers", "position_policy"}
//
// Note the header is 20 bytes: the magic plus four u32 fields.
//
// Layer 0 is the first transformer block's output; embeddings are not stored.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "digitwise/numeral.hpp"

namespace digitwise {

inline constexpr std::uint32_t kNrepVersion = 1;
inline constexpr std::size_t kNrepHeaderBytes = 20;
inline constexpr const char* kLastTokenPolicy = "last-token";

// An item label: an integer or a raw string (word-form items).
struct Label {
  std::variant<Natural, std::string> value;

  Label() = default;
  Label(Natural n) : value(n) {}  // NOLINT(google-explicit-constructor)
  Label(std::string s) : value(std::move(s)) {}  // NOLINT(google-explicit-constructor)

  // Integer labels as-is; strings via parse_number_words.
  [[nodiscard]] std::optional<Natural> numeric() const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Label&, const Label&) = default;
};

struct DatasetMeta {
  std::string model_name;
  std::uint32_t num_layers = 0;
  std::uint32_t num_items = 0;
  std::uint32_t hidden_dim = 0;
  std::vector<Label> labels;
  std::string position_policy = kLastTokenPolicy;

  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

class RepresentationDataset {
 public:
  RepresentationDataset() = default;
  // Validates shape and label invariants; throws MetadataError.
  RepresentationDataset(DatasetMeta meta, std::vector<float> tensor);

  [[nodiscard]] const DatasetMeta& meta() const { return meta_; }
  [[nodiscard]] std::size_t layers() const { return meta_.num_layers; }
  [[nodiscard]] std::size_t items() const { return meta_.num_items; }
  [[nodiscard]] std::size_t dim() const { return meta_.hidden_dim; }
  [[nodiscard]] const std::vector<float>& tensor() const { return tensor_; }

  [[nodiscard]] std::span<const float> row(std::size_t layer, std::size_t item) const;

  // Numeric value of every label; throws MetadataError if any is missing.
  [[nodiscard]] std::vector<Natural> numeric_labels() const;

  friend bool operator==(const RepresentationDataset&, const RepresentationDataset&) = default;

 private:
  DatasetMeta meta_;
  std::vector<float> tensor_;
};

// Throws MetadataError when the meta/tensor pair violates an invariant.
void validate(const DatasetMeta& meta, std::size_t tensor_size);

[[nodiscard]] std::string sidecar_path(const std::string& path);

void save_dataset(const RepresentationDataset& ds, const std::string& path);
[[nodiscard]] RepresentationDataset load_dataset(const std::string& path);

struct SplitSpec {
  std::uint64_t seed = 0;
  std::size_t train_count = 1800;
  std::size_t val_count = 200;
};

struct Split {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> val;    // ascending
};

// Fisher-Yates shuffle of 0..N-1 driven by SplitMix64(seed): for i from N-1
// down to 1 swap positions i and bounded(i+1). The first train_count shuffled
// indices form the train side, the next val_count the validation side.
[[nodiscard]] Split make_split(std::size_t num_items, const SplitSpec& spec);

}  // namespace digitwise
