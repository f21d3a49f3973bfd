// Copyright 2026 The tabenc Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TABENC_CATEGORIC_HPP_
#define TABENC_CATEGORIC_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace tabenc {

enum class VocabOrder { kFrequency, kAlphabetic };

/// Category slots of one feature. Slot 0 is always reserved for
/// missing/unseen; real categories occupy slots 1..n-1 in fit order
/// (descending train frequency with lexicographic-ascending tie-break, or
/// plain lexicographic for the alphabetic variant).
struct Vocab {
  std::vector<std::string> categories;  // categories[i] occupies slot i+1

  size_t n_slots() const { return categories.size() + 1; }
  /// Slot of a value; 0 for missing or unseen.
  size_t slot_of(std::string_view value) const;
  /// Category at a slot in 1..n-1; throws on 0 or out of range.
  const std::string& category_at(size_t slot) const;

  void rebuild_index();  // must be called after mutating categories

 private:
  std::unordered_map<std::string, size_t> index_;
};

Vocab fit_vocab(const std::vector<std::string>& values,
                const std::vector<uint8_t>& missing, VocabOrder order);

enum class CategoricKind { kOnht, kB1010, kOrd3, kOrdl, kHsh2, kOr19 };

std::string categoric_kind_name(CategoricKind kind);
CategoricKind categoric_kind_from_name(const std::string& name);

/// ceil(log2(n)) column count of a binarization over n slots.
size_t binary_width(size_t n_slots);

constexpr uint64_t kDefaultHashCap = 64;
constexpr size_t kDefaultMinSubstring = 5;
constexpr size_t kDefaultMaxActivations = 16;

/// Substring activations plus numeric extraction of the parsed encoding.
struct ParseModel {
  std::vector<std::string> activations;  // contains-substring flags
  double extract_mean = 0;  // z-score moments of train digit extractions
  double extract_stddev = 0;
};

struct CategoricBasis {
  CategoricKind kind = CategoricKind::kB1010;
  Vocab vocab;            // absent (empty) for hsh2
  size_t width = 0;       // total output column count
  uint64_t hash_cap = 0;  // hsh2 only
  ParseModel parse;       // or19 only
};

size_t categoric_width(const CategoricBasis& basis);

/// FNV-1a 64-bit over the UTF-8 bytes; fixed reference constants keep the
/// value stable across processes and platforms.
uint64_t fnv1a64(std::string_view bytes);

CategoricBasis fit_categoric(CategoricKind kind,
                             const std::vector<std::string>& values,
                             const std::vector<uint8_t>& missing,
                             uint64_t hash_cap = kDefaultHashCap);

/// Parsed encoding: shared-substring activations, one digit-run extraction
/// column, and a residual binarization. Needs >= 2 unique train entries.
CategoricBasis fit_parsed(const std::vector<std::string>& values,
                          const std::vector<uint8_t>& missing,
                          size_t min_substring_len = kDefaultMinSubstring,
                          size_t max_activations = kDefaultMaxActivations);

/// Encodes one cell into `out[0 .. width)`. Missing is signalled by
/// `missing`; unseen categories encode like missing (slot 0 / all-zeros).
void encode_categoric(const CategoricBasis& basis, std::string_view value,
                      bool missing, double* out);
std::vector<double> encode_categoric(const CategoricBasis& basis,
                                     std::string_view value, bool missing);

// Single-encoder entry points matching the fit contracts above.
std::vector<double> encode_onehot(const CategoricBasis& basis,
                                  std::string_view value, bool missing);
std::vector<double> encode_binary(const CategoricBasis& basis,
                                  std::string_view value, bool missing);
size_t encode_ordinal(const CategoricBasis& basis, std::string_view value,
                      bool missing);
size_t encode_hashed(uint64_t hash_cap, std::string_view value, bool missing);

/// Exact category recovery; nullopt means the missing/unseen code. Throws
/// MalformedCodeError for invalid codewords and NotInvertibleError for
/// hashed encodings.
std::optional<std::string> invert_categoric(const CategoricBasis& basis,
                                            const double* encoded);

/// First maximal digit run of `text`, allowing one interior decimal point.
std::optional<double> extract_first_number(std::string_view text);

void to_json(nlohmann::json& j, const CategoricBasis& b);
void from_json(const nlohmann::json& j, CategoricBasis& b);

}  // namespace tabenc

#endif  // TABENC_CATEGORIC_HPP_
