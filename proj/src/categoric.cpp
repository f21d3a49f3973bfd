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

#include "tabenc/categoric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "tabenc/error.hpp"

namespace tabenc {

size_t Vocab::slot_of(std::string_view value) const {
  const auto it = index_.find(std::string(value));
  return it == index_.end() ? 0 : it->second;
}

const std::string& Vocab::category_at(size_t slot) const {
  if (slot == 0 || slot > categories.size())
    throw std::out_of_range("vocab slot out of range");
  return categories[slot - 1];
}

void Vocab::rebuild_index() {
  index_.clear();
  for (size_t i = 0; i < categories.size(); ++i)
    index_.emplace(categories[i], i + 1);
}

Vocab fit_vocab(const std::vector<std::string>& values,
                const std::vector<uint8_t>& missing, VocabOrder order) {
  std::unordered_map<std::string, size_t> counts;
  counts.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (i < missing.size() && missing[i]) continue;
    // An empty payload is the missing token itself (infilled cells keep
    // it), never a category.
    if (values[i].empty()) continue;
    ++counts[values[i]];
  }
  std::vector<std::pair<const std::string*, size_t>> entries;
  entries.reserve(counts.size());
  for (const auto& e : counts) entries.emplace_back(&e.first, e.second);
  if (order == VocabOrder::kFrequency) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return *a.first < *b.first;
              });
  } else {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return *a.first < *b.first; });
  }
  Vocab vocab;
  vocab.categories.reserve(entries.size());
  for (const auto& e : entries) vocab.categories.push_back(*e.first);
  vocab.rebuild_index();
  return vocab;
}

std::string categoric_kind_name(CategoricKind kind) {
  switch (kind) {
    case CategoricKind::kOnht: return "onht";
    case CategoricKind::kB1010: return "1010";
    case CategoricKind::kOrd3: return "ord3";
    case CategoricKind::kOrdl: return "ordl";
    case CategoricKind::kHsh2: return "hsh2";
    case CategoricKind::kOr19: return "or19";
  }
  throw Error("unreachable categoric kind");
}

CategoricKind categoric_kind_from_name(const std::string& name) {
  if (name == "onht") return CategoricKind::kOnht;
  if (name == "1010") return CategoricKind::kB1010;
  if (name == "ord3") return CategoricKind::kOrd3;
  if (name == "ordl") return CategoricKind::kOrdl;
  if (name == "hsh2") return CategoricKind::kHsh2;
  if (name == "or19") return CategoricKind::kOr19;
  throw Error("unknown categoric kind: " + name);
}

size_t binary_width(size_t n_slots) {
  if (n_slots <= 1) return 0;
  return static_cast<size_t>(std::bit_width(n_slots - 1));
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= static_cast<uint64_t>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

size_t categoric_width(const CategoricBasis& basis) { return basis.width; }

namespace {

size_t or19_width(const CategoricBasis& basis) {
  return basis.parse.activations.size() + 1 + binary_width(basis.vocab.n_slots());
}

}  // namespace

CategoricBasis fit_categoric(CategoricKind kind,
                             const std::vector<std::string>& values,
                             const std::vector<uint8_t>& missing,
                             uint64_t hash_cap) {
  CategoricBasis basis;
  basis.kind = kind;
  switch (kind) {
    case CategoricKind::kOnht:
      basis.vocab = fit_vocab(values, missing, VocabOrder::kFrequency);
      basis.width = basis.vocab.n_slots() - 1;
      break;
    case CategoricKind::kB1010:
      basis.vocab = fit_vocab(values, missing, VocabOrder::kFrequency);
      basis.width = binary_width(basis.vocab.n_slots());
      break;
    case CategoricKind::kOrd3:
      basis.vocab = fit_vocab(values, missing, VocabOrder::kFrequency);
      basis.width = 1;
      break;
    case CategoricKind::kOrdl:
      basis.vocab = fit_vocab(values, missing, VocabOrder::kAlphabetic);
      basis.width = 1;
      break;
    case CategoricKind::kHsh2:
      if (hash_cap < 2)
        throw std::invalid_argument("hash cap must be at least 2");
      basis.hash_cap = hash_cap;
      basis.width = 1;
      break;
    case CategoricKind::kOr19:
      return fit_parsed(values, missing);
  }
  return basis;
}

CategoricBasis fit_parsed(const std::vector<std::string>& values,
                          const std::vector<uint8_t>& missing,
                          size_t min_substring_len, size_t max_activations) {
  CategoricBasis basis;
  basis.kind = CategoricKind::kOr19;
  basis.vocab = fit_vocab(values, missing, VocabOrder::kFrequency);
  const auto& cats = basis.vocab.categories;
  if (cats.size() < 2)
    throw std::invalid_argument("parsed encoding needs at least 2 unique entries");

  // Candidate substrings shared by >= 2 unique categories, gathered per
  // length tier from the longest category down to the minimum length.
  struct Candidate {
    std::string text;
    size_t covered;
  };
  std::map<std::string, std::set<size_t>> coverage;
  size_t longest = 0;
  for (const auto& c : cats) longest = std::max(longest, c.size());
  const size_t min_len = std::max<size_t>(min_substring_len, 1);
  for (size_t len = longest; len >= min_len; --len) {
    for (size_t ci = 0; ci < cats.size(); ++ci) {
      const std::string& cat = cats[ci];
      if (cat.size() < len) continue;
      for (size_t pos = 0; pos + len <= cat.size(); ++pos)
        coverage[cat.substr(pos, len)].insert(ci);
    }
  }

  std::vector<Candidate> candidates;
  for (const auto& [text, covered] : coverage) {
    if (covered.size() >= 2) candidates.push_back({text, covered.size()});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.covered != b.covered) return a.covered > b.covered;
              if (a.text.size() != b.text.size())
                return a.text.size() > b.text.size();
              return a.text < b.text;
            });

  // A shorter substring of an accepted activation that flags the same
  // categories adds no information; drop it.
  for (const auto& cand : candidates) {
    if (basis.parse.activations.size() >= max_activations) break;
    bool redundant = false;
    for (const auto& acc : basis.parse.activations) {
      if (acc.find(cand.text) == std::string::npos) continue;
      if (coverage[acc] == coverage[cand.text]) {
        redundant = true;
        break;
      }
    }
    if (!redundant) basis.parse.activations.push_back(cand.text);
  }

  // Moments of the train digit extractions for the numeric column.
  std::vector<double> extracted;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i < missing.size() && missing[i]) continue;
    if (auto v = extract_first_number(values[i])) extracted.push_back(*v);
  }
  if (!extracted.empty()) {
    double sum = 0;
    for (double v : extracted) sum += v;
    basis.parse.extract_mean = sum / static_cast<double>(extracted.size());
    double ss = 0;
    for (double v : extracted) {
      const double d = v - basis.parse.extract_mean;
      ss += d * d;
    }
    basis.parse.extract_stddev =
        std::sqrt(ss / static_cast<double>(extracted.size()));
  }

  basis.width = or19_width(basis);
  return basis;
}

std::optional<double> extract_first_number(std::string_view text) {
  size_t i = 0;
  while (i < text.size() && !(text[i] >= '0' && text[i] <= '9')) ++i;
  if (i == text.size()) return std::nullopt;
  const size_t start = i;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  // One interior decimal point, only when digits follow it.
  if (i + 1 < text.size() && text[i] == '.' && text[i + 1] >= '0' &&
      text[i + 1] <= '9') {
    ++i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  }
  const std::string token(text.substr(start, i - start));
  return std::stod(token);
}

namespace {

void write_binary_code(size_t slot, size_t width, double* out) {
  for (size_t j = 0; j < width; ++j) {
    const size_t bit = width - 1 - j;  // big-endian across the columns
    out[j] = (slot >> bit) & 1 ? 1.0 : 0.0;
  }
}

}  // namespace

void encode_categoric(const CategoricBasis& basis, std::string_view value,
                      bool missing, double* out) {
  // Empty payloads carry the missing token (infilled cells keep them), so
  // they must land on slot 0 for every kind, hsh2 included.
  if (value.empty()) missing = true;
  switch (basis.kind) {
    case CategoricKind::kOnht: {
      const size_t slot = missing ? 0 : basis.vocab.slot_of(value);
      for (size_t j = 0; j < basis.width; ++j) out[j] = 0.0;
      if (slot > 0) out[slot - 1] = 1.0;
      break;
    }
    case CategoricKind::kB1010: {
      const size_t slot = missing ? 0 : basis.vocab.slot_of(value);
      write_binary_code(slot, basis.width, out);
      break;
    }
    case CategoricKind::kOrd3:
    case CategoricKind::kOrdl: {
      out[0] = missing ? 0.0
                       : static_cast<double>(basis.vocab.slot_of(value));
      break;
    }
    case CategoricKind::kHsh2: {
      out[0] = static_cast<double>(
          encode_hashed(basis.hash_cap, value, missing));
      break;
    }
    case CategoricKind::kOr19: {
      size_t j = 0;
      for (const auto& sub : basis.parse.activations) {
        out[j++] = (!missing && value.find(sub) != std::string_view::npos)
                       ? 1.0
                       : 0.0;
      }
      // Digit extraction, z-scored on the train extractions; cells without
      // digits sit at the neutral 0.
      double ext = 0.0;
      if (!missing) {
        if (auto v = extract_first_number(value)) {
          ext = basis.parse.extract_stddev > 0
                    ? (*v - basis.parse.extract_mean) /
                          basis.parse.extract_stddev
                    : 0.0;
        }
      }
      out[j++] = ext;
      const size_t slot = missing ? 0 : basis.vocab.slot_of(value);
      write_binary_code(slot, binary_width(basis.vocab.n_slots()), out + j);
      break;
    }
  }
}

std::vector<double> encode_categoric(const CategoricBasis& basis,
                                     std::string_view value, bool missing) {
  std::vector<double> out(basis.width);
  encode_categoric(basis, value, missing, out.data());
  return out;
}

std::vector<double> encode_onehot(const CategoricBasis& basis,
                                  std::string_view value, bool missing) {
  if (basis.kind != CategoricKind::kOnht)
    throw std::invalid_argument("basis kind is not onht");
  return encode_categoric(basis, value, missing);
}

std::vector<double> encode_binary(const CategoricBasis& basis,
                                  std::string_view value, bool missing) {
  if (basis.kind != CategoricKind::kB1010)
    throw std::invalid_argument("basis kind is not 1010");
  return encode_categoric(basis, value, missing);
}

size_t encode_ordinal(const CategoricBasis& basis, std::string_view value,
                      bool missing) {
  if (basis.kind != CategoricKind::kOrd3 &&
      basis.kind != CategoricKind::kOrdl)
    throw std::invalid_argument("basis kind is not ordinal");
  return missing ? 0 : basis.vocab.slot_of(value);
}

size_t encode_hashed(uint64_t hash_cap, std::string_view value,
                     bool missing) {
  if (hash_cap < 2) throw std::invalid_argument("hash cap must be at least 2");
  if (missing) return 0;  // reserved, never hashed
  return static_cast<size_t>(fnv1a64(value) % hash_cap);
}

namespace {

size_t decode_slot_from_code(const double* encoded, size_t width) {
  size_t slot = 0;
  for (size_t j = 0; j < width; ++j) {
    const double v = encoded[j];
    if (std::fabs(v) > 1e-9 && std::fabs(v - 1.0) > 1e-9)
      throw MalformedCodeError("binary code cell is not 0/1");
    slot = (slot << 1) | (std::fabs(v - 1.0) < 1e-9 ? 1 : 0);
  }
  return slot;
}

size_t decode_ordinal(const double* encoded) {
  const double v = encoded[0];
  const double r = std::round(v);
  if (std::fabs(v - r) > 1e-9 || r < 0)
    throw MalformedCodeError("ordinal code is not a non-negative integer");
  return static_cast<size_t>(r);
}

}  // namespace

std::optional<std::string> invert_categoric(const CategoricBasis& basis,
                                            const double* encoded) {
  switch (basis.kind) {
    case CategoricKind::kOnht: {
      size_t active = 0, slot = 0;
      for (size_t j = 0; j < basis.width; ++j) {
        const double v = encoded[j];
        if (std::fabs(v - 1.0) < 1e-9) {
          ++active;
          slot = j + 1;
        } else if (std::fabs(v) > 1e-9) {
          throw MalformedCodeError("one-hot cell is not 0/1");
        }
      }
      if (active > 1)
        throw MalformedCodeError("one-hot code with multiple activations");
      if (active == 0) return std::nullopt;
      return basis.vocab.category_at(slot);
    }
    case CategoricKind::kB1010: {
      const size_t slot = decode_slot_from_code(encoded, basis.width);
      if (slot == 0) return std::nullopt;
      if (slot >= basis.vocab.n_slots())
        throw MalformedCodeError("binary code beyond the vocabulary");
      return basis.vocab.category_at(slot);
    }
    case CategoricKind::kOrd3:
    case CategoricKind::kOrdl: {
      const size_t slot = decode_ordinal(encoded);
      if (slot == 0) return std::nullopt;
      if (slot >= basis.vocab.n_slots())
        throw MalformedCodeError("ordinal code beyond the vocabulary");
      return basis.vocab.category_at(slot);
    }
    case CategoricKind::kHsh2:
      throw NotInvertibleError("hashed encoding is not injective");
    case CategoricKind::kOr19: {
      // Only the residual binarization identifies the entry.
      const size_t offset = basis.parse.activations.size() + 1;
      const size_t bw = binary_width(basis.vocab.n_slots());
      const size_t slot = decode_slot_from_code(encoded + offset, bw);
      if (slot == 0) return std::nullopt;
      if (slot >= basis.vocab.n_slots())
        throw MalformedCodeError("binary code beyond the vocabulary");
      return basis.vocab.category_at(slot);
    }
  }
  throw Error("unreachable categoric kind");
}

void to_json(nlohmann::json& j, const CategoricBasis& b) {
  j = nlohmann::json{{"kind", categoric_kind_name(b.kind)},
                     {"categories", b.vocab.categories},
                     {"width", b.width},
                     {"hash_cap", b.hash_cap},
                     {"activations", b.parse.activations},
                     {"extract_mean", b.parse.extract_mean},
                     {"extract_stddev", b.parse.extract_stddev}};
}

void from_json(const nlohmann::json& j, CategoricBasis& b) {
  b.kind = categoric_kind_from_name(j.at("kind").get<std::string>());
  j.at("categories").get_to(b.vocab.categories);
  b.vocab.rebuild_index();
  j.at("width").get_to(b.width);
  j.at("hash_cap").get_to(b.hash_cap);
  j.at("activations").get_to(b.parse.activations);
  j.at("extract_mean").get_to(b.parse.extract_mean);
  j.at("extract_stddev").get_to(b.parse.extract_stddev);
}

}  // namespace tabenc
