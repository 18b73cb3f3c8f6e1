// emocurate/taxonomy.hpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emocurate/error.hpp"

namespace emocurate {

// The fixed 11-emotion vocabulary. Enumerator values are the ordinals used for
// matrix layout, compound naming and tie-breaking.
enum class Emotion : std::uint8_t {
  Anger = 0,
  Disgust,
  Fear,
  Happiness,
  Neutral,
  Sadness,
  Surprise,
  Contempt,
  Anxiety,
  Helplessness,
  Disappointment,
};

inline constexpr std::size_t kNumEmotions = 11;

inline constexpr std::array<Emotion, kNumEmotions> kAllEmotions = {
    Emotion::Anger,    Emotion::Disgust,      Emotion::Fear,
    Emotion::Happiness, Emotion::Neutral,     Emotion::Sadness,
    Emotion::Surprise, Emotion::Contempt,     Emotion::Anxiety,
    Emotion::Helplessness, Emotion::Disappointment,
};

namespace detail {
inline constexpr std::array<std::string_view, kNumEmotions> kNames = {
    "Anger",    "Disgust",  "Fear",    "Happiness",    "Neutral",       "Sadness",
    "Surprise", "Contempt", "Anxiety", "Helplessness", "Disappointment",
};
inline constexpr std::array<std::string_view, kNumEmotions> kCodes = {
    "AN", "DI", "FE", "HA", "NE", "SA", "SU", "CO", "AX", "HL", "DS",
};

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}
}  // namespace detail

constexpr std::size_t ordinal(Emotion e) { return static_cast<std::size_t>(e); }
constexpr std::string_view name(Emotion e) { return detail::kNames[ordinal(e)]; }
constexpr std::string_view code(Emotion e) { return detail::kCodes[ordinal(e)]; }

inline Emotion emotion_from_ordinal(std::size_t k) {
  if (k >= kNumEmotions) throw InputError("emotion ordinal out of range: " + std::to_string(k));
  return static_cast<Emotion>(k);
}

/// Accepts a full name or a two-letter code, case-insensitively. Surrounding
/// whitespace is ignored.
inline Emotion parse_category(std::string_view text) {
  const std::string_view t = detail::trim(text);
  for (std::size_t k = 0; k < kNumEmotions; ++k) {
    if (detail::iequals(t, detail::kNames[k]) || detail::iequals(t, detail::kCodes[k])) {
      return static_cast<Emotion>(k);
    }
  }
  throw UnknownCategoryError(std::string(t));
}

// A set of emotions packed into the low 11 bits.
class EmotionSet {
 public:
  constexpr EmotionSet() = default;
  EmotionSet(std::initializer_list<Emotion> members) {
    for (Emotion e : members) insert(e);
  }

  void insert(Emotion e) { bits_ |= bit(e); }
  void erase(Emotion e) { bits_ &= static_cast<std::uint16_t>(~bit(e)); }
  bool contains(Emotion e) const { return (bits_ & bit(e)) != 0; }
  std::size_t size() const { return static_cast<std::size_t>(__builtin_popcount(bits_)); }
  bool empty() const { return bits_ == 0; }
  std::uint16_t bits() const { return bits_; }

  /// Members in ascending ordinal order.
  std::vector<Emotion> members() const {
    std::vector<Emotion> out;
    for (Emotion e : kAllEmotions)
      if (contains(e)) out.push_back(e);
    return out;
  }

  friend bool operator==(EmotionSet, EmotionSet) = default;

 private:
  static std::uint16_t bit(Emotion e) { return static_cast<std::uint16_t>(1u << ordinal(e)); }
  std::uint16_t bits_ = 0;
};

class CompoundSizeError : public InputError {
 public:
  explicit CompoundSizeError(std::size_t n)
      : InputError("compound category needs 2 or 3 members, got " + std::to_string(n)) {}
};

class NeutralInCompoundError : public InputError {
 public:
  NeutralInCompoundError() : InputError("Neutral cannot be part of a compound category") {}
};

/// A multi-label emotion category of 2 or 3 non-Neutral members.
class CompoundCategory {
 public:
  static constexpr std::size_t kMinMembers = 2;
  static constexpr std::size_t kMaxMembers = 3;

  explicit CompoundCategory(EmotionSet members) : members_(members) {
    if (members.size() < kMinMembers || members.size() > kMaxMembers)
      throw CompoundSizeError(members.size());
    if (members.contains(Emotion::Neutral)) throw NeutralInCompoundError();
  }

  EmotionSet member_set() const { return members_; }
  std::vector<Emotion> members() const { return members_.members(); }

  /// Member names in ascending ordinal order, joined by ",".
  std::string canonical_name() const {
    std::string out;
    for (Emotion e : members_.members()) {
      if (!out.empty()) out += ',';
      out += name(e);
    }
    return out;
  }

  friend bool operator==(const CompoundCategory&, const CompoundCategory&) = default;

  // Orders by the member list compared lexicographically on ordinals, which
  // keeps output maps in a stable, readable order.
  friend std::strong_ordering operator<=>(const CompoundCategory& a, const CompoundCategory& b) {
    const auto ma = a.members();
    const auto mb = b.members();
    return std::lexicographical_compare_three_way(
        ma.begin(), ma.end(), mb.begin(), mb.end(),
        [](Emotion x, Emotion y) { return ordinal(x) <=> ordinal(y); });
  }

 private:
  EmotionSet members_;
};

inline CompoundCategory canonical_compound(std::span<const Emotion> members) {
  EmotionSet set;
  for (Emotion e : members) {
    if (set.contains(e)) throw InputError("duplicate member in compound: " + std::string(name(e)));
    set.insert(e);
  }
  return CompoundCategory(set);
}

inline CompoundCategory canonical_compound(std::initializer_list<Emotion> members) {
  return canonical_compound(std::span<const Emotion>(members.begin(), members.size()));
}

/// Parses "Anger,Disgust" style names (whitespace around members allowed).
inline CompoundCategory parse_compound(std::string_view text) {
  std::vector<Emotion> members;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    members.push_back(parse_category(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return canonical_compound(members);
}

}  // namespace emocurate
