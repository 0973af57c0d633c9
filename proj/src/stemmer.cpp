// Copyright 2026 The summpipe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Porter's 1980 suffix-stripping algorithm, as published. Each step picks
// the longest matching suffix first and only then consults the measure
// condition; a failed condition ends the step without trying shorter
// suffixes.

#include <array>
#include <string>
#include <string_view>

#include "summpipe/textproc.hpp"

namespace summpipe {

namespace {

class PorterState {
 public:
  explicit PorterState(std::string word) : b_(std::move(word)) {}

  std::string run() {
    if (b_.size() < 3) return b_;
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return b_;
  }

 private:
  bool is_consonant(std::size_t i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !is_consonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0..end).
  int measure(std::size_t end) const {
    int m = 0;
    std::size_t i = 0;
    while (i < end && is_consonant(i)) ++i;
    while (i < end) {
      while (i < end && !is_consonant(i)) ++i;
      if (i >= end) break;
      ++m;
      while (i < end && is_consonant(i)) ++i;
    }
    return m;
  }

  bool vowel_in(std::size_t end) const {
    for (std::size_t i = 0; i < end; ++i) {
      if (!is_consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant_at_end() const {
    std::size_t n = b_.size();
    return n >= 2 && b_[n - 1] == b_[n - 2] && is_consonant(n - 1);
  }

  // consonant-vowel-consonant ending at index i, last consonant not w/x/y
  bool cvc(std::size_t i) const {
    if (i < 2) return false;
    if (!is_consonant(i) || is_consonant(i - 1) || !is_consonant(i - 2)) {
      return false;
    }
    char c = b_[i];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view suffix) const {
    return b_.size() >= suffix.size() &&
           std::string_view(b_).substr(b_.size() - suffix.size()) == suffix;
  }

  std::size_t stem_len(std::string_view suffix) const {
    return b_.size() - suffix.size();
  }

  void replace(std::string_view suffix, std::string_view with) {
    b_.resize(b_.size() - suffix.size());
    b_.append(with);
  }

  void step1a() {
    if (ends("sses")) {
      replace("sses", "ss");
    } else if (ends("ies")) {
      replace("ies", "i");
    } else if (ends("ss")) {
      // keep
    } else if (ends("s")) {
      replace("s", "");
    }
  }

  void step1b() {
    if (ends("eed")) {
      if (measure(stem_len("eed")) > 0) replace("eed", "ee");
      return;
    }
    bool stripped = false;
    if (ends("ed") && vowel_in(stem_len("ed"))) {
      replace("ed", "");
      stripped = true;
    } else if (ends("ing") && vowel_in(stem_len("ing"))) {
      replace("ing", "");
      stripped = true;
    }
    if (!stripped) return;
    if (ends("at")) {
      replace("at", "ate");
    } else if (ends("bl")) {
      replace("bl", "ble");
    } else if (ends("iz")) {
      replace("iz", "ize");
    } else if (double_consonant_at_end()) {
      char c = b_.back();
      if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
    } else if (measure(b_.size()) == 1 && cvc(b_.size() - 1)) {
      b_.push_back('e');
    }
  }

  void step1c() {
    if (ends("y") && vowel_in(b_.size() - 1)) b_.back() = 'i';
  }

  struct Rule {
    std::string_view from;
    std::string_view to;
  };

  // Longest matching suffix wins; its condition decides, with no fallback.
  void apply_rules(const Rule* rules, std::size_t count, int min_measure) {
    const Rule* best = nullptr;
    for (std::size_t i = 0; i < count; ++i) {
      if (ends(rules[i].from) &&
          (best == nullptr || rules[i].from.size() > best->from.size())) {
        best = &rules[i];
      }
    }
    if (best == nullptr) return;
    if (measure(stem_len(best->from)) > min_measure) {
      replace(best->from, best->to);
    }
  }

  void step2() {
    static constexpr std::array<Rule, 20> rules = {{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},
    }};
    apply_rules(rules.data(), rules.size(), 0);
  }

  void step3() {
    static constexpr std::array<Rule, 7> rules = {{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_rules(rules.data(), rules.size(), 0);
  }

  void step4() {
    static constexpr std::array<Rule, 19> rules = {{
        {"al", ""},    {"ance", ""}, {"ence", ""}, {"er", ""},
        {"ic", ""},    {"able", ""}, {"ible", ""}, {"ant", ""},
        {"ement", ""}, {"ment", ""}, {"ent", ""},  {"ion", ""},
        {"ou", ""},    {"ism", ""},  {"ate", ""},  {"iti", ""},
        {"ous", ""},   {"ive", ""},  {"ize", ""},
    }};
    const Rule* best = nullptr;
    for (const Rule& rule : rules) {
      if (ends(rule.from) &&
          (best == nullptr || rule.from.size() > best->from.size())) {
        best = &rule;
      }
    }
    if (best == nullptr) return;
    std::size_t stem = stem_len(best->from);
    if (measure(stem) <= 1) return;
    if (best->from == "ion") {
      if (stem == 0 || (b_[stem - 1] != 's' && b_[stem - 1] != 't')) return;
    }
    replace(best->from, "");
  }

  void step5a() {
    if (b_.empty() || b_.back() != 'e') return;
    int m = measure(b_.size());
    if (m > 1 || (m == 1 && !cvc(b_.size() - 2))) b_.pop_back();
  }

  void step5b() {
    if (b_.size() >= 2 && b_.back() == 'l' && double_consonant_at_end() &&
        measure(b_.size()) > 1) {
      b_.pop_back();
    }
  }

  std::string b_;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  for (char c : word) {
    if (c < 'a' || c > 'z') return std::string(word);
  }
  return PorterState(std::string(word)).run();
}

}  // namespace summpipe
