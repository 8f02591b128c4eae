// Copyright 2026 The scriptpoker Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Template bank: bidirectional sentence templates with typed slots.
//
// A template such as "The minimum bet is {min:int}, maximum bet is {max:int}."
// renders from slot values and parses back into them. Every slot value is a
// list of strings; scalar slots use one item. Slot types:
//
//   text            raw text
//   int             decimal integer
//   count_word      integer written as an English word ("three")
//   count_word_cap  same, capitalised
//   letters_and     "H, D, and C"      ints_and / combos_and likewise
//   letters_comma   "H, D, C"          ints_comma / combos_comma likewise
//   sizes           "3+3"
//   flow_<style>    phase labels rendered through a flow phrase style

#ifndef SCRIPTPOKER_SRC_TEMPLATE_BANK_H_
#define SCRIPTPOKER_SRC_TEMPLATE_BANK_H_

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace scriptpoker::internal {

using SlotValues = std::map<std::string, std::vector<std::string>>;

class SentenceTemplate {
 public:
  SentenceTemplate(std::string id, std::string text);

  const std::string& id() const { return id_; }
  const std::string& text() const { return text_; }
  bool HasSlot(std::string_view name) const;

  // Returns nullopt when a slot value is missing or cannot be rendered.
  std::optional<std::string> Render(const SlotValues& values) const;

  // Returns the slot values when `sentence` is exactly a rendering of this
  // template.
  std::optional<SlotValues> Match(std::string_view sentence) const;

 private:
  struct Segment {
    bool is_slot = false;
    std::string literal;
    std::string name;
    std::string type;
  };

  std::string id_;
  std::string text_;
  std::vector<Segment> segments_;
  std::regex pattern_;
};

struct FlowStyle {
  bool include_start = false;
  std::string first_sep;
  std::string sep;
  std::string last_sep;
  std::map<std::string, std::string> phrases;  // phase kind name -> phrase
};

class TemplateBank {
 public:
  static const TemplateBank& Get();

  int version() const { return version_; }
  // Element ids in canonical order.
  const std::vector<std::string>& element_ids() const { return element_ids_; }
  const std::vector<SentenceTemplate>& element(const std::string& id) const;
  const std::vector<SentenceTemplate>& rules() const { return rules_; }
  const SentenceTemplate& rule(std::string_view id) const;
  const FlowStyle* flow_style(std::string_view name) const;

 private:
  TemplateBank();

  int version_ = 0;
  std::vector<std::string> element_ids_;
  std::map<std::string, std::vector<SentenceTemplate>> elements_;
  std::vector<SentenceTemplate> rules_;
  std::map<std::string, FlowStyle, std::less<>> flow_styles_;
};

std::string CountWord(long value);
std::optional<long> ParseCountWord(std::string_view word);

}  // namespace scriptpoker::internal

#endif  // SCRIPTPOKER_SRC_TEMPLATE_BANK_H_
