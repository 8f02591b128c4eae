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

#include "template_bank.h"

#include <cctype>
#include <stdexcept>

#include "json.hpp"
#include "template_bank_data.h"

namespace scriptpoker::internal {
namespace {

constexpr const char* kCountWords[] = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
    "twenty"};

std::string RegexEscape(std::string_view text) {
  static const std::string kSpecial = R"(\^$.|?*+()[]{}/)";
  std::string out;
  for (char c : text) {
    if (kSpecial.find(c) != std::string::npos) out += '\\';
    out += c;
  }
  return out;
}

bool IsDigits(std::string_view s) {
  if (s.empty() || s.size() > 12) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return !(s.size() > 1 && s.front() == '0');
}

std::vector<std::string> SplitOn(std::string_view text, std::string_view sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + sep.size();
  }
}

std::string JoinWith(const std::vector<std::string>& items,
                     std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

std::string JoinAnd(const std::vector<std::string>& items) {
  if (items.size() == 1) return items[0];
  if (items.size() == 2) return items[0] + " and " + items[1];
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    if (i + 1 == items.size()) out += "and ";
    out += items[i];
  }
  return out;
}

std::vector<std::string> SplitAnd(std::string_view text) {
  if (text.find(", ") != std::string_view::npos) {
    auto items = SplitOn(text, ", ");
    std::string& last = items.back();
    if (last.rfind("and ", 0) == 0) last = last.substr(4);
    return items;
  }
  if (text.find(" and ") != std::string_view::npos) return SplitOn(text, " and ");
  return {std::string(text)};
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// "deal2" -> ("deal", "2"); "bet" -> ("bet", "").
std::pair<std::string, std::string> SplitLabel(std::string_view label) {
  std::size_t i = 0;
  while (i < label.size() && std::isalpha(static_cast<unsigned char>(label[i]))) {
    ++i;
  }
  return {std::string(label.substr(0, i)), std::string(label.substr(i))};
}

std::string RenderPhrase(const std::string& phrase, const std::string& count) {
  std::string out = phrase;
  std::size_t pos = out.find("{x} cards");
  if (pos != std::string::npos) {
    out.replace(pos, 9, count == "1" ? "1 card" : count + " cards");
  }
  return out;
}

std::optional<std::string> RenderFlow(const FlowStyle& style,
                                      const std::vector<std::string>& labels) {
  std::vector<std::string> items;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [kind, count] = SplitLabel(labels[i]);
    if (i == 0) {
      if (kind != "start") return std::nullopt;
      if (!style.include_start) continue;
    }
    auto it = style.phrases.find(kind);
    if (it == style.phrases.end()) return std::nullopt;
    bool wants_count = it->second.find("{x}") != std::string::npos;
    if (wants_count != !count.empty()) return std::nullopt;
    items.push_back(RenderPhrase(it->second, count));
  }
  if (items.empty()) return std::nullopt;
  if (items.size() == 1) return items[0];
  std::string out = items[0];
  if (items.size() > 2) {
    out += style.first_sep;
    std::vector<std::string> middle(items.begin() + 1, items.end() - 1);
    out += JoinWith(middle, style.sep);
  }
  out += style.last_sep + items.back();
  return out;
}

std::optional<std::string> PhraseToLabel(const FlowStyle& style,
                                         const std::string& phrase) {
  for (const auto& [kind, pattern] : style.phrases) {
    std::size_t pos = pattern.find("{x} cards");
    if (pos == std::string::npos) {
      if (phrase == pattern) return kind;
      continue;
    }
    std::string re = RegexEscape(pattern.substr(0, pos)) + "(\\d+) cards?" +
                     RegexEscape(pattern.substr(pos + 9));
    std::smatch m;
    if (std::regex_match(phrase, m, std::regex(re)) && IsDigits(m[1].str())) {
      return kind + m[1].str();
    }
  }
  return std::nullopt;
}

std::optional<std::vector<std::string>> ParseFlow(const FlowStyle& style,
                                                  std::string_view text) {
  std::vector<std::string> phrases;
  std::size_t last = text.rfind(style.last_sep);
  if (last == std::string_view::npos) {
    phrases.emplace_back(text);
  } else {
    std::string_view head = text.substr(0, last);
    std::string tail(text.substr(last + style.last_sep.size()));
    std::size_t first = head.find(style.first_sep);
    if (first == std::string_view::npos) {
      phrases.emplace_back(head);
    } else {
      phrases.emplace_back(head.substr(0, first));
      auto rest = SplitOn(head.substr(first + style.first_sep.size()), style.sep);
      phrases.insert(phrases.end(), rest.begin(), rest.end());
    }
    phrases.push_back(std::move(tail));
  }
  std::vector<std::string> labels;
  if (!style.include_start) labels.push_back("start");
  for (const auto& p : phrases) {
    auto label = PhraseToLabel(style, p);
    if (!label) return std::nullopt;
    labels.push_back(*label);
  }
  return labels;
}

bool IsLetter(const std::string& s) {
  return s.size() == 1 && std::isupper(static_cast<unsigned char>(s[0]));
}

}  // namespace

std::string CountWord(long value) {
  if (value >= 0 && value <= 20) return kCountWords[value];
  return std::to_string(value);
}

std::optional<long> ParseCountWord(std::string_view word) {
  for (long i = 0; i <= 20; ++i) {
    std::string_view w = kCountWords[i];
    if (w.size() == word.size() &&
        std::equal(w.begin(), w.end(), word.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) ==
                 std::tolower(static_cast<unsigned char>(b));
        })) {
      return i;
    }
  }
  if (IsDigits(word)) return std::stol(std::string(word));
  return std::nullopt;
}

SentenceTemplate::SentenceTemplate(std::string id, std::string text)
    : id_(std::move(id)), text_(std::move(text)) {
  std::string re;
  std::size_t pos = 0;
  while (pos < text_.size()) {
    std::size_t open = text_.find('{', pos);
    if (open == std::string::npos) {
      segments_.push_back({false, text_.substr(pos), "", ""});
      re += RegexEscape(text_.substr(pos));
      break;
    }
    if (open > pos) {
      segments_.push_back({false, text_.substr(pos, open - pos), "", ""});
      re += RegexEscape(text_.substr(pos, open - pos));
    }
    std::size_t close = text_.find('}', open);
    if (close == std::string::npos) {
      throw std::logic_error("unterminated slot in template " + id_);
    }
    std::string slot = text_.substr(open + 1, close - open - 1);
    std::size_t colon = slot.find(':');
    if (colon == std::string::npos) {
      throw std::logic_error("untyped slot in template " + id_);
    }
    segments_.push_back({true, "", slot.substr(0, colon), slot.substr(colon + 1)});
    re += "(.+?)";
    pos = close + 1;
  }
  pattern_ = std::regex(re);
}

bool SentenceTemplate::HasSlot(std::string_view name) const {
  for (const auto& s : segments_) {
    if (s.is_slot && s.name == name) return true;
  }
  return false;
}

std::optional<std::string> SentenceTemplate::Render(
    const SlotValues& values) const {
  std::string out;
  for (const auto& seg : segments_) {
    if (!seg.is_slot) {
      out += seg.literal;
      continue;
    }
    auto it = values.find(seg.name);
    if (it == values.end() || it->second.empty()) return std::nullopt;
    const auto& items = it->second;
    const std::string& type = seg.type;
    if (type == "text") {
      if (items[0].empty()) return std::nullopt;
      out += items[0];
    } else if (type == "int") {
      if (!IsDigits(items[0])) return std::nullopt;
      out += items[0];
    } else if (type == "count_word" || type == "count_word_cap") {
      if (!IsDigits(items[0])) return std::nullopt;
      std::string word = CountWord(std::stol(items[0]));
      if (type == "count_word_cap") {
        word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
      }
      out += word;
    } else if (EndsWith(type, "_and")) {
      out += JoinAnd(items);
    } else if (EndsWith(type, "_comma")) {
      out += JoinWith(items, ", ");
    } else if (type == "sizes") {
      out += JoinWith(items, "+");
    } else if (type.rfind("flow_", 0) == 0) {
      const FlowStyle* style = TemplateBank::Get().flow_style(type.substr(5));
      if (style == nullptr) return std::nullopt;
      auto flow = RenderFlow(*style, items);
      if (!flow) return std::nullopt;
      out += *flow;
    } else {
      return std::nullopt;
    }
  }
  return out;
}

std::optional<SlotValues> SentenceTemplate::Match(
    std::string_view sentence) const {
  std::string s(sentence);
  std::smatch m;
  if (!std::regex_match(s, m, pattern_)) return std::nullopt;
  SlotValues values;
  int group = 1;
  for (const auto& seg : segments_) {
    if (!seg.is_slot) continue;
    std::string raw = m[group++].str();
    const std::string& type = seg.type;
    std::vector<std::string> items;
    if (type == "text") {
      items = {raw};
    } else if (type == "int") {
      if (!IsDigits(raw)) return std::nullopt;
      items = {raw};
    } else if (type == "count_word" || type == "count_word_cap") {
      auto n = ParseCountWord(raw);
      if (!n) return std::nullopt;
      items = {std::to_string(*n)};
    } else if (EndsWith(type, "_and") || EndsWith(type, "_comma")) {
      items = EndsWith(type, "_and") ? SplitAnd(raw) : SplitOn(raw, ", ");
      for (const auto& item : items) {
        if (item.empty()) return std::nullopt;
        if (type.rfind("letters", 0) == 0 && !IsLetter(item)) return std::nullopt;
        if (type.rfind("ints", 0) == 0 && !IsDigits(item)) return std::nullopt;
      }
    } else if (type == "sizes") {
      items = SplitOn(raw, "+");
      for (const auto& item : items) {
        if (!IsDigits(item)) return std::nullopt;
      }
    } else if (type.rfind("flow_", 0) == 0) {
      const FlowStyle* style = TemplateBank::Get().flow_style(type.substr(5));
      if (style == nullptr) return std::nullopt;
      auto labels = ParseFlow(*style, raw);
      if (!labels) return std::nullopt;
      items = std::move(*labels);
    } else {
      return std::nullopt;
    }
    auto [it, inserted] = values.emplace(seg.name, items);
    if (!inserted && it->second != items) return std::nullopt;
  }
  // Only canonical renderings count as matches.
  auto rendered = Render(values);
  if (!rendered || *rendered != sentence) return std::nullopt;
  return values;
}

const TemplateBank& TemplateBank::Get() {
  static const TemplateBank* bank = new TemplateBank();
  return *bank;
}

TemplateBank::TemplateBank() {
  auto json = nlohmann::json::parse(kTemplateBankJson);
  version_ = json.at("version").get<int>();
  // Flow styles first: element templates reference them when matching.
  for (const auto& [name, style_json] : json.at("flow_styles").items()) {
    FlowStyle style;
    style.include_start = style_json.at("include_start").get<bool>();
    style.first_sep = style_json.at("first_sep").get<std::string>();
    style.sep = style_json.at("sep").get<std::string>();
    style.last_sep = style_json.at("last_sep").get<std::string>();
    for (const auto& [kind, phrase] : style_json.at("phrases").items()) {
      style.phrases[kind] = phrase.get<std::string>();
    }
    flow_styles_.emplace(name, std::move(style));
  }
  for (const char* id : {"players", "suits", "card_rank", "hand_rank", "bets",
                         "flow"}) {
    element_ids_.emplace_back(id);
    auto& list = elements_[id];
    for (const auto& t : json.at("elements").at(id)) {
      list.emplace_back(t.at("id").get<std::string>(),
                        t.at("text").get<std::string>());
    }
  }
  for (const auto& t : json.at("rules")) {
    rules_.emplace_back(t.at("id").get<std::string>(),
                        t.at("text").get<std::string>());
  }
}

const std::vector<SentenceTemplate>& TemplateBank::element(
    const std::string& id) const {
  return elements_.at(id);
}

const SentenceTemplate& TemplateBank::rule(std::string_view id) const {
  for (const auto& r : rules_) {
    if (r.id() == id) return r;
  }
  throw std::logic_error("no rule template " + std::string(id));
}

const FlowStyle* TemplateBank::flow_style(std::string_view name) const {
  auto it = flow_styles_.find(name);
  return it == flow_styles_.end() ? nullptr : &it->second;
}

}  // namespace scriptpoker::internal
