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

#ifndef SCRIPTPOKER_ERRORS_H_
#define SCRIPTPOKER_ERRORS_H_

#include <stdexcept>
#include <string>

namespace scriptpoker {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A draw asked for more cards than remain in the deck.
class DeckExhausted : public Error {
 public:
  DeckExhausted(std::size_t requested, std::size_t available)
      : Error("deck exhausted: requested " + std::to_string(requested) +
              " card(s), " + std::to_string(available) + " left"),
        requested_(requested),
        available_(available) {}
  std::size_t requested() const { return requested_; }
  std::size_t available() const { return available_; }

 private:
  std::size_t requested_;
  std::size_t available_;
};

// Malformed line in a game script. Line numbers are 1-based.
class ScriptSyntaxError : public Error {
 public:
  ScriptSyntaxError(int line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class UnknownPredicate : public Error {
 public:
  explicit UnknownPredicate(const std::string& sentence)
      : Error("unknown specific rule: " + sentence), sentence_(sentence) {}
  const std::string& sentence() const { return sentence_; }

 private:
  std::string sentence_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnrecognizedTemplate : public Error {
 public:
  explicit UnrecognizedTemplate(const std::string& text)
      : Error("unrecognized sentence: " + text), text_(text) {}
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

class InsufficientCards : public Error {
 public:
  using Error::Error;
};

class IllegalAction : public Error {
 public:
  using Error::Error;
};

class UnknownPlayer : public Error {
 public:
  using Error::Error;
};

// Malformed state-language text. Line numbers are 1-based; 0 means the
// problem is not tied to one line (e.g. a missing required line).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& reason)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + reason
                       : reason),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class QuotaUnreachable : public Error {
 public:
  explicit QuotaUnreachable(const std::string& category)
      : Error("balancing quota unreachable for category: " + category),
        category_(category) {}
  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

}  // namespace scriptpoker

#endif  // SCRIPTPOKER_ERRORS_H_
