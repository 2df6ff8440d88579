// Copyright 2026 The Tabfuzz Authors
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

#include "tabfuzz/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "tabfuzz/errors.hpp"

namespace tabfuzz {
namespace {

enum class Tok { kNonterminal, kLiteral, kDefine, kBar, kLParen, kRParen, kStar, kPlus, kEllipsis };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Drops a trailing `#` comment, ignoring `#` inside quotes.
std::string strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == '#') {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

bool starts_where(std::string_view line) {
  line = trim(line);
  if (!line.starts_with("where")) return false;
  return line.size() == 5 || std::isspace(static_cast<unsigned char>(line[5])) ||
         line[5] == '(';
}

char unescape(char c) {
  switch (c) {
    case 'n':
      return '\n';
    case 't':
      return '\t';
    case 'r':
      return '\r';
    case '0':
      return '\0';
    default:
      return c;
  }
}

std::vector<Token> tokenize(const std::vector<std::string>& lines) {
  std::vector<Token> tokens;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& s = lines[ln];
    const std::size_t line = ln + 1;
    std::size_t i = 0;
    while (i < s.size()) {
      const char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '<') {
        const std::size_t end = s.find('>', i);
        if (end == std::string::npos) throw SyntaxError(line, "unterminated nonterminal");
        const std::string name = s.substr(i, end - i + 1);
        if (name.size() < 3) throw SyntaxError(line, "empty nonterminal name");
        for (std::size_t k = 1; k + 1 < name.size(); ++k) {
          const char n = name[k];
          if (!(std::isalnum(static_cast<unsigned char>(n)) || n == '_' || n == '-' || n == '.')) {
            throw SyntaxError(line, "invalid character in nonterminal " + name);
          }
        }
        tokens.push_back({Tok::kNonterminal, name, line});
        i = end + 1;
      } else if (c == '\'' || c == '"') {
        std::string literal;
        std::size_t j = i + 1;
        bool closed = false;
        while (j < s.size()) {
          if (s[j] == '\\' && j + 1 < s.size()) {
            literal.push_back(unescape(s[j + 1]));
            j += 2;
          } else if (s[j] == c) {
            closed = true;
            ++j;
            break;
          } else {
            literal.push_back(s[j++]);
          }
        }
        if (!closed) throw SyntaxError(line, "unterminated literal");
        tokens.push_back({Tok::kLiteral, literal, line});
        i = j;
      } else if (s.compare(i, 3, "::=") == 0) {
        tokens.push_back({Tok::kDefine, "::=", line});
        i += 3;
      } else if (s.compare(i, 3, "...") == 0) {
        tokens.push_back({Tok::kEllipsis, "...", line});
        i += 3;
      } else if (c == '|') {
        tokens.push_back({Tok::kBar, "|", line});
        ++i;
      } else if (c == '(') {
        tokens.push_back({Tok::kLParen, "(", line});
        ++i;
      } else if (c == ')') {
        tokens.push_back({Tok::kRParen, ")", line});
        ++i;
      } else if (c == '*') {
        tokens.push_back({Tok::kStar, "*", line});
        ++i;
      } else if (c == '+') {
        tokens.push_back({Tok::kPlus, "+", line});
        ++i;
      } else {
        throw SyntaxError(line, std::string("unexpected character '") + c + "'");
      }
    }
  }
  return tokens;
}

class SpecParser {
 public:
  explicit SpecParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  // Calls `sink(name, line, alternatives)` once per rule.
  template <typename Sink>
  void parse_rules(Sink&& sink) {
    while (pos_ < tokens_.size()) {
      const Token& head = tokens_[pos_];
      if (!at_rule_start()) {
        throw SyntaxError(head.line, "expected '<nonterminal> ::=' but found '" + head.text + "'");
      }
      pos_ += 2;
      sink(head.text, head.line, parse_alternatives(/*nested=*/false, head.line));
    }
  }

 private:
  struct RawAlternative {
    Alternative alternative;
    bool ellipsis = false;
    std::size_t line = 0;
  };

  bool at_rule_start() const {
    return pos_ + 1 < tokens_.size() && tokens_[pos_].kind == Tok::kNonterminal &&
           tokens_[pos_ + 1].kind == Tok::kDefine;
  }

  bool at_sequence_end() const {
    if (pos_ >= tokens_.size()) return true;
    const Tok k = tokens_[pos_].kind;
    return k == Tok::kBar || k == Tok::kRParen || at_rule_start();
  }

  std::vector<Alternative> parse_alternatives(bool nested, std::size_t line) {
    std::vector<RawAlternative> raw;
    raw.push_back(parse_sequence(line));
    while (pos_ < tokens_.size() && tokens_[pos_].kind == Tok::kBar) {
      line = tokens_[pos_].line;
      ++pos_;
      raw.push_back(parse_sequence(line));
    }
    if (!nested && pos_ < tokens_.size() && tokens_[pos_].kind == Tok::kRParen) {
      throw SyntaxError(tokens_[pos_].line, "unbalanced ')'");
    }
    return expand_ranges(raw);
  }

  RawAlternative parse_sequence(std::size_t line) {
    RawAlternative out;
    out.line = line;
    if (pos_ < tokens_.size() && tokens_[pos_].kind == Tok::kEllipsis) {
      out.line = tokens_[pos_].line;
      ++pos_;
      if (!at_sequence_end()) throw SyntaxError(out.line, "'...' must stand alone as an alternative");
      out.ellipsis = true;
      return out;
    }
    while (!at_sequence_end()) {
      const Token& t = tokens_[pos_];
      Item item;
      switch (t.kind) {
        case Tok::kNonterminal:
          item.kind = Item::Kind::kNonterminal;
          item.text = t.text;
          ++pos_;
          break;
        case Tok::kLiteral:
          item.kind = Item::Kind::kTerminal;
          item.text = t.text;
          ++pos_;
          break;
        case Tok::kLParen: {
          ++pos_;
          item.kind = Item::Kind::kGroup;
          item.group = parse_alternatives(/*nested=*/true, t.line);
          if (pos_ >= tokens_.size() || tokens_[pos_].kind != Tok::kRParen) {
            throw SyntaxError(t.line, "missing ')'");
          }
          ++pos_;
          break;
        }
        default:
          throw SyntaxError(t.line, "unexpected '" + t.text + "'");
      }
      if (pos_ < tokens_.size() && tokens_[pos_].kind == Tok::kStar) {
        item.repetition = Repetition::kStar;
        ++pos_;
      } else if (pos_ < tokens_.size() && tokens_[pos_].kind == Tok::kPlus) {
        item.repetition = Repetition::kPlus;
        ++pos_;
      }
      out.alternative.items.push_back(std::move(item));
    }
    return out;
  }

  static std::optional<char> single_char(const RawAlternative& a) {
    if (a.ellipsis || a.alternative.items.size() != 1) return std::nullopt;
    const Item& item = a.alternative.items.front();
    if (item.kind != Item::Kind::kTerminal || item.repetition != Repetition::kOnce ||
        item.text.size() != 1) {
      return std::nullopt;
    }
    return item.text.front();
  }

  static std::vector<Alternative> expand_ranges(const std::vector<RawAlternative>& raw) {
    std::vector<Alternative> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!raw[i].ellipsis) {
        out.push_back(raw[i].alternative);
        continue;
      }
      const std::optional<char> lo_char = i > 0 ? single_char(raw[i - 1]) : std::nullopt;
      const std::optional<char> hi_char =
          i + 1 < raw.size() ? single_char(raw[i + 1]) : std::nullopt;
      const int lo = lo_char ? static_cast<unsigned char>(lo_char.value()) : 256;
      const int hi = hi_char ? static_cast<unsigned char>(hi_char.value()) : -1;
      if (lo >= hi) {
        throw SyntaxError(raw[i].line, "'...' needs ascending one-character literals on both sides");
      }
      for (int c = lo + 1; c < hi; ++c) {
        Alternative a;
        a.items.push_back(Item{Item::Kind::kTerminal, std::string(1, static_cast<char>(c)), {},
                               Repetition::kOnce});
        out.push_back(std::move(a));
      }
    }
    return out;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

template <typename Fn>
void for_each_item(const std::vector<Alternative>& alternatives, Fn&& fn) {
  for (const Alternative& a : alternatives) {
    for (const Item& item : a.items) {
      fn(item);
      if (item.kind == Item::Kind::kGroup) for_each_item(item.group, fn);
    }
  }
}

std::size_t saturating_inc(std::size_t h) { return h == kUnbounded ? h : h + 1; }

}  // namespace

bool Grammar::has_nonterminal(std::string_view symbol) const {
  return productions_.find(symbol) != productions_.end();
}

const std::vector<Alternative>& Grammar::alternatives(std::string_view symbol) const {
  auto it = productions_.find(symbol);
  if (it == productions_.end()) throw UndefinedNonterminal(std::string(symbol));
  return it->second;
}

const std::string& Grammar::row_symbol() const {
  static const std::string kRow = "<row>";
  return has_nonterminal(kRow) ? kRow : start_;
}

std::size_t Grammar::min_height(std::string_view symbol) const {
  auto it = heights_.find(symbol);
  if (it == heights_.end()) throw UndefinedNonterminal(std::string(symbol));
  return it->second;
}

std::size_t Grammar::min_height(const Item& item) const {
  switch (item.kind) {
    case Item::Kind::kTerminal:
      return 0;
    case Item::Kind::kNonterminal: {
      auto it = heights_.find(item.text);
      return it == heights_.end() ? kUnbounded : it->second;
    }
    case Item::Kind::kGroup: {
      std::size_t best = kUnbounded;
      for (const Alternative& a : item.group) best = std::min(best, min_height(a));
      return best;
    }
  }
  return kUnbounded;
}

std::size_t Grammar::min_height(const Alternative& alternative) const {
  std::size_t h = 0;
  for (const Item& item : alternative.items) {
    if (item.repetition == Repetition::kStar) continue;
    h = std::max(h, min_height(item));
  }
  return h;
}

void Grammar::compute_heights() {
  heights_.clear();
  for (const std::string& nt : order_) heights_[nt] = kUnbounded;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const std::string& nt : order_) {
      std::size_t best = kUnbounded;
      for (const Alternative& a : productions_.at(nt)) {
        best = std::min(best, saturating_inc(min_height(a)));
      }
      if (best < heights_[nt]) {
        heights_[nt] = best;
        changed = true;
      }
    }
  }
}

Grammar parse_spec(std::string_view text) {
  if (trim(text).empty()) throw SyntaxError(1, "empty specification");

  std::vector<std::string> grammar_lines;
  std::vector<ConstraintSource> constraints;
  bool in_where = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = strip_comment(raw);
    if (starts_where(line)) {
      in_where = true;
      const std::string_view body = trim(trim(line).substr(5));
      constraints.push_back({std::string(body), line_no});
      grammar_lines.emplace_back();
      continue;
    }
    if (in_where) {
      const std::string_view body = trim(line);
      if (!body.empty()) {
        if (constraints.back().text.empty()) {
          constraints.back().text = std::string(body);
        } else {
          constraints.back().text += " " + std::string(body);
        }
      }
      grammar_lines.emplace_back();
      continue;
    }
    grammar_lines.push_back(std::move(line));
  }
  for (const ConstraintSource& c : constraints) {
    if (c.text.empty()) throw SyntaxError(c.line, "empty where clause");
  }

  Grammar g;
  SpecParser parser(tokenize(grammar_lines));
  parser.parse_rules([&](const std::string& name, std::size_t line, std::vector<Alternative> alts) {
    if (g.productions_.count(name)) {
      throw SyntaxError(line, "duplicate production for " + name + " (use '|' for alternatives)");
    }
    g.order_.push_back(name);
    g.productions_.emplace(name, std::move(alts));
  });
  if (g.order_.empty()) throw SyntaxError(1, "no productions");

  g.start_ = g.has_nonterminal("<start>") ? std::string("<start>") : g.order_.front();
  for (const std::string& nt : g.order_) {
    for_each_item(g.productions_.at(nt), [&](const Item& item) {
      if (item.kind == Item::Kind::kNonterminal && !g.has_nonterminal(item.text)) {
        throw UndefinedNonterminal(item.text);
      }
      if (item.kind == Item::Kind::kTerminal) g.terminals_.insert(item.text);
    });
  }
  for (const std::string& t : g.terminals_) {
    if (g.has_nonterminal(t)) throw SyntaxError(1, "terminal '" + t + "' collides with a nonterminal");
  }
  g.constraints_ = std::move(constraints);
  g.compute_heights();
  return g;
}

Grammar load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open spec file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

}  // namespace tabfuzz
