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

#include "tabfuzz/constraints.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <variant>

#include "tabfuzz/errors.hpp"

namespace tabfuzz {

struct Expr {
  enum class Kind { kOr, kAnd, kCompare, kRef, kInt, kFloat, kNumber, kText };
  enum class Op { kLt, kGt, kLe, kGe, kEq, kNe };

  Kind kind = Kind::kNumber;
  Op op = Op::kEq;
  std::vector<std::shared_ptr<const Expr>> children;
  std::string text;  // symbol or text literal
  double number = 0.0;
};

namespace {

using ExprPtr = std::shared_ptr<const Expr>;
using Value = std::variant<double, std::string>;

std::string_view op_text(Expr::Op op) {
  switch (op) {
    case Expr::Op::kLt: return "<";
    case Expr::Op::kGt: return ">";
    case Expr::Op::kLe: return "<=";
    case Expr::Op::kGe: return ">=";
    case Expr::Op::kEq: return "==";
    case Expr::Op::kNe: return "!=";
  }
  return "?";
}

std::string render(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kOr:
    case Expr::Kind::kAnd: {
      const bool is_or = e.kind == Expr::Kind::kOr;
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += is_or ? " | " : " & ";
        const Expr& c = *e.children[i];
        const bool wrap = c.kind == Expr::Kind::kOr || (is_or && c.kind == Expr::Kind::kAnd);
        out += wrap ? "(" + render(c) + ")" : render(c);
      }
      return out;
    }
    case Expr::Kind::kCompare:
      return render(*e.children[0]) + " " + std::string(op_text(e.op)) + " " +
             render(*e.children[1]);
    case Expr::Kind::kRef: return e.text;
    case Expr::Kind::kInt: return "int(" + render(*e.children[0]) + ")";
    case Expr::Kind::kFloat: return "float(" + render(*e.children[0]) + ")";
    case Expr::Kind::kNumber: return format_number(e.number);
    case Expr::Kind::kText: {
      std::string out = "'";
      for (char c : e.text) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
      }
      return out + "'";
    }
  }
  return "";
}

void collect_refs(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::kRef &&
      std::find(out.begin(), out.end(), e.text) == out.end()) {
    out.push_back(e.text);
  }
  for (const ExprPtr& c : e.children) collect_refs(*c, out);
}

struct Token {
  enum class Kind { kRef, kNumber, kText, kIdent, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  double number = 0.0;
};

class ExprParser {
 public:
  ExprParser(const Grammar& g, std::string_view src, std::size_t line)
      : g_(g), src_(src), line_(line) {
    tokenize();
  }

  ExprPtr parse() {
    ExprPtr e = parse_or();
    if (peek().kind != Token::Kind::kEnd) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(line_, "in constraint: " + what);
  }

  void tokenize() {
    std::size_t i = 0;
    while (i < src_.size()) {
      const char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Token t;
      if (c == '<' && i + 1 < src_.size() &&
          (std::isalpha(static_cast<unsigned char>(src_[i + 1])) || src_[i + 1] == '_')) {
        const std::size_t close = src_.find('>', i);
        if (close == std::string_view::npos) fail("unterminated reference");
        t.kind = Token::Kind::kRef;
        t.text = std::string(src_.substr(i, close - i + 1));
        i = close + 1;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && i + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[i + 1])))) {
        std::size_t j = i;
        while (j < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.' ||
                src_[j] == 'e' || src_[j] == 'E' ||
                ((src_[j] == '-' || src_[j] == '+') && (src_[j - 1] == 'e' || src_[j - 1] == 'E')))) {
          ++j;
        }
        const std::optional<double> v = parse_number(src_.substr(i, j - i));
        if (!v) fail("bad number '" + std::string(src_.substr(i, j - i)) + "'");
        t.kind = Token::Kind::kNumber;
        t.text = std::string(src_.substr(i, j - i));
        t.number = *v;
        i = j;
      } else if (c == '\'' || c == '"') {
        std::size_t j = i + 1;
        std::string value;
        while (j < src_.size() && src_[j] != c) {
          if (src_[j] == '\\' && j + 1 < src_.size()) ++j;
          value += src_[j++];
        }
        if (j >= src_.size()) fail("unterminated string");
        t.kind = Token::Kind::kText;
        t.text = value;
        i = j + 1;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) {
          ++j;
        }
        t.kind = Token::Kind::kIdent;
        t.text = std::string(src_.substr(i, j - i));
        i = j;
      } else {
        static constexpr std::string_view kTwo[] = {"<=", ">=", "==", "!=", "<>", "&&", "||"};
        t.kind = Token::Kind::kPunct;
        t.text = std::string(1, c);
        for (std::string_view two : kTwo) {
          if (src_.substr(i, 2) == two) t.text = std::string(two);
        }
        if (std::string_view("<>=!&|()-").find(c) == std::string_view::npos) {
          fail("unexpected character '" + t.text + "'");
        }
        if (t.text == "!") fail("unexpected '!'");
        i += t.text.size();
      }
      tokens_.push_back(std::move(t));
    }
    tokens_.push_back(Token{});
  }

  const Token& peek() const { return tokens_[pos_]; }
  Token next() { return tokens_[pos_++]; }

  bool accept_any(std::initializer_list<std::string_view> spellings, Token::Kind kind) {
    if (peek().kind != kind) return false;
    for (std::string_view s : spellings) {
      if (peek().text == s) {
        ++pos_;
        return true;
      }
    }
    return false;
  }

  bool accept_or() {
    return accept_any({"|", "||"}, Token::Kind::kPunct) || accept_any({"or"}, Token::Kind::kIdent);
  }
  bool accept_and() {
    return accept_any({"&", "&&"}, Token::Kind::kPunct) ||
           accept_any({"and"}, Token::Kind::kIdent);
  }

  ExprPtr parse_or() {
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::kOr;
    node->children.push_back(parse_and());
    while (accept_or()) node->children.push_back(parse_and());
    if (node->children.size() == 1) return node->children.front();
    return node;
  }

  ExprPtr parse_and() {
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::kAnd;
    node->children.push_back(parse_atom());
    while (accept_and()) node->children.push_back(parse_atom());
    if (node->children.size() == 1) return node->children.front();
    return node;
  }

  ExprPtr parse_atom() {
    if (peek().kind == Token::Kind::kPunct && peek().text == "(") {
      ++pos_;
      ExprPtr inner = parse_or();
      if (!accept_any({")"}, Token::Kind::kPunct)) fail("expected ')'");
      return inner;
    }
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::kCompare;
    node->children.push_back(parse_operand());
    const Token op = next();
    static const std::pair<std::string_view, Expr::Op> kOps[] = {
        {"<", Expr::Op::kLt},  {">", Expr::Op::kGt},  {"<=", Expr::Op::kLe}, {">=", Expr::Op::kGe},
        {"==", Expr::Op::kEq}, {"=", Expr::Op::kEq},  {"!=", Expr::Op::kNe}, {"<>", Expr::Op::kNe}};
    bool found = false;
    if (op.kind == Token::Kind::kPunct) {
      for (const auto& [spelling, value] : kOps) {
        if (op.text == spelling) {
          node->op = value;
          found = true;
        }
      }
    }
    if (!found) fail("expected a comparison operator");
    node->children.push_back(parse_operand());
    return node;
  }

  ExprPtr parse_operand() {
    const Token t = next();
    auto node = std::make_shared<Expr>();
    switch (t.kind) {
      case Token::Kind::kRef:
        if (!g_.has_nonterminal(t.text)) throw UndefinedNonterminal(t.text);
        node->kind = Expr::Kind::kRef;
        node->text = t.text;
        return node;
      case Token::Kind::kNumber:
        node->kind = Expr::Kind::kNumber;
        node->number = t.number;
        return node;
      case Token::Kind::kText:
        node->kind = Expr::Kind::kText;
        node->text = t.text;
        return node;
      case Token::Kind::kPunct:
        if (t.text == "-" && peek().kind == Token::Kind::kNumber) {
          node->kind = Expr::Kind::kNumber;
          node->number = -next().number;
          return node;
        }
        break;
      case Token::Kind::kIdent:
        if (t.text == "int" || t.text == "float") {
          if (!accept_any({"("}, Token::Kind::kPunct)) fail("expected '(' after " + t.text);
          node->kind = t.text == "int" ? Expr::Kind::kInt : Expr::Kind::kFloat;
          node->children.push_back(parse_operand());
          if (!accept_any({")"}, Token::Kind::kPunct)) fail("expected ')'");
          return node;
        }
        break;
      case Token::Kind::kEnd:
        fail("unexpected end of constraint");
    }
    fail("unexpected '" + t.text + "'");
  }

  const Grammar& g_;
  std::string_view src_;
  std::size_t line_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

Value value_of(const Expr& e, const RowRecord& row, const ColumnSchema& schema) {
  switch (e.kind) {
    case Expr::Kind::kRef: {
      const std::optional<std::size_t> col = schema.index_of_symbol(e.text);
      if (!col || *col >= row.values.size()) {
        throw SchemaMismatch("constraint refers to " + e.text + ", which is not a column");
      }
      const Cell& cell = row.values[*col];
      if (const double* d = std::get_if<double>(&cell)) return *d;
      if (const std::string* s = std::get_if<std::string>(&cell)) return *s;
      throw MalformedRow("missing value for " + e.text);
    }
    case Expr::Kind::kInt:
    case Expr::Kind::kFloat: {
      const Value inner = value_of(*e.children[0], row, schema);
      double v = 0.0;
      if (const double* d = std::get_if<double>(&inner)) {
        v = *d;
      } else {
        const std::optional<double> parsed = parse_number(std::get<std::string>(inner));
        if (!parsed) {
          throw MalformedRow("cannot coerce '" + std::get<std::string>(inner) + "' to a number");
        }
        v = *parsed;
      }
      return e.kind == Expr::Kind::kInt ? std::trunc(v) : v;
    }
    case Expr::Kind::kNumber: return e.number;
    case Expr::Kind::kText: return e.text;
    default: break;
  }
  throw MalformedRow("boolean expression used as a value");
}

bool holds(Expr::Op op, double a, double b) {
  switch (op) {
    case Expr::Op::kLt: return a < b;
    case Expr::Op::kGt: return a > b;
    case Expr::Op::kLe: return a <= b;
    case Expr::Op::kGe: return a >= b;
    case Expr::Op::kEq: return a == b;
    case Expr::Op::kNe: return a != b;
  }
  return false;
}

// Satisfaction and near-miss credit of one comparison.
std::pair<bool, double> compare(const Expr& e, const RowRecord& row, const ColumnSchema& schema) {
  Value a = value_of(*e.children[0], row, schema);
  Value b = value_of(*e.children[1], row, schema);
  if (a.index() != b.index()) {
    // Mixed text and number: compare numerically when the text is a number.
    Value& text = std::holds_alternative<std::string>(a) ? a : b;
    const std::optional<double> parsed = parse_number(std::get<std::string>(text));
    if (parsed) text = *parsed;
  }
  if (std::holds_alternative<double>(a) && std::holds_alternative<double>(b)) {
    const double x = std::get<double>(a);
    const double c = std::get<double>(b);
    if (holds(e.op, x, c)) return {true, 1.0};
    if (e.op == Expr::Op::kNe) return {false, 0.5};
    return {false, 1.0 / (1.0 + std::fabs(x - c) / std::max(1.0, std::fabs(c)))};
  }
  if (e.op != Expr::Op::kEq && e.op != Expr::Op::kNe) {
    throw MalformedRow("ordering comparison on text in '" + render(e) + "'");
  }
  const bool equal = a == b;
  const bool ok = e.op == Expr::Op::kEq ? equal : !equal;
  return {ok, ok ? 1.0 : 0.0};
}

bool eval_bool(const Expr& e, const RowRecord& row, const ColumnSchema& schema) {
  switch (e.kind) {
    case Expr::Kind::kOr:
      for (const ExprPtr& c : e.children) {
        if (eval_bool(*c, row, schema)) return true;
      }
      return false;
    case Expr::Kind::kAnd:
      for (const ExprPtr& c : e.children) {
        if (!eval_bool(*c, row, schema)) return false;
      }
      return true;
    case Expr::Kind::kCompare: return compare(e, row, schema).first;
    default: break;
  }
  throw MalformedRow("value used as a condition");
}

double credit(const Expr& e, const RowRecord& row, const ColumnSchema& schema) {
  switch (e.kind) {
    case Expr::Kind::kOr: {
      double best = 0.0;
      for (const ExprPtr& c : e.children) best = std::max(best, credit(*c, row, schema));
      return best;
    }
    case Expr::Kind::kAnd: {
      double total = 0.0;
      for (const ExprPtr& c : e.children) total += credit(*c, row, schema);
      return total / static_cast<double>(e.children.size());
    }
    case Expr::Kind::kCompare: return compare(e, row, schema).second;
    default: break;
  }
  throw MalformedRow("value used as a condition");
}

}  // namespace

StaticConstraint::StaticConstraint(std::shared_ptr<const Expr> root, std::size_t line)
    : root_(std::move(root)), text_(render(*root_)), line_(line) {
  collect_refs(*root_, references_);
}

std::vector<StaticConstraint> compile_constraint(const Grammar& grammar, std::string_view text,
                                                 std::size_t line) {
  ExprPtr root = ExprParser(grammar, text, line).parse();
  std::vector<StaticConstraint> out;
  if (root->kind == Expr::Kind::kAnd) {
    for (const ExprPtr& c : root->children) out.emplace_back(c, line);
  } else {
    out.emplace_back(root, line);
  }
  return out;
}

std::vector<StaticConstraint> compile_constraints(const Grammar& grammar) {
  std::vector<StaticConstraint> out;
  for (const ConstraintSource& src : grammar.constraint_sources()) {
    for (StaticConstraint& c : compile_constraint(grammar, src.text, src.line)) {
      out.push_back(std::move(c));
    }
  }
  return out;
}

bool eval_static(const StaticConstraint& constraint, const RowRecord& row,
                 const ColumnSchema& schema) {
  return eval_bool(constraint.root(), row, schema);
}

double static_credit(const StaticConstraint& constraint, const RowRecord& row,
                     const ColumnSchema& schema) {
  if (eval_static(constraint, row, schema)) return 1.0;
  return std::min(1.0, credit(constraint.root(), row, schema));
}

bool eval_classifier(const ClassifierConstraint& constraint, const RowRecord& row,
                     const Encoder& encoder) {
  if (!constraint.model) throw Error("classifier constraint has no model");
  const std::vector<double> x = encoder.encode(row);
  return constraint.model->predict_label(x) == constraint.target;
}

FitnessScore fitness(const RowRecord& row, std::span<const StaticConstraint> statics,
                     const ClassifierConstraint* classifier, const Encoder& encoder) {
  const std::size_t total = statics.size() + (classifier ? 1 : 0);
  if (total == 0) return {1.0, true};
  double sum = 0.0;
  bool all = true;
  for (const StaticConstraint& c : statics) {
    if (eval_static(c, row, encoder.schema())) {
      sum += 1.0;
    } else {
      all = false;
      sum += std::min(1.0, credit(c.root(), row, encoder.schema()));
    }
  }
  if (classifier) {
    if (eval_classifier(*classifier, row, encoder)) {
      sum += 1.0;
    } else {
      all = false;
    }
  }
  if (all) return {1.0, true};
  // A near miss can earn full credit; keep 1.0 for rows that satisfy everything.
  const double mean = sum / static_cast<double>(total);
  return {std::min(mean, std::nextafter(1.0, 0.0)), false};
}

bool ConstraintSet::statics_hold(const RowRecord& row) const {
  for (const StaticConstraint& c : statics_) {
    if (!eval_static(c, row, schema())) return false;
  }
  return true;
}

}  // namespace tabfuzz
