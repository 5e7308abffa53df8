// Copyright 2026 The genn Authors.
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

#include "genn/rules.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

#include "genn/error.hpp"

namespace genn {

namespace {

constexpr std::array<std::string_view, kAttributeCount> kAttributeNames = {
    "area", "perimeter", "width", "elongation", "compactness", "mean_intensity", "class_prob", "som_cell"};

}  // namespace

std::string_view attribute_name(Attribute a) noexcept { return kAttributeNames[static_cast<std::size_t>(a)]; }

std::optional<Attribute> attribute_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kAttributeNames.size(); ++i) {
    if (kAttributeNames[i] == name) return static_cast<Attribute>(i);
  }
  return std::nullopt;
}

void AttributeSet::set(Attribute a, double value) noexcept {
  values_[static_cast<std::size_t>(a)] = value;
  present_[static_cast<std::size_t>(a)] = true;
}

void AttributeSet::set(std::string_view name, double value) {
  const auto a = attribute_from_name(name);
  if (!a) throw PreconditionError("unknown attribute '" + std::string(name) + "'");
  set(*a, value);
}

void AttributeSet::validate() const {
  for (std::size_t i = 0; i < kAttributeCount; ++i) {
    if (!present_[i]) throw PreconditionError("attribute '" + std::string(kAttributeNames[i]) + "' is missing");
    if (!std::isfinite(values_[i])) {
      throw PreconditionError("attribute '" + std::string(kAttributeNames[i]) + "' is not finite");
    }
  }
}

std::string_view compare_op_text(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    case CompareOp::eq: return "==";
    case CompareOp::ne: return "!=";
  }
  return "?";
}

bool Comparison::holds(const AttributeSet& a) const noexcept {
  const double v = a.get(attribute);
  switch (op) {
    case CompareOp::lt: return v < value;
    case CompareOp::le: return v <= value;
    case CompareOp::gt: return v > value;
    case CompareOp::ge: return v >= value;
    case CompareOp::eq: return v == value;
    case CompareOp::ne: return v != value;
  }
  return false;
}

Expr Expr::negate(Expr e) {
  Expr out{Kind::negate, {}, {}};
  out.operands.push_back(std::move(e));
  return out;
}

Expr Expr::conjunction(Expr lhs, Expr rhs) {
  Expr out{Kind::conjunction, {}, {}};
  out.operands.push_back(std::move(lhs));
  out.operands.push_back(std::move(rhs));
  return out;
}

Expr Expr::disjunction(Expr lhs, Expr rhs) {
  Expr out{Kind::disjunction, {}, {}};
  out.operands.push_back(std::move(lhs));
  out.operands.push_back(std::move(rhs));
  return out;
}

RuleSet::RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::set<std::string> seen;
  for (const auto& r : rules_) {
    if (!seen.insert(r.name).second) throw PreconditionError("duplicate rule name '" + r.name + "'");
  }
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { ident, number, string, arrow, lbrace, rbrace, lparen, rparen, cmp, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_blank();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;

    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
      t.kind = Tok::ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (c == '-' && peek(1) == '>') {
      advance();
      advance();
      t.kind = Tok::arrow;
      t.text = "->";
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || ((c == '-' || c == '+') && starts_number(1))) {
      t.kind = Tok::number;
      t.text = lex_number(t);
      return t;
    }
    if (c == '"') {
      t.kind = Tok::string;
      t.text = lex_string(t);
      return t;
    }
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance();
      return t;
    };
    switch (c) {
      case '{': return single(Tok::lbrace);
      case '}': return single(Tok::rbrace);
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      case '<':
      case '>':
        advance();
        t.kind = Tok::cmp;
        t.text = std::string(1, c);
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          t.text += '=';
        }
        return t;
      case '=':
      case '!':
        if (peek(1) == '=') {
          advance();
          advance();
          t.kind = Tok::cmp;
          t.text = std::string(1, c) + "=";
          return t;
        }
        break;
      default:
        break;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
  }

 private:
  char peek(std::size_t ahead) const noexcept {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  bool starts_number(std::size_t ahead) const noexcept {
    const char d = peek(ahead);
    return std::isdigit(static_cast<unsigned char>(d)) || (d == '.' && std::isdigit(static_cast<unsigned char>(peek(ahead + 1))));
  }

  void advance() noexcept {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() noexcept {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string lex_number(const Token& t) {
    const std::size_t start = pos_;
    if (src_[pos_] == '-' || src_[pos_] == '+') advance();
    bool digits = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      advance();
      digits = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        advance();
        digits = true;
      }
    }
    if (!digits) throw ParseError("malformed number", t.line, t.column);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        throw ParseError("malformed number exponent", t.line, t.column);
      }
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string lex_string(const Token& t) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') throw ParseError("unterminated string", t.line, t.column);
      const char c = src_[pos_];
      advance();
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= src_.size()) throw ParseError("unterminated string", t.line, t.column);
        const char e = src_[pos_];
        if (e != '"' && e != '\\') throw ParseError("unsupported escape in string", line_, col_);
        out += e;
        advance();
      } else {
        out += c;
      }
    }
    return out;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

bool is_keyword(const std::string& s) {
  return s == "rule" || s == "priority" || s == "and" || s == "or" || s == "not";
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { cur_ = lexer_.next(); }

  RuleSet parse() {
    std::vector<Rule> rules;
    std::set<std::string> names;
    while (cur_.kind != Tok::end) {
      Rule r = parse_rule();
      if (!names.insert(r.name).second) {
        throw ParseError("duplicate rule name '" + r.name + "'", name_tok_.line, name_tok_.column);
      }
      rules.push_back(std::move(r));
    }
    return RuleSet(std::move(rules));
  }

 private:
  [[noreturn]] void fail(const std::string& what, const Token& at) const {
    const std::string found = at.kind == Tok::end ? "end of input" : "'" + at.text + "'";
    throw ParseError(what + ", found " + found, at.line, at.column);
  }

  Token take() {
    Token t = cur_;
    cur_ = lexer_.next();
    return t;
  }

  bool at_keyword(const char* kw) const { return cur_.kind == Tok::ident && cur_.text == kw; }

  void expect_keyword(const char* kw) {
    if (!at_keyword(kw)) fail(std::string("expected '") + kw + "'", cur_);
    take();
  }

  Token expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what, cur_);
    return take();
  }

  Rule parse_rule() {
    expect_keyword("rule");
    const Token name = expect(Tok::ident, "rule name");
    if (is_keyword(name.text)) fail("expected rule name", name);
    name_tok_ = name;
    expect(Tok::arrow, "'->'");
    const Token label = expect(Tok::string, "quoted label");
    Rule r;
    r.name = name.text;
    r.label = label.text;
    if (at_keyword("priority")) {
      take();
      const Token p = expect(Tok::number, "integer priority");
      std::int64_t value = 0;
      const char* first = p.text.data() + (p.text.front() == '+' ? 1 : 0);
      const char* last = p.text.data() + p.text.size();
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last) fail("expected integer priority", p);
      r.priority = value;
    }
    expect(Tok::lbrace, "'{'");
    r.condition = parse_expr();
    expect(Tok::rbrace, "'}'");
    return r;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (at_keyword("or")) {
      take();
      lhs = Expr::disjunction(std::move(lhs), parse_term());
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    while (at_keyword("and")) {
      take();
      lhs = Expr::conjunction(std::move(lhs), parse_factor());
    }
    return lhs;
  }

  Expr parse_factor() {
    if (at_keyword("not")) {
      take();
      return Expr::negate(parse_factor());
    }
    if (cur_.kind == Tok::lparen) {
      take();
      Expr e = parse_expr();
      expect(Tok::rparen, "')'");
      return e;
    }
    if (cur_.kind != Tok::ident || is_keyword(cur_.text)) fail("expected comparison", cur_);
    const Token ident = take();
    const auto attr = attribute_from_name(ident.text);
    if (!attr) throw ParseError("unknown attribute '" + ident.text + "'", ident.line, ident.column);
    const Token op = expect(Tok::cmp, "comparison operator");
    const Token num = expect(Tok::number, "number");
    Comparison c;
    c.attribute = *attr;
    c.op = op.text == "<"    ? CompareOp::lt
           : op.text == "<=" ? CompareOp::le
           : op.text == ">"  ? CompareOp::gt
           : op.text == ">=" ? CompareOp::ge
           : op.text == "==" ? CompareOp::eq
                             : CompareOp::ne;
    const char* first = num.text.data() + (num.text.front() == '+' ? 1 : 0);
    const char* last = num.text.data() + num.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, c.value);
    if (ec != std::errc() || ptr != last || !std::isfinite(c.value)) fail("number out of range", num);
    return Expr::compare(c);
  }

  Lexer lexer_;
  Token cur_;
  Token name_tok_;  // name of the rule being parsed, for error positions
};

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::disjunction: return 1;
    case Expr::Kind::conjunction: return 2;
    case Expr::Kind::negate: return 3;
    case Expr::Kind::compare: return 4;
  }
  return 0;
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(e, out);
  if (wrap) out += ')';
}

void print(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::compare:
      out += to_string(e.comparison);
      break;
    case Expr::Kind::negate:
      out += "not ";
      print_wrapped(e.operands[0], precedence(e.operands[0]) < precedence(e), out);
      break;
    case Expr::Kind::conjunction:
    case Expr::Kind::disjunction: {
      const int p = precedence(e);
      print_wrapped(e.operands[0], precedence(e.operands[0]) < p, out);
      out += e.kind == Expr::Kind::conjunction ? " and " : " or ";
      print_wrapped(e.operands[1], precedence(e.operands[1]) <= p, out);
      break;
    }
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

// Evaluates like evaluate(), recording the first comparison that came out false.
bool evaluate_traced(const Expr& e, const AttributeSet& a, std::optional<std::string>& first_false) {
  switch (e.kind) {
    case Expr::Kind::compare: {
      const bool v = e.comparison.holds(a);
      if (!v && !first_false) first_false = to_string(e.comparison);
      return v;
    }
    case Expr::Kind::negate:
      return !evaluate_traced(e.operands[0], a, first_false);
    case Expr::Kind::conjunction:
      return evaluate_traced(e.operands[0], a, first_false) && evaluate_traced(e.operands[1], a, first_false);
    case Expr::Kind::disjunction:
      return evaluate_traced(e.operands[0], a, first_false) || evaluate_traced(e.operands[1], a, first_false);
  }
  return false;
}

}  // namespace

RuleSet parse_rules(std::string_view text) { return Parser(text).parse(); }

RuleSet load_rules(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_rules(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e.message(), e.line(), e.column());
  }
}

std::string to_string(const Comparison& c) {
  return std::string(attribute_name(c.attribute)) + " " + std::string(compare_op_text(c.op)) + " " +
         format_number(c.value);
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::string to_string(const RuleSet& rs) {
  std::string out;
  for (const auto& r : rs.rules()) {
    out += "rule " + r.name + " -> " + quote(r.label);
    if (r.priority != 0) out += " priority " + std::to_string(r.priority);
    out += " { " + to_string(r.condition) + " }\n";
  }
  return out;
}

bool evaluate(const Expr& e, const AttributeSet& a) noexcept {
  switch (e.kind) {
    case Expr::Kind::compare: return e.comparison.holds(a);
    case Expr::Kind::negate: return !evaluate(e.operands[0], a);
    case Expr::Kind::conjunction: return evaluate(e.operands[0], a) && evaluate(e.operands[1], a);
    case Expr::Kind::disjunction: return evaluate(e.operands[0], a) || evaluate(e.operands[1], a);
  }
  return false;
}

std::optional<Decision> evaluate_rules(const RuleSet& rs, const AttributeSet& a) {
  a.validate();
  const Rule* best = nullptr;
  for (const auto& r : rs.rules()) {
    if ((best == nullptr || r.priority > best->priority) && evaluate(r.condition, a)) best = &r;
  }
  if (best == nullptr) return std::nullopt;
  return Decision{best->label, best->name};
}

std::vector<TraceEntry> explain(const RuleSet& rs, const AttributeSet& a) {
  std::vector<TraceEntry> trace;
  trace.reserve(rs.size());
  for (const auto& r : rs.rules()) {
    std::optional<std::string> first_false;
    const bool matched = evaluate_traced(r.condition, a, first_false);
    TraceEntry entry{r.name, matched, std::nullopt};
    if (!matched) entry.failing_comparison = first_false ? first_false : to_string(r.condition);
    trace.push_back(std::move(entry));
  }
  return trace;
}

}  // namespace genn
