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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace genn {

// Rule files describe how extracted objects are labeled from their shape and
// radiometry. Grammar ('#' starts a comment that runs to end of line):
//
//   ruleset := rule*
//   rule    := "rule" IDENT "->" STRING ("priority" INT)? "{" expr "}"
//   expr    := expr "or" term | term
//   term    := term "and" factor | factor
//   factor  := "not" factor | "(" expr ")" | IDENT CMP NUMBER
//   CMP     := "<" | "<=" | ">" | ">=" | "==" | "!="
//
// IDENT inside a comparison must be one of the attribute names below. The
// label "reject" is reserved by the extraction pipeline for object removal.

enum class Attribute : std::uint8_t {
  area,
  perimeter,
  width,
  elongation,
  compactness,
  mean_intensity,
  class_prob,
  som_cell,
};

inline constexpr std::size_t kAttributeCount = 8;

std::string_view attribute_name(Attribute a) noexcept;
std::optional<Attribute> attribute_from_name(std::string_view name) noexcept;

/// Values for the fixed attribute vocabulary.
class AttributeSet {
 public:
  void set(Attribute a, double value) noexcept;
  /// Throws PreconditionError on an unknown name.
  void set(std::string_view name, double value);
  double get(Attribute a) const noexcept { return values_[static_cast<std::size_t>(a)]; }
  bool has(Attribute a) const noexcept { return present_[static_cast<std::size_t>(a)]; }
  /// Throws PreconditionError naming the first missing or non-finite attribute.
  void validate() const;

 private:
  std::array<double, kAttributeCount> values_{};
  std::array<bool, kAttributeCount> present_{};
};

enum class CompareOp : std::uint8_t { lt, le, gt, ge, eq, ne };

std::string_view compare_op_text(CompareOp op) noexcept;

struct Comparison {
  Attribute attribute = Attribute::area;
  CompareOp op = CompareOp::lt;
  double value = 0.0;

  bool holds(const AttributeSet& a) const noexcept;
  bool operator==(const Comparison&) const = default;
};

/// Condition tree. `and`/`or` nodes are binary and left-associative, exactly
/// as parsed, so printing and reparsing reproduces the same tree.
struct Expr {
  enum class Kind : std::uint8_t { compare, negate, conjunction, disjunction };

  Kind kind = Kind::compare;
  Comparison comparison;
  std::vector<Expr> operands;

  static Expr compare(Comparison c) { return Expr{Kind::compare, c, {}}; }
  static Expr negate(Expr e);
  static Expr conjunction(Expr lhs, Expr rhs);
  static Expr disjunction(Expr lhs, Expr rhs);

  bool operator==(const Expr&) const = default;
};

struct Rule {
  std::string name;
  std::string label;
  std::int64_t priority = 0;
  Expr condition;

  bool operator==(const Rule&) const = default;
};

class RuleSet {
 public:
  RuleSet() = default;
  /// Rule names must be unique.
  explicit RuleSet(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }

  bool operator==(const RuleSet&) const = default;

 private:
  std::vector<Rule> rules_;
};

/// Throws ParseError carrying a 1-based line and column.
RuleSet parse_rules(std::string_view text);
RuleSet load_rules(const std::filesystem::path& path);

/// Canonical text: one rule per line, minimal parentheses, numbers in
/// shortest round-trip form.
std::string to_string(const Expr& e);
std::string to_string(const Comparison& c);
std::string to_string(const RuleSet& rs);

/// Short-circuit evaluation, left to right.
bool evaluate(const Expr& e, const AttributeSet& a) noexcept;

struct Decision {
  std::string label;
  std::string rule_name;

  bool operator==(const Decision&) const = default;
};

/// Highest-priority matching rule; equal priorities resolve to the earliest
/// declared rule. std::nullopt when nothing matches.
std::optional<Decision> evaluate_rules(const RuleSet& rs, const AttributeSet& a);

struct TraceEntry {
  std::string rule_name;
  bool matched = false;
  /// First comparison that evaluated false, in evaluation order. For a rule
  /// that fails without any false comparison (only possible under `not`),
  /// the whole condition.
  std::optional<std::string> failing_comparison;
};

std::vector<TraceEntry> explain(const RuleSet& rs, const AttributeSet& a);

}  // namespace genn
