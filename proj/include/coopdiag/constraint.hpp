// Copyright 2026 The coopdiag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "coopdiag/ids.hpp"

namespace coopdiag {

enum class CompareOp { Greater, GreaterEqual, Less, LessEqual, Equal, NotEqual };

inline std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Greater: return ">";
    case CompareOp::GreaterEqual: return ">=";
    case CompareOp::Less: return "<";
    case CompareOp::LessEqual: return "<=";
    case CompareOp::Equal: return "==";
    case CompareOp::NotEqual: return "!=";
  }
  return "?";
}

inline bool compare(double lhs, CompareOp op, double rhs) {
  switch (op) {
    case CompareOp::Greater: return lhs > rhs;
    case CompareOp::GreaterEqual: return lhs >= rhs;
    case CompareOp::Less: return lhs < rhs;
    case CompareOp::LessEqual: return lhs <= rhs;
    case CompareOp::Equal: return lhs == rhs;
    case CompareOp::NotEqual: return lhs != rhs;
  }
  return false;
}

class ConstraintSyntaxError : public std::runtime_error {
 public:
  ConstraintSyntaxError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  [[nodiscard]] std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ConstraintEvaluationError : public std::runtime_error {
 public:
  explicit ConstraintEvaluationError(const FeatureName& feature)
      : std::runtime_error("no measurement for feature '" + feature + "'"), feature_(feature) {}
  [[nodiscard]] const FeatureName& feature() const { return feature_; }

 private:
  FeatureName feature_;
};

/// Immutable boolean expression over quality features. Copies share nodes.
class Constraint {
 public:
  enum class Kind { And, Or, Not, Leaf };

  static Constraint leaf(FeatureName feature, CompareOp op, double value) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Leaf;
    node->feature = std::move(feature);
    node->op = op;
    node->value = value;
    return Constraint(std::move(node));
  }
  static Constraint conjunction(Constraint lhs, Constraint rhs) {
    return binary(Kind::And, std::move(lhs), std::move(rhs));
  }
  static Constraint disjunction(Constraint lhs, Constraint rhs) {
    return binary(Kind::Or, std::move(lhs), std::move(rhs));
  }
  static Constraint negation(Constraint child) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Not;
    node->left = std::move(child.node_);
    return Constraint(std::move(node));
  }

  [[nodiscard]] Kind kind() const { return node_->kind; }
  [[nodiscard]] Constraint left() const { return Constraint(node_->left); }
  [[nodiscard]] Constraint right() const { return Constraint(node_->right); }
  [[nodiscard]] Constraint child() const { return Constraint(node_->left); }
  [[nodiscard]] const FeatureName& feature() const { return node_->feature; }
  [[nodiscard]] CompareOp op() const { return node_->op; }
  [[nodiscard]] double value() const { return node_->value; }

  [[nodiscard]] bool evaluate(const Measurements& measurements) const {
    switch (kind()) {
      case Kind::And: return left().evaluate(measurements) && right().evaluate(measurements);
      case Kind::Or: return left().evaluate(measurements) || right().evaluate(measurements);
      case Kind::Not: return !child().evaluate(measurements);
      case Kind::Leaf: {
        auto it = measurements.find(feature());
        if (it == measurements.end()) {
          throw ConstraintEvaluationError(feature());
        }
        return compare(it->second, op(), value());
      }
    }
    return false;
  }

  void collect_features(std::set<FeatureName>& out) const {
    switch (kind()) {
      case Kind::Leaf: out.insert(feature()); break;
      case Kind::Not: child().collect_features(out); break;
      default:
        left().collect_features(out);
        right().collect_features(out);
    }
  }

  [[nodiscard]] std::size_t leaf_count() const {
    switch (kind()) {
      case Kind::Leaf: return 1;
      case Kind::Not: return child().leaf_count();
      default: return left().leaf_count() + right().leaf_count();
    }
  }

  /// Canonical concrete syntax; parse(to_string()) reproduces the tree.
  [[nodiscard]] std::string to_string() const {
    std::ostringstream out;
    write(out);
    return out.str();
  }

  friend bool operator==(const Constraint& a, const Constraint& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::Leaf:
        return a.feature() == b.feature() && a.op() == b.op() && a.value() == b.value();
      case Kind::Not: return a.child() == b.child();
      default: return a.left() == b.left() && a.right() == b.right();
    }
  }

 private:
  struct Node {
    Kind kind = Kind::Leaf;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    FeatureName feature;
    CompareOp op = CompareOp::Equal;
    double value = 0.0;
  };

  explicit Constraint(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Constraint binary(Kind kind, Constraint lhs, Constraint rhs) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->left = std::move(lhs.node_);
    node->right = std::move(rhs.node_);
    return Constraint(std::move(node));
  }

  void write(std::ostringstream& out) const {
    switch (kind()) {
      case Kind::Leaf: {
        std::ostringstream num;
        num.precision(17);
        num << value();
        out << '(' << feature() << ' ' << coopdiag::to_string(op()) << ' ' << num.str() << ')';
        break;
      }
      case Kind::Not:
        out << "(!";
        child().write(out);
        out << ')';
        break;
      case Kind::And:
      case Kind::Or:
        out << '(';
        left().write(out);
        out << (kind() == Kind::And ? " && " : " || ");
        right().write(out);
        out << ')';
        break;
    }
  }

  std::shared_ptr<const Node> node_;
};

/// Quality requirement: feature -> constraint.
using QualityRequirement = std::map<FeatureName, Constraint>;

namespace detail {

// Grammar (every compound is parenthesised):
//   expr   := '(' inner ')'
//   inner  := '!' expr | expr ('&&' | '||') expr | ident op number
class ConstraintParser {
 public:
  explicit ConstraintParser(std::string_view text) : text_(text) {}

  Constraint parse() {
    Constraint c = expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw ConstraintSyntaxError("unexpected trailing input", pos_);
    }
    return c;
  }

 private:
  Constraint expr() {
    expect('(');
    skip_space();
    if (peek() == '!' && peek(1) != '=') {
      ++pos_;
      Constraint inner = expr();
      expect(')');
      return Constraint::negation(std::move(inner));
    }
    if (peek() == '(') {
      Constraint lhs = expr();
      skip_space();
      bool conj = false;
      if (text_.substr(pos_, 2) == "&&") {
        conj = true;
      } else if (text_.substr(pos_, 2) != "||") {
        throw ConstraintSyntaxError("expected '&&' or '||'", pos_);
      }
      pos_ += 2;
      Constraint rhs = expr();
      expect(')');
      return conj ? Constraint::conjunction(std::move(lhs), std::move(rhs))
                  : Constraint::disjunction(std::move(lhs), std::move(rhs));
    }
    FeatureName feature = identifier();
    CompareOp op = comparison();
    double value = number();
    expect(')');
    return Constraint::leaf(std::move(feature), op, value);
  }

  FeatureName identifier() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !(std::isalpha(uc(text_[pos_])) || text_[pos_] == '_')) {
      throw ConstraintSyntaxError("expected feature identifier", pos_);
    }
    while (pos_ < text_.size() && (std::isalnum(uc(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return FeatureName(text_.substr(start, pos_ - start));
  }

  CompareOp comparison() {
    skip_space();
    const std::size_t start = pos_;
    std::string op;
    while (pos_ < text_.size() && std::string_view("<>=!").find(text_[pos_]) != std::string_view::npos) {
      op += text_[pos_++];
    }
    if (op == ">") return CompareOp::Greater;
    if (op == ">=") return CompareOp::GreaterEqual;
    if (op == "<") return CompareOp::Less;
    if (op == "<=") return CompareOp::LessEqual;
    if (op == "==") return CompareOp::Equal;
    if (op == "!=") return CompareOp::NotEqual;
    throw ConstraintSyntaxError(op.empty() ? "expected comparison operator"
                                           : "unknown operator '" + op + "'",
                                start);
  }

  double number() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(uc(text_[pos_])) || text_[pos_] == '.' || text_[pos_] == 'e' ||
            text_[pos_] == 'E' ||
            ((text_[pos_] == '-' || text_[pos_] == '+') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    const std::string token(text_.substr(start, pos_ - start));
    if (token.empty()) {
      throw ConstraintSyntaxError("expected decimal literal", start);
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw ConstraintSyntaxError("malformed decimal literal '" + token + "'", start);
    }
    if (used != token.size()) {
      throw ConstraintSyntaxError("malformed decimal literal '" + token + "'", start);
    }
    return value;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      throw ConstraintSyntaxError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(uc(text_[pos_]))) ++pos_;
  }

  [[nodiscard]] char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  static unsigned char uc(char c) { return static_cast<unsigned char>(c); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Constraint parse_constraint(std::string_view text) {
  return detail::ConstraintParser(text).parse();
}

inline bool eval_constraint(const Constraint& c, const Measurements& measurements) {
  return c.evaluate(measurements);
}

}  // namespace coopdiag
