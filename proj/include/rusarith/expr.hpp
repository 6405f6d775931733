// Copyright 2026 The rusarith Authors
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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rusarith/angles.hpp"

namespace rusarith {

enum class NodeKind { Const, Affine, GB, PAR, Neg, Sum };

// Tree describing a synthesized rotation angle. Leaves are constants or
// affine functions of the inputs; GB and PAR feed their children into the
// corresponding circuit, Neg flips the sign and Sum composes serially.
class RusExpr {
 public:
  static RusExpr constant(double angle) {
    RusExpr e(NodeKind::Const);
    e.offset_ = angle;
    return e;
  }
  static RusExpr affine(int input, double scale = 1, double offset = 0) {
    if (input < 0) throw std::invalid_argument("affine: negative input index");
    RusExpr e(NodeKind::Affine);
    e.input_ = input;
    e.scale_ = scale;
    e.offset_ = offset;
    return e;
  }
  static RusExpr gb(std::vector<RusExpr> children) {
    return with_children(NodeKind::GB, std::move(children));
  }
  static RusExpr par(std::vector<RusExpr> children) {
    return with_children(NodeKind::PAR, std::move(children));
  }
  static RusExpr sum(std::vector<RusExpr> children) {
    return with_children(NodeKind::Sum, std::move(children));
  }
  static RusExpr neg(RusExpr child) {
    return with_children(NodeKind::Neg, {std::move(child)});
  }

  NodeKind kind() const { return kind_; }
  const std::vector<RusExpr>& children() const { return children_; }
  const RusExpr& child(std::size_t i) const { return children_.at(i); }
  // Const: the angle. Affine: the additive offset.
  double offset() const { return offset_; }
  double scale() const { return scale_; }
  int input() const { return input_; }
  bool is_leaf() const { return kind_ == NodeKind::Const || kind_ == NodeKind::Affine; }

  bool operator==(const RusExpr& o) const = default;

 private:
  explicit RusExpr(NodeKind k) : kind_(k) {}
  static RusExpr with_children(NodeKind k, std::vector<RusExpr> children) {
    if (children.empty()) throw std::invalid_argument("combinator needs at least one child");
    if (k == NodeKind::Neg && children.size() != 1)
      throw std::invalid_argument("NEG takes exactly one child");
    RusExpr e(k);
    e.children_ = std::move(children);
    return e;
  }

  NodeKind kind_;
  int input_ = 0;
  double scale_ = 1;
  double offset_ = 0;
  std::vector<RusExpr> children_;
};

// Number of inputs the tree reads (largest affine index + 1).
inline int arity(const RusExpr& e) {
  if (e.kind() == NodeKind::Affine) return e.input() + 1;
  int a = 0;
  for (const auto& c : e.children()) a = std::max(a, arity(c));
  return a;
}

inline double leaf_value(const RusExpr& e, const std::vector<double>& inputs) {
  if (e.kind() == NodeKind::Const) return e.offset();
  if (static_cast<std::size_t>(e.input()) >= inputs.size())
    throw std::invalid_argument("expression reads input " + std::to_string(e.input()) +
                                " but only " + std::to_string(inputs.size()) + " given");
  return e.scale() * inputs[e.input()] + e.offset();
}

// Ideal output angle.
inline double eval_angle(const RusExpr& e, const std::vector<double>& inputs) {
  switch (e.kind()) {
    case NodeKind::Const:
    case NodeKind::Affine:
      return leaf_value(e, inputs);
    case NodeKind::Neg:
      return -eval_angle(e.child(0), inputs);
    case NodeKind::Sum: {
      double s = 0;
      for (const auto& c : e.children()) s += eval_angle(c, inputs);
      return s;
    }
    case NodeKind::GB:
    case NodeKind::PAR: {
      std::vector<double> v;
      v.reserve(e.children().size());
      for (const auto& c : e.children()) v.push_back(eval_angle(c, inputs));
      return e.kind() == NodeKind::GB ? gb_angle(v) : par_angle(v);
    }
  }
  return 0;
}

inline std::size_t leaf_count(const RusExpr& e) {
  if (e.is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : e.children()) n += leaf_count(c);
  return n;
}

// Ancilla qubits needed to run e on a target, beyond the target itself.
// A PAR on a target that is not known to be |0> runs through OAA and needs
// one extra flag qubit.
inline int ancilla_width(const RusExpr& e, bool fresh = true) {
  switch (e.kind()) {
    case NodeKind::Const:
    case NodeKind::Affine:
      return 0;
    case NodeKind::Neg:
      return ancilla_width(e.child(0), fresh);
    case NodeKind::Sum: {
      int w = 0;
      for (std::size_t i = 0; i < e.children().size(); ++i)
        w = std::max(w, ancilla_width(e.child(i), fresh && i == 0));
      return w;
    }
    case NodeKind::GB:
    case NodeKind::PAR: {
      int k = static_cast<int>(e.children().size());
      bool oaa = e.kind() == NodeKind::PAR && !fresh;
      int inner = 0;
      for (const auto& c : e.children()) {
        inner = std::max(inner, ancilla_width(c, true));
        if (e.kind() == NodeKind::GB || oaa) inner = std::max(inner, ancilla_width(c, false));
      }
      return k + (oaa ? 1 : 0) + inner;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Prefix notation: const(a), aff(i,scale,offset), GB(...), PAR(...),
// NEG(x), SUM(...). Keywords are case-insensitive.

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_string(const RusExpr& e) {
  switch (e.kind()) {
    case NodeKind::Const:
      return "const(" + format_number(e.offset()) + ")";
    case NodeKind::Affine:
      return "aff(" + std::to_string(e.input()) + "," + format_number(e.scale()) + "," +
             format_number(e.offset()) + ")";
    default:
      break;
  }
  std::string name = e.kind() == NodeKind::GB    ? "GB"
                     : e.kind() == NodeKind::PAR ? "PAR"
                     : e.kind() == NodeKind::Neg ? "NEG"
                                                 : "SUM";
  std::string out = name + "(";
  for (std::size_t i = 0; i < e.children().size(); ++i) {
    if (i) out += ", ";
    out += to_string(e.child(i));
  }
  return out + ")";
}

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : s_(src) {}

  RusExpr parse() {
    RusExpr e = node();
    skip();
    if (p_ != s_.size()) throw ParseError("trailing characters", p_);
    return e;
  }

  double parse_scalar() {
    double v = scalar();
    skip();
    if (p_ != s_.size()) throw ParseError("trailing characters", p_);
    return v;
  }

 private:
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  void expect(char c) {
    skip();
    if (p_ >= s_.size() || s_[p_] != c) throw ParseError(std::string("expected '") + c + "'", p_);
    ++p_;
  }
  bool accept(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  std::string word() {
    skip();
    std::size_t b = p_;
    while (p_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[p_]))) ++p_;
    std::string w(s_.substr(b, p_ - b));
    for (auto& ch : w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return w;
  }
  double number() {
    skip();
    std::size_t b = p_;
    while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '.' ||
                              s_[p_] == '-' || s_[p_] == '+'))
      ++p_;
    std::string tok(s_.substr(b, p_ - b));
    if (tok == "pi") return kPi;
    if (tok == "-pi") return -kPi;
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      throw ParseError("bad number '" + tok + "'", b);
    return v;
  }
  // number, optionally followed by *pi or /pi style factors: "pi/4", "0.5*pi".
  double scalar() {
    double v = number();
    for (;;) {
      if (accept('*')) {
        v *= number();
      } else if (accept('/')) {
        std::size_t at = p_;
        double d = number();
        if (d == 0) throw ParseError("division by zero", at);
        v /= d;
      } else {
        return v;
      }
    }
  }
  RusExpr node() {
    std::size_t at = (skip(), p_);
    std::string w = word();
    if (w.empty()) throw ParseError("expected a node name", at);
    if (w != "const" && w != "aff" && w != "gb" && w != "par" && w != "sum" && w != "neg")
      throw ParseError("unknown node '" + w + "'", at);
    expect('(');
    if (w == "const") {
      double v = scalar();
      expect(')');
      return RusExpr::constant(v);
    }
    if (w == "aff") {
      std::size_t ip = (skip(), p_);
      double idx = number();
      if (idx < 0 || idx != static_cast<int>(idx)) throw ParseError("bad input index", ip);
      double scale = 1, off = 0;
      if (accept(',')) scale = scalar();
      if (accept(',')) off = scalar();
      expect(')');
      return RusExpr::affine(static_cast<int>(idx), scale, off);
    }
    std::vector<RusExpr> kids;
    kids.push_back(node());
    while (accept(',')) kids.push_back(node());
    expect(')');
    if (w == "gb") return RusExpr::gb(std::move(kids));
    if (w == "par") return RusExpr::par(std::move(kids));
    if (w == "neg") {
      if (kids.size() != 1) throw ParseError("NEG takes one child", at);
      return RusExpr::neg(std::move(kids[0]));
    }
    return RusExpr::sum(std::move(kids));
  }

  std::string_view s_;
  std::size_t p_ = 0;
};

}  // namespace detail

inline RusExpr parse_expr(std::string_view src) { return detail::ExprParser(src).parse(); }

// A single number in the same syntax as expression arguments ("pi/4", "0.3").
inline double parse_scalar(std::string_view src) { return detail::ExprParser(src).parse_scalar(); }

}  // namespace rusarith
