// Copyright 2026 The selectc Authors. All rights reserved.
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

#include <cctype>
#include <charconv>

#include "selectc/error.hpp"
#include "selectc/surface.hpp"

namespace selectc::surface {
namespace {

enum class Tok : std::uint8_t { Ident, Int, Punct, Newline, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  const auto advance = [&](std::size_t n) {
    i += n;
    col += n;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n') {
      out.push_back({Tok::Newline, "\\n", 0, {line, col}});
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    const SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), 0, loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(src.data() + i, src.data() + j, v);
      if (ec != std::errc{}) throw ParseError(line, col, "integer literal out of range");
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), v, loc});
      advance(j - i);
      continue;
    }
    static constexpr std::string_view kTwo[] = {":=", "==", "!=", "<=", ">="};
    bool matched = false;
    for (auto p : kTwo) {
      if (src.substr(i, 2) == p) {
        out.push_back({Tok::Punct, std::string(p), 0, loc});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("+-*/<>=!()[]{};,").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), 0, loc});
      advance(1);
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "end of input", 0, {line, col}});
  return out;
}

bool is_keyword(std::string_view s) {
  return s == "if" || s == "then" || s == "else" || s == "for" || s == "bound" || s == "input" ||
         s == "const" || s == "array" || s == "return";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SurfaceProgram program() {
    SurfaceProgram p;
    skip_separators();
    while (peek().kind != Tok::End) {
      if (is_word("input") || is_word("const") || is_word("array")) {
        declaration(p.decls);
      } else {
        p.body.push_back(statement());
      }
      end_of_statement();
      skip_separators();
    }
    return p;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool is_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool is_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.loc.line, t.loc.column, msg + " (found '" + t.text + "')");
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
    next();
  }

  std::string identifier() {
    const auto& t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail(t, "expected an identifier");
    return next().text;
  }

  std::int64_t integer() {
    bool neg = false;
    if (is_punct("-")) {
      next();
      neg = true;
    }
    const auto& t = peek();
    if (t.kind != Tok::Int) fail(t, "expected an integer");
    next();
    return neg ? -t.value : t.value;
  }

  void skip_newlines() {
    while (peek().kind == Tok::Newline) next();
  }
  void skip_separators() {
    while (peek().kind == Tok::Newline || is_punct(";")) next();
  }
  void end_of_statement() {
    const auto& t = peek();
    if (t.kind == Tok::Newline || t.kind == Tok::End || is_punct(";") || is_punct("}")) return;
    fail(t, "expected end of statement");
  }

  void declaration(std::vector<Declaration>& out) {
    const auto kw = next().text;
    if (kw == "const") {
      Declaration d{Declaration::Kind::Const, identifier(), 0, 0};
      if (!is_punct("=") && !is_punct(":=")) fail(peek(), "expected '='");
      next();
      d.value = integer();
      out.push_back(std::move(d));
      return;
    }
    const auto kind = kw == "input" ? Declaration::Kind::Input : Declaration::Kind::Array;
    do {
      Declaration d{kind, identifier(), 0, 0};
      if (is_punct("[")) {
        next();
        const auto& t = peek();
        const auto n = integer();
        if (n <= 0 || n > 1 << 16) fail(t, "array size must be in [1, 65536]");
        d.size = static_cast<std::uint32_t>(n);
        expect_punct("]");
      } else if (kind == Declaration::Kind::Array) {
        fail(peek(), "array declaration needs a size");
      }
      out.push_back(std::move(d));
      if (!is_punct(",")) break;
      next();
    } while (true);
  }

  Stmt statement() {
    const auto& t = peek();
    if (is_word("if")) return if_statement();
    if (is_word("for")) return for_statement();
    if (is_word("return")) {
      next();
      Stmt s;
      s.kind = Stmt::Kind::Return;
      s.loc = t.loc;
      s.value = expression();
      return s;
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) return assignment();
    fail(t, "expected a statement");
  }

  Stmt assignment() {
    Stmt s;
    s.kind = Stmt::Kind::Assign;
    s.loc = peek().loc;
    s.target = identifier();
    if (is_punct("[")) {
      next();
      s.index = expression();
      expect_punct("]");
    }
    if (!is_punct(":=") && !is_punct("=")) fail(peek(), "expected ':='");
    next();
    s.value = expression();
    return s;
  }

  std::vector<Stmt> block() {
    expect_punct("{");
    std::vector<Stmt> out;
    skip_separators();
    while (!is_punct("}")) {
      if (peek().kind == Tok::End) fail(peek(), "unterminated block");
      out.push_back(statement());
      end_of_statement();
      skip_separators();
    }
    next();
    return out;
  }

  std::vector<Stmt> branch_body() {
    if (is_punct("{")) return block();
    std::vector<Stmt> out;
    out.push_back(statement());
    return out;
  }

  Stmt if_statement() {
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.loc = next().loc;
    s.value = expression();
    if (is_word("then")) next();
    skip_newlines();
    s.body = branch_body();
    // `else` may sit on the following line.
    std::size_t look = 0;
    while (peek(look).kind == Tok::Newline) ++look;
    if (peek(look).kind == Tok::Ident && peek(look).text == "else") {
      pos_ += look + 1;
      skip_newlines();
      s.elseBody = branch_body();
    }
    return s;
  }

  Stmt for_statement() {
    Stmt s;
    s.kind = Stmt::Kind::For;
    s.loc = next().loc;
    expect_punct("(");
    s.init.push_back(assignment());
    expect_punct(";");
    s.value = expression();
    expect_punct(";");
    s.step.push_back(assignment());
    expect_punct(")");
    if (!is_word("bound")) fail(peek(), "loop without bound annotation");
    next();
    const auto& t = peek();
    const auto n = integer();
    if (n < 0 || n > 1 << 16) fail(t, "loop bound must be in [0, 65536]");
    s.bound = static_cast<std::uint32_t>(n);
    skip_newlines();
    s.body = branch_body();
    return s;
  }

  Expr expression() {
    auto lhs = additive();
    static constexpr std::pair<std::string_view, Op> kCmp[] = {
        {"==", Op::Eq}, {"!=", Op::Neq}, {"<", Op::Lt}, {"<=", Op::Le}, {">", Op::Gt}, {">=", Op::Ge}};
    for (const auto& [text, op] : kCmp) {
      if (is_punct(text)) {
        const auto loc = next().loc;
        auto rhs = additive();
        return Expr::make_binary(op, std::move(lhs), std::move(rhs), loc);
      }
    }
    return lhs;
  }

  Expr additive() {
    auto lhs = multiplicative();
    while (is_punct("+") || is_punct("-")) {
      const auto& t = next();
      auto rhs = multiplicative();
      lhs = Expr::make_binary(t.text == "+" ? Op::Add : Op::Sub, std::move(lhs), std::move(rhs), t.loc);
    }
    return lhs;
  }

  Expr multiplicative() {
    auto lhs = unary();
    while (is_punct("*") || is_punct("/")) {
      const auto& t = next();
      auto rhs = unary();
      lhs = Expr::make_binary(t.text == "*" ? Op::Mul : Op::Div, std::move(lhs), std::move(rhs), t.loc);
    }
    return lhs;
  }

  Expr unary() {
    if (is_punct("-")) {
      const auto loc = next().loc;
      auto operand = unary();
      if (operand.kind == Expr::Kind::Literal) {
        operand.literal = -operand.literal;
        operand.loc = loc;
        return operand;
      }
      return Expr::make_unary(UnaryOp::Neg, std::move(operand), loc);
    }
    if (is_punct("!")) {
      const auto loc = next().loc;
      return Expr::make_unary(UnaryOp::Not, unary(), loc);
    }
    return primary();
  }

  Expr primary() {
    const auto& t = peek();
    if (t.kind == Tok::Int) {
      next();
      return Expr::make_literal(t.value, t.loc);
    }
    if (is_punct("(")) {
      next();
      auto e = expression();
      expect_punct(")");
      return e;
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      next();
      if (is_punct("[")) {
        next();
        auto idx = expression();
        expect_punct("]");
        return Expr::make_index(t.text, std::move(idx), t.loc);
      }
      return Expr::make_name(t.text, t.loc);
    }
    fail(t, "expected an expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SurfaceProgram parse_surface(std::string_view text) { return Parser(tokenize(text)).program(); }

}  // namespace selectc::surface
