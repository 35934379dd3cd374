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

#include "selectc/program_io.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "selectc/error.hpp"

namespace selectc {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool valid_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

class LineReader {
 public:
  LineReader(std::string_view line, std::size_t lineNo) : line_(line), lineNo_(lineNo) {}

  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }

  std::string_view word() {
    skip_space();
    const auto start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t' && line_[pos_] != '(' &&
           line_[pos_] != ')' && line_[pos_] != ',')
      ++pos_;
    if (start == pos_) fail("expected a word");
    return line_.substr(start, pos_ - start);
  }

  VariableId variable() {
    const auto col = column();
    const auto w = word();
    if (!valid_identifier(w)) throw ParseError(lineNo_, col, "invalid variable name '" + std::string(w) + "'");
    return VariableId{std::string(w)};
  }

  void expect(std::string_view token) {
    skip_space();
    if (line_.substr(pos_, token.size()) != token) fail("expected '" + std::string(token) + "'");
    pos_ += token.size();
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::int64_t integer() {
    skip_space();
    std::int64_t v = 0;
    const auto* begin = line_.data() + pos_;
    const auto* end = line_.data() + line_.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr == begin) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(lineNo_, column(), msg); }
  std::size_t column() const { return pos_ + 1; }

 private:
  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }

  std::string_view line_;
  std::size_t lineNo_;
  std::size_t pos_ = 0;
};

SelectorId parse_selector(LineReader& r) {
  const auto col = r.column();
  const auto w = r.word();
  std::uint32_t idx = 0;
  if (w.size() < 2 || w[0] != 's' ||
      std::from_chars(w.data() + 1, w.data() + w.size(), idx).ptr != w.data() + w.size())
    r.fail("invalid selector '" + std::string(w) + "' at column " + std::to_string(col));
  return SelectorId{idx};
}

}  // namespace

std::string format_statement(const Statement& s) {
  std::string out;
  if (const auto* a = std::get_if<Assign>(&s)) {
    out = a->target.name + " := " + std::string(op_name(a->expr.op)) + " " + a->expr.in1.name + " " +
          a->expr.in2.name;
  } else {
    const auto& c = std::get<Combine>(s);
    out = c.target.name + " := COMBINE";
    for (const auto& o : c.options) out += " (" + o.selector.str() + "," + o.source.name + ")";
  }
  return out;
}

std::string format_program(const Program& p) {
  std::string out = "prime " + std::to_string(kPrime) + "\n";
  for (const auto& v : p.inputs) out += "input " + v.name + "\n";
  for (const auto& c : p.constants) out += "const " + c.name.name + " = " + to_string(c.value) + "\n";
  for (const auto& s : p.statements) out += format_statement(s) + "\n";
  return out;
}

std::string format_statements_inline(const Program& p) {
  std::string out;
  for (const auto& s : p.statements) {
    if (!out.empty()) out += "; ";
    out += format_statement(s);
  }
  return out;
}

std::string format_canonical(const Program& p) {
  std::string out;
  for (const auto& c : p.constants) out += c.name.name + "=" + to_string(c.value) + " ";
  return out + "| " + format_statements_inline(p);
}

bool looks_like_program(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    return t.starts_with("prime ") || t == "prime";
  }
  return false;
}

Program parse_program(std::string_view text) {
  Program p;
  bool sawPrime = false;
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto raw = text.substr(start, end - start);
    start = end + 1;
    ++lineNo;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    LineReader r(line, lineNo);
    const auto head = r.word();
    if (head == "prime") {
      const auto v = r.integer();
      if (static_cast<std::uint64_t>(v) != kPrime)
        r.fail("unsupported prime " + std::to_string(v) + " (expected " + std::to_string(kPrime) + ")");
      if (!p.statements.empty() || !p.inputs.empty()) r.fail("prime header must come first");
      sawPrime = true;
    } else if (head == "input") {
      p.inputs.push_back(r.variable());
    } else if (head == "const") {
      auto name = r.variable();
      r.expect("=");
      p.constants.push_back({std::move(name), Value::from_signed(r.integer())});
    } else {
      LineReader target(line, lineNo);
      auto tgt = target.variable();
      target.expect(":=");
      const auto opWord = target.word();
      if (opWord == "COMBINE") {
        Combine c{std::move(tgt), {}};
        while (!target.at_end()) {
          target.expect("(");
          auto sel = parse_selector(target);
          target.expect(",");
          auto src = target.variable();
          target.expect(")");
          c.options.push_back({sel, std::move(src)});
        }
        p.statements.emplace_back(std::move(c));
      } else {
        const auto op = parse_op(opWord);
        if (!op) target.fail("unknown operation '" + std::string(opWord) + "'");
        auto in1 = target.variable();
        auto in2 = target.variable();
        p.statements.emplace_back(Assign{std::move(tgt), {*op, std::move(in1), std::move(in2)}});
      }
      if (!target.at_end()) target.fail("trailing characters");
      continue;
    }
    if (!r.at_end()) r.fail("trailing characters");
    if (end == text.size()) break;
  }
  if (!sawPrime) throw ParseError(1, 1, "missing prime header");
  try {
    validate(p);
  } catch (const Error& e) {
    throw ParseError(lineNo, 1, e.what());
  }
  return p;
}

}  // namespace selectc
