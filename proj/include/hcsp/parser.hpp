#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcsp/process.hpp"

namespace hcsp {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Token {
  enum class Kind { Ident, Number, Sym, End };
  Kind kind;
  std::string text;
  size_t pos;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> toks;
  size_t i = 0, n = src.size();
  auto sym = [&](std::string s) {
    toks.push_back({Token::Kind::Sym, std::move(s), i});
  };
  while (i < n) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      toks.push_back({Token::Kind::Ident, src.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < n && src[j] == '.' && j + 1 < n && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      toks.push_back({Token::Kind::Number, src.substr(i, j - i), i});
      i = j;
      continue;
    }
    auto starts = [&](const char* s) {
      return src.compare(i, std::char_traits<char>::length(s), s) == 0;
    };
    static const char* multi[] = {"||[", "]||", "[](", "-->", ":=", "++", "|>",
                                  "&&",  "||",  "<=", ">=", "==", "!="};
    bool matched = false;
    for (auto* m : multi) {
      if (starts(m)) {
        sym(m);
        i += std::char_traits<char>::length(m);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("?!;()*<>&=,+-/").find(c) != std::string::npos) {
      sym(std::string(1, c));
      ++i;
      continue;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i));
  }
  toks.push_back({Token::Kind::End, "", n});
  return toks;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  ProcPtr parse_proc() {
    ProcPtr p = parse_parallel();
    expect_end();
    return p;
  }

  ExprPtr parse_expr_only() {
    ExprPtr e = parse_expr();
    expect_end();
    return e;
  }

  BExprPtr parse_bexpr_only() {
    BExprPtr b = parse_bor();
    expect_end();
    return b;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  bool at_sym(const std::string& s) const {
    return cur().kind == Token::Kind::Sym && cur().text == s;
  }
  bool at_kw(const std::string& s) const {
    return cur().kind == Token::Kind::Ident && cur().text == s;
  }
  bool eat_sym(const std::string& s) {
    if (!at_sym(s)) return false;
    ++pos_;
    return true;
  }
  bool eat_kw(const std::string& s) {
    if (!at_kw(s)) return false;
    ++pos_;
    return true;
  }
  void expect_sym(const std::string& s) {
    if (!eat_sym(s)) fail("expected '" + s + "'");
  }
  void expect_kw(const std::string& s) {
    if (!eat_kw(s)) fail("expected '" + s + "'");
  }
  std::string expect_ident() {
    if (cur().kind != Token::Kind::Ident) fail("expected identifier");
    return toks_[pos_++].text;
  }
  void expect_end() {
    if (cur().kind != Token::Kind::End) fail("trailing input");
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at offset " + std::to_string(cur().pos) +
                     (cur().text.empty() ? "" : " (near '" + cur().text + "')"));
  }

  ProcPtr parse_parallel() {
    ProcPtr lhs = parse_ichoice();
    if (eat_sym("||[")) {
      std::set<std::string> cs;
      cs.insert(expect_ident());
      while (eat_sym(",")) cs.insert(expect_ident());
      expect_sym("]||");
      return pparallel(lhs, std::move(cs), parse_parallel());
    }
    return lhs;
  }

  ProcPtr parse_ichoice() {
    ProcPtr lhs = parse_seq();
    if (eat_sym("++")) return pichoice(lhs, parse_ichoice());
    return lhs;
  }

  ProcPtr parse_seq() {
    ProcPtr lhs = parse_atom();
    if (eat_sym(";")) return pseq(lhs, parse_seq());
    return lhs;
  }

  ProcPtr parse_atom() {
    if (eat_kw("skip")) return pskip();
    if (eat_kw("wait")) return pwait(parse_expr());
    if (eat_kw("if")) {
      BExprPtr b = parse_bor();
      expect_kw("then");
      ProcPtr t = parse_parallel();
      expect_kw("else");
      ProcPtr e = parse_parallel();
      expect_kw("endif");
      return pcond(b, t, e);
    }
    if (eat_sym("(")) {
      ProcPtr p = parse_parallel();
      expect_sym(")");
      if (eat_sym("*")) return prep(p);
      return p;
    }
    if (at_sym("<")) return parse_ode_or_interrupt();
    std::string id = expect_ident();
    if (eat_sym(":=")) return passign(id, parse_expr());
    if (eat_sym("?")) return pinput(id, expect_ident());
    if (eat_sym("!")) return poutput(id, parse_expr());
    fail("expected ':=', '?' or '!' after identifier");
  }

  ProcPtr parse_ode_or_interrupt() {
    expect_sym("<");
    std::vector<std::pair<std::string, ExprPtr>> fields;
    do {
      std::string name = expect_ident();
      if (name.size() < 5 || name.substr(name.size() - 4) != "_dot")
        fail("ODE variable must end in _dot");
      expect_sym("=");
      fields.emplace_back(name.substr(0, name.size() - 4), parse_expr());
    } while (eat_sym(","));
    expect_sym("&");
    BExprPtr dom = parse_bor();
    expect_sym(">");
    if (!eat_sym("|>")) return pode(std::move(fields), dom);
    expect_sym("[](");
    std::vector<InterruptBranch> brs;
    do {
      std::string ch = expect_ident();
      CommGuard g;
      g.ch = ch;
      if (eat_sym("?")) {
        g.dir = Dir::In;
        g.var = expect_ident();
      } else if (eat_sym("!")) {
        g.dir = Dir::Out;
        g.expr = parse_expr();
      } else {
        fail("expected '?' or '!' in interrupt branch");
      }
      expect_sym("-->");
      brs.push_back({std::move(g), parse_ichoice()});
    } while (eat_sym(","));
    expect_sym(")");
    return pinterrupt(std::move(fields), dom, std::move(brs));
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (eat_sym("+")) lhs = eadd(lhs, parse_term());
      else if (eat_sym("-")) lhs = esub(lhs, parse_term());
      else return lhs;
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      Expr::Kind k;
      if (eat_sym("*")) k = Expr::Kind::Mul;
      else if (eat_sym("/")) k = Expr::Kind::Div;
      else return lhs;
      ExprPtr rhs = parse_factor();
      // keep rational literals exact
      if (k == Expr::Kind::Div && lhs->kind == Expr::Kind::Const &&
          rhs->kind == Expr::Kind::Const && rhs->value != Rat(0))
        lhs = econst(lhs->value / rhs->value);
      else
        lhs = ebin(k, lhs, rhs);
    }
  }

  ExprPtr parse_factor() {
    if (eat_sym("-")) {
      ExprPtr e = parse_factor();
      if (e->kind == Expr::Kind::Const) return econst(-e->value);
      return eneg(e);
    }
    if (eat_sym("(")) {
      ExprPtr e = parse_expr();
      expect_sym(")");
      return e;
    }
    if (cur().kind == Token::Kind::Number) return econst(rat_from_string(toks_[pos_++].text));
    if (cur().kind == Token::Kind::Ident) return evar(toks_[pos_++].text);
    fail("expected expression");
  }

  BExprPtr parse_bor() {
    BExprPtr lhs = parse_band();
    if (eat_sym("||")) return bor(lhs, parse_bor());
    return lhs;
  }

  BExprPtr parse_band() {
    BExprPtr lhs = parse_batom();
    if (eat_sym("&&")) return band(lhs, parse_band());
    return lhs;
  }

  BExprPtr parse_batom() {
    if (eat_kw("true")) return btrue();
    if (eat_kw("false")) return bfalse();
    if (eat_sym("!")) return bnot(parse_batom());
    if (at_sym("(")) {
      // could be a parenthesized bexpr or the lhs of a comparison
      size_t save = pos_;
      try {
        return parse_cmp();
      } catch (const ParseError&) {
        pos_ = save;
      }
      expect_sym("(");
      BExprPtr b = parse_bor();
      expect_sym(")");
      return b;
    }
    return parse_cmp();
  }

  BExprPtr parse_cmp() {
    ExprPtr lhs = parse_expr();
    BExpr::Op op;
    if (eat_sym("<=")) op = BExpr::Op::Le;
    else if (eat_sym(">=")) op = BExpr::Op::Ge;
    else if (eat_sym("==")) op = BExpr::Op::Eq;
    else if (eat_sym("!=")) op = BExpr::Op::Ne;
    else if (eat_sym("<")) op = BExpr::Op::Lt;
    else if (eat_sym(">")) op = BExpr::Op::Gt;
    else fail("expected comparison operator");
    return bcmp(op, lhs, parse_expr());
  }
};

}  // namespace detail

inline ProcPtr parse_process(const std::string& src) { return detail::Parser(src).parse_proc(); }
inline ExprPtr parse_expr(const std::string& src) { return detail::Parser(src).parse_expr_only(); }
inline BExprPtr parse_bexpr(const std::string& src) { return detail::Parser(src).parse_bexpr_only(); }

}  // namespace hcsp
