#include "selcalc/syntax.hpp"

#include <cctype>
#include <set>

namespace selcalc {

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const std::set<std::string> kKeywords{"or",  "if", "then", "else", "fun",  "let",  "in",
                                      "fst", "snd", "tt",  "ff",   "oplus", "mode", "base"};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j + 1 < src.size() && src[j] == '/' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      out.push_back({Tok::Number, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    static const char* two[] = {"->", "<=", "==", "+["};
    bool matched = false;
    for (const char* s : two) {
      if (src.compare(i, 2, s) == 0) {
        out.push_back({Tok::Sym, s, l, cl});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("().,<>:=+*{};[]-").find(c) != std::string::npos) {
      out.push_back({Tok::Sym, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Signature sig) : toks_(std::move(toks)), sig_(std::move(sig)) {}

  Program program() {
    Program p;
    for (;;) {
      if (is_ident("mode")) {
        next();
        std::string m = ident("mode name");
        if (m == "rewards")
          p.mode = Mode::Rewards;
        else if (m == "prob")
          p.mode = Mode::Prob;
        else
          fail("unknown mode '" + m + "'");
        expect(";");
      } else if (is_ident("base")) {
        next();
        std::string name = ident("base type name");
        expect("=");
        expect("{");
        std::vector<std::string> cs{ident("constant name")};
        while (accept(",")) cs.push_back(ident("constant name"));
        expect("}");
        accept(";");
        try {
          sig_.declare(name, cs);
        } catch (const TypeError& e) {
          fail(e.what());
        }
      } else {
        break;
      }
    }
    p.term = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after end of term");
    p.sig = sig_;
    return p;
  }

  TermPtr whole_term() {
    TermPtr t = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after end of term");
    return t;
  }

  TypePtr whole_type() {
    TypePtr t = type();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after end of type");
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Signature sig_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().line, peek().column); }

  bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool is_ident(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }

  bool accept(const char* s) {
    if (is_sym(s) || is_ident(s)) {
      next();
      return true;
    }
    return false;
  }

  void expect(const char* s) {
    if (!accept(s)) fail(std::string("expected '") + s + "' but found '" + peek().text + "'");
  }

  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail(std::string("expected ") + what);
    return next().text;
  }

  Rational rational() {
    bool neg = accept("-");
    if (peek().kind != Tok::Number) fail("expected a rational literal");
    Token t = next();
    try {
      Rational q = parse_rational(t.text);
      return neg ? Rational(-q) : q;
    } catch (const Error& e) {
      throw SyntaxError(e.what(), t.line, t.column);
    }
  }

  Rational probability() {
    Token at = peek();
    Rational p = rational();
    if (p < 0 || p > 1) throw SyntaxError("probability " + to_string(p) + " outside [0,1]", at.line, at.column);
    return p;
  }

  TypePtr type() {
    TypePtr t = prod();
    if (accept("->")) return arrow_type(t, type());
    return t;
  }

  TypePtr prod() {
    TypePtr t = type_atom();
    while (accept("*")) t = prod_type(t, type_atom());
    return t;
  }

  TypePtr type_atom() {
    if (accept("(")) {
      TypePtr t = type();
      expect(")");
      return t;
    }
    std::string name = ident("a type");
    if (name == "Unit") return unit_type();
    if (name == "Bool") return bool_type();
    if (name == "Rew") return rew_type();
    if (!sig_.has_base(name)) fail("unknown base type '" + name + "'");
    return base_type(name);
  }

  TermPtr expr() {
    if (accept("if")) {
      TermPtr c = expr();
      expect("then");
      TermPtr t = expr();
      expect("else");
      return mk_if(c, t, expr());
    }
    if (accept("fun")) {
      expect("(");
      std::string x = ident("a variable");
      expect(":");
      TypePtr ty = type();
      expect(")");
      expect("->");
      return mk_lam(x, ty, expr());
    }
    if (accept("let")) {
      std::string x = ident("a variable");
      expect(":");
      TypePtr ty = type();
      expect("=");
      TermPtr bound = expr();
      expect("in");
      return mk_let(x, ty, bound, expr());
    }
    return or_expr();
  }

  TermPtr or_expr() {
    TermPtr t = choice_expr();
    while (accept("or")) t = mk_or(t, choice_expr());
    return t;
  }

  TermPtr choice_expr() {
    TermPtr t = infix_expr();
    while (accept("+[")) {
      Rational p = probability();
      expect("]");
      t = mk_pchoice(p, t, infix_expr());
    }
    return t;
  }

  TermPtr infix_expr() {
    TermPtr t = reward_expr();
    for (;;) {
      if (accept("+"))
        t = mk_add(t, reward_expr());
      else if (accept("=="))
        t = mk_eq(t, reward_expr());
      else if (accept("<="))
        t = mk_leq(t, reward_expr());
      else
        return t;
    }
  }

  TermPtr reward_expr() {
    TermPtr t = app_expr();
    if (accept(".")) return mk_reward(t, reward_expr());
    return t;
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::Number) return true;
    if (t.kind == Tok::Ident) return !kKeywords.count(t.text) || t.text == "tt" || t.text == "ff" || t.text == "oplus";
    if (t.kind == Tok::Sym)
      return t.text == "(" || t.text == "<" || t.text == "*" || (t.text == "-" && peek(1).kind == Tok::Number);
    return false;
  }

  TermPtr app_expr() {
    TermPtr t;
    if (accept("fst"))
      t = mk_fst(atom());
    else if (accept("snd"))
      t = mk_snd(atom());
    else
      t = atom();
    while (starts_atom()) t = mk_app(t, atom());
    return t;
  }

  TermPtr atom() {
    if (accept("tt")) return mk_tt();
    if (accept("ff")) return mk_ff();
    if (accept("*")) return mk_star();
    if (accept("(")) {
      TermPtr t = expr();
      expect(")");
      return t;
    }
    if (accept("<")) {
      TermPtr a = expr();
      expect(",");
      TermPtr b = expr();
      expect(">");
      return mk_pair(a, b);
    }
    if (accept("oplus")) {
      expect("[");
      Rational p = probability();
      expect("]");
      expect("(");
      TermPtr a = expr();
      expect(",");
      TermPtr b = expr();
      expect(")");
      return mk_oplus(p, a, b);
    }
    if (peek().kind == Tok::Number || is_sym("-")) return mk_rew(rational());
    if (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) {
      std::string name = next().text;
      if (auto c = sig_.lookup(name)) return mk_const(*c);
      return mk_var(name);
    }
    fail("expected a term but found '" + peek().text + "'");
  }
};

}  // namespace

Program parse_program(const std::string& text) { return Parser(lex(text), Signature()).program(); }

TermPtr parse_term(const std::string& text, const Signature& sig) { return Parser(lex(text), sig).whole_term(); }

TypePtr parse_type(const std::string& text, const Signature& sig) { return Parser(lex(text), sig).whole_type(); }

}  // namespace selcalc
