#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "inet/ast.hpp"
#include "inet/diag.hpp"

namespace inet {

// Recursive-descent parser for the rule language:
//
//   program  := decl*
//   decl     := "agent" Name ["(" type {"," type} ")"] ":" nat ";"
//             | "rule" pattern "><" pattern ["if" expr] "=>" netExpr ";"
//             | "net" Name "=" netExpr ";"
//   pattern  := Name ["(" var {"," var} ")"] ["[" attrVar {"," attrVar} "]"]
//   netExpr  := [equation {"," equation}]
//   equation := term "~" term
//   term     := Name ["(" term {"," term} ")"] ["[" expr {"," expr} "]"]
//
// `#` starts a comment running to end of line. Patterns bind only plain
// variables: nested patterns, variadic agents, generic rules and global
// variables are rejected with targeted diagnostics.

namespace lex {

enum class Tok : uint8_t {
  End, Ident, IntLit, FloatLit, CharLit, StringLit,
  LParen, RParen, LBracket, RBracket, Comma, Semi, Colon, Tilde,
  Interact, Arrow, Assign,
  Plus, Minus, Star, Slash,
  Lt, Le, Gt, Ge, EqEq, Ne,
  Ellipsis, Dollar,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Value lit;
  SourcePos pos;
};

class Lexer {
 public:
  Lexer(std::string_view src, std::string file)
      : src_(src), file_(std::move(file)) {}

  Token next() {
    skip_ws();
    Token t;
    t.pos = pos_;
    if (i_ >= src_.size()) return t;
    char c = src_[i_];
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t start = i_;
      while (i_ < src_.size() &&
             (std::isalnum((unsigned char)src_[i_]) || src_[i_] == '_' ||
              src_[i_] == '\''))
        advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, i_ - start));
      return t;
    }
    if (std::isdigit((unsigned char)c)) return lex_number(t);
    switch (c) {
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case '[': advance(); t.kind = Tok::LBracket; return t;
      case ']': advance(); t.kind = Tok::RBracket; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case ';': advance(); t.kind = Tok::Semi; return t;
      case ':': advance(); t.kind = Tok::Colon; return t;
      case '~': advance(); t.kind = Tok::Tilde; return t;
      case '$': advance(); t.kind = Tok::Dollar; return t;
      case '+': advance(); t.kind = Tok::Plus; return t;
      case '-': advance(); t.kind = Tok::Minus; return t;
      case '*': advance(); t.kind = Tok::Star; return t;
      case '/': advance(); t.kind = Tok::Slash; return t;
      case '.':
        if (src_.substr(i_, 3) == "...") {
          advance(); advance(); advance();
          t.kind = Tok::Ellipsis;
          return t;
        }
        break;
      case '>':
        advance();
        if (peek() == '<') { advance(); t.kind = Tok::Interact; return t; }
        if (peek() == '=') { advance(); t.kind = Tok::Ge; return t; }
        t.kind = Tok::Gt;
        return t;
      case '<':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::Le; return t; }
        t.kind = Tok::Lt;
        return t;
      case '=':
        advance();
        if (peek() == '>') { advance(); t.kind = Tok::Arrow; return t; }
        if (peek() == '=') { advance(); t.kind = Tok::EqEq; return t; }
        t.kind = Tok::Assign;
        return t;
      case '!':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::Ne; return t; }
        throw ParseError(file_, t.pos, "stray '!'");
      case '\'': return lex_char(t);
      case '"': return lex_string(t);
      default: break;
    }
    throw ParseError(file_, t.pos, std::string("unexpected character '") + c + "'");
  }

 private:
  char peek() const { return i_ < src_.size() ? src_[i_] : '\0'; }

  void advance() {
    if (i_ < src_.size()) {
      if (src_[i_] == '\n') {
        pos_.line++;
        pos_.col = 1;
      } else {
        pos_.col++;
      }
      i_++;
    }
  }

  void skip_ws() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (std::isspace((unsigned char)c)) {
        advance();
      } else {
        break;
      }
    }
  }

  Token& lex_number(Token& t) {
    size_t start = i_;
    while (std::isdigit((unsigned char)peek())) advance();
    bool is_float = false;
    if (peek() == '.' && i_ + 1 < src_.size() &&
        std::isdigit((unsigned char)src_[i_ + 1])) {
      is_float = true;
      advance();
      while (std::isdigit((unsigned char)peek())) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      size_t save = i_;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (std::isdigit((unsigned char)peek())) {
        is_float = true;
        while (std::isdigit((unsigned char)peek())) advance();
      } else {
        i_ = save; // not an exponent; leave 'e...' for the next token
      }
    }
    std::string text(src_.substr(start, i_ - start));
    if (is_float) {
      t.kind = Tok::FloatLit;
      t.lit = std::stod(text);
    } else {
      t.kind = Tok::IntLit;
      t.lit = Int(text);
    }
    t.text = std::move(text);
    return t;
  }

  char lex_escape(SourcePos at) {
    advance(); // backslash
    char c = peek();
    advance();
    switch (c) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case '0': return '\0';
      case '\\': return '\\';
      case '\'': return '\'';
      case '"': return '"';
      default:
        throw ParseError(file_, at, std::string("bad escape \\") + c);
    }
  }

  Token& lex_char(Token& t) {
    advance(); // opening quote
    char c;
    if (peek() == '\\') {
      c = lex_escape(t.pos);
    } else {
      c = peek();
      advance();
    }
    if (peek() != '\'') throw ParseError(file_, t.pos, "unterminated char literal");
    advance();
    t.kind = Tok::CharLit;
    t.lit = c;
    return t;
  }

  Token& lex_string(Token& t) {
    advance(); // opening quote
    std::string s;
    while (true) {
      if (i_ >= src_.size() || peek() == '\n')
        throw ParseError(file_, t.pos, "unterminated string literal");
      if (peek() == '"') { advance(); break; }
      if (peek() == '\\') {
        s += lex_escape(t.pos);
      } else {
        s += peek();
        advance();
      }
    }
    t.kind = Tok::StringLit;
    t.lit = std::move(s);
    return t;
  }

  std::string_view src_;
  std::string file_;
  size_t i_ = 0;
  SourcePos pos_{1, 1};
};

} // namespace lex

class Parser {
 public:
  Parser(std::string_view src, std::string file)
      : lex_(src, file), file_(std::move(file)) {
    bump();
  }

  Program parse_program() {
    Program prog;
    prog.file = file_;
    while (tok_.kind != lex::Tok::End) {
      if (!at_ident()) fail("expected a declaration");
      if (tok_.text == "agent") {
        prog.agents.push_back(parse_agent());
      } else if (tok_.text == "rule") {
        prog.rules.push_back(parse_rule());
      } else if (tok_.text == "net") {
        prog.nets.push_back(parse_net());
      } else if (tok_.text == "global") {
        throw UnsupportedFeatureError(
            file_, tok_.pos, "global variables",
            "global variables are not supported: shared globals would "
            "serialize otherwise independent reductions");
      } else {
        fail("expected 'agent', 'rule' or 'net', got '" + tok_.text + "'");
      }
    }
    return prog;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(file_, tok_.pos, msg);
  }

  void bump() { tok_ = lex_.next(); }

  bool at(lex::Tok k) const { return tok_.kind == k; }
  bool at_ident() const { return tok_.kind == lex::Tok::Ident; }
  bool at_keyword(const char* kw) const { return at_ident() && tok_.text == kw; }

  void expect(lex::Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    bump();
  }

  std::string expect_name(const char* what) {
    if (at(lex::Tok::Dollar))
      throw UnsupportedFeatureError(file_, tok_.pos, "generic rules",
                                    "generic rules are not supported");
    if (!at_ident()) fail(std::string("expected ") + what);
    std::string n = tok_.text;
    bump();
    return n;
  }

  AttrType parse_type() {
    if (!at_ident()) fail("expected an attribute type");
    std::string n = tok_.text;
    SourcePos pos = tok_.pos;
    bump();
    if (n == "int") return AttrType::Int;
    if (n == "bool") return AttrType::Bool;
    if (n == "float") return AttrType::Float;
    if (n == "char") return AttrType::Char;
    if (n == "string" || n == "String") return AttrType::String;
    throw ParseError(file_, pos, "unknown attribute type '" + n + "'");
  }

  AgentDecl parse_agent() {
    AgentDecl d;
    d.pos = tok_.pos;
    bump(); // agent
    d.name = expect_name("an agent name");
    if (at(lex::Tok::LParen)) {
      bump();
      if (!at(lex::Tok::RParen)) {
        d.attr_types.push_back(parse_type());
        while (at(lex::Tok::Comma)) {
          bump();
          d.attr_types.push_back(parse_type());
        }
      }
      expect(lex::Tok::RParen, "')'");
    }
    expect(lex::Tok::Colon, "':' before the agent arity");
    if (at(lex::Tok::Ellipsis) || at(lex::Tok::Star))
      throw UnsupportedFeatureError(file_, tok_.pos, "variadic agents",
                                    "variadic agents are not supported");
    if (!at(lex::Tok::IntLit)) fail("expected the number of auxiliary ports");
    d.aux_arity = (int)std::get<Int>(tok_.lit);
    bump();
    expect(lex::Tok::Semi, "';'");
    return d;
  }

  APattern parse_pattern() {
    APattern p;
    p.pos = tok_.pos;
    p.agent = expect_name("an agent name in a rule pattern");
    if (at(lex::Tok::LParen)) {
      bump();
      if (!at(lex::Tok::RParen)) {
        parse_pattern_var(p);
        while (at(lex::Tok::Comma)) {
          bump();
          parse_pattern_var(p);
        }
      }
      expect(lex::Tok::RParen, "')'");
    }
    if (at(lex::Tok::LBracket)) {
      bump();
      if (!at(lex::Tok::RBracket)) {
        p.attr_vars.push_back(expect_name("an attribute variable"));
        while (at(lex::Tok::Comma)) {
          bump();
          p.attr_vars.push_back(expect_name("an attribute variable"));
        }
      }
      expect(lex::Tok::RBracket, "']'");
    }
    return p;
  }

  void parse_pattern_var(APattern& p) {
    if (at(lex::Tok::Ellipsis))
      throw UnsupportedFeatureError(file_, tok_.pos, "variadic agents",
                                    "variadic agents are not supported");
    if (at(lex::Tok::IntLit) || at(lex::Tok::CharLit) || at(lex::Tok::StringLit))
      throw UnsupportedFeatureError(
          file_, tok_.pos, "nested pattern",
          "literal patterns are not supported; bind a variable and match with "
          "a conditional rule");
    SourcePos pos = tok_.pos;
    std::string v = expect_name("a port variable");
    if (at(lex::Tok::LParen) || at(lex::Tok::LBracket))
      throw UnsupportedFeatureError(
          file_, pos, "nested pattern",
          "nested patterns are not supported; introduce an auxiliary agent "
          "that matches '" + v + "' in a second rule");
    p.port_vars.push_back(std::move(v));
  }

  ATerm parse_term() {
    ATerm t;
    t.pos = tok_.pos;
    t.head = expect_name("an agent or variable name");
    if (at(lex::Tok::LParen)) {
      t.has_parens = true;
      bump();
      if (!at(lex::Tok::RParen)) {
        t.args.push_back(parse_term());
        while (at(lex::Tok::Comma)) {
          bump();
          t.args.push_back(parse_term());
        }
      }
      expect(lex::Tok::RParen, "')'");
    }
    if (at(lex::Tok::LBracket)) {
      bump();
      if (!at(lex::Tok::RBracket)) {
        t.attrs.push_back(parse_expr());
        while (at(lex::Tok::Comma)) {
          bump();
          t.attrs.push_back(parse_expr());
        }
      }
      expect(lex::Tok::RBracket, "']'");
    }
    return t;
  }

  std::vector<AEquation> parse_net_expr() {
    std::vector<AEquation> eqs;
    if (at(lex::Tok::Semi)) return eqs; // empty right-hand side
    while (true) {
      AEquation eq;
      eq.lhs = parse_term();
      expect(lex::Tok::Tilde, "'~'");
      eq.rhs = parse_term();
      eqs.push_back(std::move(eq));
      if (!at(lex::Tok::Comma)) break;
      bump();
    }
    return eqs;
  }

  RuleDecl parse_rule() {
    RuleDecl r;
    r.pos = tok_.pos;
    bump(); // rule
    r.first = parse_pattern();
    expect(lex::Tok::Interact, "'><'");
    r.second = parse_pattern();
    if (at_keyword("if")) {
      bump();
      r.guard = std::move(*parse_expr_ptr());
    }
    expect(lex::Tok::Arrow, "'=>'");
    r.rhs = parse_net_expr();
    expect(lex::Tok::Semi, "';'");
    return r;
  }

  NetDecl parse_net() {
    NetDecl n;
    n.pos = tok_.pos;
    bump(); // net
    n.name = expect_name("a net name");
    expect(lex::Tok::Assign, "'='");
    n.equations = parse_net_expr();
    expect(lex::Tok::Semi, "';'");
    return n;
  }

  // expression precedence: or < and < not < comparison < additive <
  // multiplicative < unary minus < atom
  AExpr parse_expr() { return std::move(*parse_expr_ptr()); }

  std::unique_ptr<AExpr> parse_expr_ptr() { return parse_or(); }

  std::unique_ptr<AExpr> mk_bin(ExprOp op, SourcePos pos,
                                std::unique_ptr<AExpr> a,
                                std::unique_ptr<AExpr> b) {
    auto e = std::make_unique<AExpr>(op, pos);
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
  }

  std::unique_ptr<AExpr> parse_or() {
    auto e = parse_and();
    while (at_keyword("or")) {
      SourcePos pos = tok_.pos;
      bump();
      e = mk_bin(ExprOp::Or, pos, std::move(e), parse_and());
    }
    return e;
  }

  std::unique_ptr<AExpr> parse_and() {
    auto e = parse_not();
    while (at_keyword("and")) {
      SourcePos pos = tok_.pos;
      bump();
      e = mk_bin(ExprOp::And, pos, std::move(e), parse_not());
    }
    return e;
  }

  std::unique_ptr<AExpr> parse_not() {
    if (at_keyword("not")) {
      auto e = std::make_unique<AExpr>(ExprOp::Not, tok_.pos);
      bump();
      e->a = parse_not();
      return e;
    }
    return parse_cmp();
  }

  std::unique_ptr<AExpr> parse_cmp() {
    auto e = parse_add();
    ExprOp op;
    switch (tok_.kind) {
      case lex::Tok::Lt: op = ExprOp::Lt; break;
      case lex::Tok::Le: op = ExprOp::Le; break;
      case lex::Tok::Gt: op = ExprOp::Gt; break;
      case lex::Tok::Ge: op = ExprOp::Ge; break;
      case lex::Tok::EqEq: op = ExprOp::Eq; break;
      case lex::Tok::Ne: op = ExprOp::Ne; break;
      default: return e;
    }
    SourcePos pos = tok_.pos;
    bump();
    return mk_bin(op, pos, std::move(e), parse_add());
  }

  std::unique_ptr<AExpr> parse_add() {
    auto e = parse_mul();
    while (at(lex::Tok::Plus) || at(lex::Tok::Minus)) {
      ExprOp op = at(lex::Tok::Plus) ? ExprOp::Add : ExprOp::Sub;
      SourcePos pos = tok_.pos;
      bump();
      e = mk_bin(op, pos, std::move(e), parse_mul());
    }
    return e;
  }

  std::unique_ptr<AExpr> parse_mul() {
    auto e = parse_unary();
    while (at(lex::Tok::Star) || at(lex::Tok::Slash) || at_keyword("mod")) {
      ExprOp op = at(lex::Tok::Star)    ? ExprOp::Mul
                  : at(lex::Tok::Slash) ? ExprOp::Div
                                        : ExprOp::Mod;
      SourcePos pos = tok_.pos;
      bump();
      e = mk_bin(op, pos, std::move(e), parse_unary());
    }
    return e;
  }

  std::unique_ptr<AExpr> parse_unary() {
    if (at(lex::Tok::Minus)) {
      auto e = std::make_unique<AExpr>(ExprOp::Neg, tok_.pos);
      bump();
      e->a = parse_unary();
      return e;
    }
    return parse_atom();
  }

  std::unique_ptr<AExpr> parse_atom() {
    auto e = std::make_unique<AExpr>(ExprOp::Lit, tok_.pos);
    switch (tok_.kind) {
      case lex::Tok::IntLit:
      case lex::Tok::FloatLit:
      case lex::Tok::CharLit:
      case lex::Tok::StringLit:
        e->lit = tok_.lit;
        bump();
        return e;
      case lex::Tok::LParen: {
        bump();
        auto inner = parse_expr_ptr();
        expect(lex::Tok::RParen, "')'");
        return inner;
      }
      case lex::Tok::Ident:
        if (tok_.text == "true" || tok_.text == "false") {
          e->lit = (tok_.text == "true");
          bump();
          return e;
        }
        e->op = ExprOp::Var;
        e->var = tok_.text;
        bump();
        return e;
      default:
        fail("expected an expression");
    }
  }

  lex::Lexer lex_;
  std::string file_;
  lex::Token tok_;
};

inline Program parse(std::string_view source, std::string file = "<input>") {
  return Parser(source, std::move(file)).parse_program();
}

} // namespace inet
