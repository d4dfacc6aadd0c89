#include "ipcat/parse.hpp"

#include <vector>

namespace ipcat::parse {

namespace {

enum class Tok {
  Ident,
  Num,
  Lambda,     // "\"
  SlashBack,  // "/\", type abstraction or conjunction depending on context
  BackSlash,  // "\/"
  Arrow,      // "->"
  FatArrow,   // "=>"
  Dot,
  Colon,
  Comma,
  Pipe,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  Lt,
  Gt,
  Bot,  // "_|_"
  KwCase,
  KwOf,
  KwInl,
  KwInr,
  KwAbort,
  KwForall,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    int startCol = col;
    auto advance = [&](std::size_t n) {
      i += n;
      col += static_cast<int>(n);
    };
    if (text.compare(i, 3, "_|_") == 0 &&
        (i + 3 >= text.size() || !ident_char(text[i + 3]))) {
      out.push_back({Tok::Bot, "_|_", line, startCol});
      advance(3);
      continue;
    }
    if (c == '\\') {
      if (i + 1 < text.size() && text[i + 1] == '/') {
        out.push_back({Tok::BackSlash, "\\/", line, startCol});
        advance(2);
      } else {
        out.push_back({Tok::Lambda, "\\", line, startCol});
        advance(1);
      }
      continue;
    }
    if (c == '/') {
      if (i + 1 < text.size() && text[i + 1] == '\\') {
        out.push_back({Tok::SlashBack, "/\\", line, startCol});
        advance(2);
        continue;
      }
      throw SyntaxError(line, startCol, "stray '/'");
    }
    if (c == '-') {
      if (i + 1 < text.size() && text[i + 1] == '>') {
        out.push_back({Tok::Arrow, "->", line, startCol});
        advance(2);
        continue;
      }
      throw SyntaxError(line, startCol, "stray '-'");
    }
    if (c == '=') {
      if (i + 1 < text.size() && text[i + 1] == '>') {
        out.push_back({Tok::FatArrow, "=>", line, startCol});
        advance(2);
        continue;
      }
      throw SyntaxError(line, startCol, "stray '='");
    }
    switch (c) {
      case '.':
        out.push_back({Tok::Dot, ".", line, startCol});
        advance(1);
        continue;
      case ':':
        out.push_back({Tok::Colon, ":", line, startCol});
        advance(1);
        continue;
      case ',':
        out.push_back({Tok::Comma, ",", line, startCol});
        advance(1);
        continue;
      case '|':
        out.push_back({Tok::Pipe, "|", line, startCol});
        advance(1);
        continue;
      case '(':
        out.push_back({Tok::LParen, "(", line, startCol});
        advance(1);
        continue;
      case ')':
        out.push_back({Tok::RParen, ")", line, startCol});
        advance(1);
        continue;
      case '[':
        out.push_back({Tok::LBrack, "[", line, startCol});
        advance(1);
        continue;
      case ']':
        out.push_back({Tok::RBrack, "]", line, startCol});
        advance(1);
        continue;
      case '{':
        out.push_back({Tok::LBrace, "{", line, startCol});
        advance(1);
        continue;
      case '}':
        out.push_back({Tok::RBrace, "}", line, startCol});
        advance(1);
        continue;
      case '<':
        out.push_back({Tok::Lt, "<", line, startCol});
        advance(1);
        continue;
      case '>':
        out.push_back({Tok::Gt, ">", line, startCol});
        advance(1);
        continue;
      default:
        break;
    }
    if (c >= '0' && c <= '9') {
      std::size_t j = i;
      while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
      out.push_back({Tok::Num, text.substr(i, j - i), line, startCol});
      advance(j - i);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word = text.substr(i, j - i);
      Tok k = Tok::Ident;
      if (word == "case")
        k = Tok::KwCase;
      else if (word == "of")
        k = Tok::KwOf;
      else if (word == "inl")
        k = Tok::KwInl;
      else if (word == "inr")
        k = Tok::KwInr;
      else if (word == "abort")
        k = Tok::KwAbort;
      else if (word == "forall")
        k = Tok::KwForall;
      out.push_back({k, std::move(word), line, startCol});
      advance(j - i);
      continue;
    }
    throw SyntaxError(line, startCol, std::string("unexpected character '") +
                                          c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;

  const Token& peek() const { return toks[pos]; }
  const Token& get() { return toks[pos++]; }
  bool at(Tok k) const { return toks[pos].kind == k; }
  bool eat(Tok k) {
    if (!at(k)) return false;
    ++pos;
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return get();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.line, t.col, msg + ", got " + got);
  }

  // ------------------------------------------------------------ ipc types

  ipc::TypeRef itype() {
    ipc::TypeRef l = itype_or();
    if (eat(Tok::Arrow)) return ipc::imp(std::move(l), itype());
    return l;
  }
  ipc::TypeRef itype_or() {
    ipc::TypeRef l = itype_and();
    while (eat(Tok::BackSlash)) l = ipc::disj(std::move(l), itype_and());
    return l;
  }
  ipc::TypeRef itype_and() {
    ipc::TypeRef l = itype_atom();
    while (eat(Tok::SlashBack)) l = ipc::conj(std::move(l), itype_atom());
    return l;
  }
  ipc::TypeRef itype_atom() {
    if (at(Tok::Ident)) return ipc::tvar(get().text);
    if (eat(Tok::Bot)) return ipc::bot();
    if (eat(Tok::LParen)) {
      ipc::TypeRef t = itype();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail("expected a type");
  }

  // ------------------------------------------------------------ ipc terms

  bool at_operand_start() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::LParen:
      case Tok::Lt:
      case Tok::KwInl:
      case Tok::KwInr:
      case Tok::KwAbort:
      case Tok::KwCase:
        return true;
      default:
        return false;
    }
  }

  ipc::TermRef iterm() {
    if (eat(Tok::Lambda)) {
      std::string x = expect(Tok::Ident, "a variable").text;
      expect(Tok::Colon, "':'");
      ipc::TypeRef a = itype();
      expect(Tok::Dot, "'.'");
      return ipc::lam(std::move(x), std::move(a), iterm());
    }
    return iapp();
  }

  ipc::TermRef iapp() {
    if (!at_operand_start()) fail("expected a term");
    ipc::TermRef t = ioperand();
    while (at_operand_start()) t = ipc::app(std::move(t), ioperand());
    return t;
  }

  ipc::TermRef ioperand() {
    ipc::TermRef t = iatom();
    for (;;) {
      if (at(Tok::Dot)) {
        ++pos;
        Token n = expect(Tok::Num, "1 or 2");
        if (n.text != "1" && n.text != "2")
          throw SyntaxError(n.line, n.col, "projection index must be 1 or 2");
        t = ipc::proj(n.text == "1" ? 1 : 2, std::move(t));
        continue;
      }
      break;
    }
    return t;
  }

  ipc::TermRef iatom() {
    if (at(Tok::Ident)) return ipc::var(get().text);
    if (eat(Tok::LParen)) {
      ipc::TermRef t = iterm();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (eat(Tok::Lt)) {
      ipc::TermRef a = iterm();
      expect(Tok::Comma, "','");
      ipc::TermRef b = iterm();
      expect(Tok::Gt, "'>'");
      return ipc::pair(std::move(a), std::move(b));
    }
    if (at(Tok::KwInl) || at(Tok::KwInr)) {
      int index = get().kind == Tok::KwInl ? 1 : 2;
      expect(Tok::LBrack, "'['");
      ipc::TypeRef l = itype();
      expect(Tok::Pipe, "'|'");
      ipc::TypeRef r = itype();
      expect(Tok::RBrack, "']'");
      return ipc::inj(index, ioperand(), std::move(l), std::move(r));
    }
    if (eat(Tok::KwAbort)) {
      expect(Tok::LBrack, "'['");
      ipc::TypeRef a = itype();
      expect(Tok::RBrack, "']'");
      return ipc::abt(ioperand(), std::move(a));
    }
    if (eat(Tok::KwCase)) {
      ipc::TermRef scrut = iterm();
      expect(Tok::KwOf, "'of'");
      expect(Tok::LBrace, "'{'");
      std::string x = expect(Tok::Ident, "a variable").text;
      expect(Tok::Colon, "':'");
      ipc::TypeRef xa = itype();
      expect(Tok::FatArrow, "'=>'");
      ipc::TermRef left = iterm();
      expect(Tok::Pipe, "'|'");
      std::string y = expect(Tok::Ident, "a variable").text;
      expect(Tok::Colon, "':'");
      ipc::TypeRef ya = itype();
      expect(Tok::FatArrow, "'=>'");
      ipc::TermRef right = iterm();
      expect(Tok::RBrace, "'}'");
      expect(Tok::Colon, "':'");
      ipc::TypeRef res = itype();
      return ipc::cse(std::move(scrut), std::move(x), std::move(xa),
                      std::move(left), std::move(y), std::move(ya),
                      std::move(right), std::move(res));
    }
    fail("expected a term");
  }

  // ------------------------------------------------------------ fat types

  fat::TypeRef ftype() {
    if (eat(Tok::KwForall)) {
      std::string x = expect(Tok::Ident, "a type variable").text;
      expect(Tok::Dot, "'.'");
      return fat::forall(std::move(x), ftype());
    }
    fat::TypeRef l = ftype_and();
    if (eat(Tok::Arrow)) return fat::imp(std::move(l), ftype());
    return l;
  }
  fat::TypeRef ftype_and() {
    fat::TypeRef l = ftype_atom();
    while (eat(Tok::SlashBack)) l = fat::conj(std::move(l), ftype_atom());
    return l;
  }
  fat::TypeRef ftype_atom() {
    if (at(Tok::Ident)) return fat::tvar(get().text);
    if (eat(Tok::LParen)) {
      fat::TypeRef t = ftype();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail("expected a type");
  }

  // ------------------------------------------------------------ fat terms

  bool at_foperand_start() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::LParen:
      case Tok::Lt:
        return true;
      default:
        return false;
    }
  }

  fat::TermRef fterm() {
    if (eat(Tok::Lambda)) {
      std::string x = expect(Tok::Ident, "a variable").text;
      expect(Tok::Colon, "':'");
      fat::TypeRef a = ftype();
      expect(Tok::Dot, "'.'");
      return fat::lam(std::move(x), std::move(a), fterm());
    }
    if (eat(Tok::SlashBack)) {
      std::string x = expect(Tok::Ident, "a type variable").text;
      expect(Tok::Dot, "'.'");
      return fat::tylam(std::move(x), fterm());
    }
    if (!at_foperand_start()) fail("expected a term");
    fat::TermRef t = foperand();
    while (at_foperand_start()) t = fat::app(std::move(t), foperand());
    return t;
  }

  fat::TermRef foperand() {
    fat::TermRef t = fatom();
    for (;;) {
      if (at(Tok::Dot)) {
        ++pos;
        Token n = expect(Tok::Num, "1 or 2");
        if (n.text != "1" && n.text != "2")
          throw SyntaxError(n.line, n.col, "projection index must be 1 or 2");
        t = fat::proj(n.text == "1" ? 1 : 2, std::move(t));
        continue;
      }
      if (at(Tok::LBrack)) {
        Token open = get();
        fat::TypeRef a = ftype();
        auto* v = fat::as<fat::TVar>(a);
        if (!v)
          throw SyntaxError(open.line, open.col,
                            "universal instantiation requires a type variable");
        expect(Tok::RBrack, "']'");
        t = fat::tyapp(std::move(t), v->name);
        continue;
      }
      break;
    }
    return t;
  }

  fat::TermRef fatom() {
    if (at(Tok::Ident)) return fat::var(get().text);
    if (eat(Tok::LParen)) {
      fat::TermRef t = fterm();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (eat(Tok::Lt)) {
      fat::TermRef a = fterm();
      expect(Tok::Comma, "','");
      fat::TermRef b = fterm();
      expect(Tok::Gt, "'>'");
      return fat::pair(std::move(a), std::move(b));
    }
    fail("expected a term");
  }
};

Parser make_parser(const std::string& text) { return Parser{lex(text), 0}; }

}  // namespace

ipc::TermRef ipc_term(const std::string& text) {
  Parser p = make_parser(text);
  ipc::TermRef t = p.iterm();
  p.expect(Tok::End, "end of input");
  return t;
}

ipc::TypeRef ipc_type(const std::string& text) {
  Parser p = make_parser(text);
  ipc::TypeRef t = p.itype();
  p.expect(Tok::End, "end of input");
  return t;
}

fat::TermRef fat_term(const std::string& text) {
  Parser p = make_parser(text);
  fat::TermRef t = p.fterm();
  p.expect(Tok::End, "end of input");
  return t;
}

fat::TypeRef fat_type(const std::string& text) {
  Parser p = make_parser(text);
  fat::TypeRef t = p.ftype();
  p.expect(Tok::End, "end of input");
  return t;
}

}  // namespace ipcat::parse
