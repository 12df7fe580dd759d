#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pigraph/ast.hpp"
#include "pigraph/errors.hpp"

namespace pigraph {

namespace detail {

enum class Tok {
  Ident,
  Zero,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Less,
  Greater,
  Bang,
  Query,
  Dot,
  Comma,
  Equals,
  Plus,
  ParBar,
  Star,
  Dollar,
  Caret,
  End,
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Zero: return "'0'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Less: return "'<'";
    case Tok::Greater: return "'>'";
    case Tok::Bang: return "'!'";
    case Tok::Query: return "'?'";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::Equals: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::ParBar: return "'||'";
    case Tok::Star: return "'*'";
    case Tok::Dollar: return "'$'";
    case Tok::Caret: return "'^'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

inline const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"free", "restr", "priv", "bind", "tau", "sum", "par"};
  return k;
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  const auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const SourceSpan span{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), span});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
      const auto text = std::string(src.substr(i, j - i));
      if (text != "0") throw SyntaxError(span, "'" + text + "'", {"'0'", "identifier"});
      out.push_back({Tok::Zero, text, span});
      advance(j - i);
      continue;
    }
    if (c == '|') {
      if (i + 1 < src.size() && src[i + 1] == '|') {
        out.push_back({Tok::ParBar, "||", span});
        advance(2);
        continue;
      }
      throw SyntaxError(span, "'|'", {"'||'"});
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '<': kind = Tok::Less; break;
      case '>': kind = Tok::Greater; break;
      case '!': kind = Tok::Bang; break;
      case '?': kind = Tok::Query; break;
      case '.': kind = Tok::Dot; break;
      case ',': kind = Tok::Comma; break;
      case '=': kind = Tok::Equals; break;
      case '+': kind = Tok::Plus; break;
      case '*': kind = Tok::Star; break;
      case '$': kind = Tok::Dollar; break;
      case '^': kind = Tok::Caret; break;
      default: throw SyntaxError(span, "character '" + std::string(1, c) + "'", {"a token"});
    }
    out.push_back({kind, std::string(1, c), span});
    advance(1);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  GraphAst graph() {
    GraphAst g;
    bool seen_free = false, seen_restr = false;
    while (peek().kind == Tok::Ident && (peek().text == "free" || peek().text == "restr")) {
      const Token kw = next();
      bool& seen = kw.text == "free" ? seen_free : seen_restr;
      if (seen)
        throw WellFormednessError(kw.span, "duplicate-declaration",
                                  "'" + kw.text + "' list given twice");
      seen = true;
      (kw.text == "free" ? g.free_names : g.restrictions) = ident_list();
    }
    if (peek().kind != Tok::Star) fail({"'free'", "'restr'", "'*'"});
    g.iterators.push_back(iterator());
    while (accept(Tok::ParBar)) g.iterators.push_back(iterator());
    if (peek().kind != Tok::End) fail({"'||'", describe(Tok::End)});
    return g;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const auto& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.span, std::move(found), std::move(expected));
  }

  Token expect(Tok k) {
    if (peek().kind != k) fail({describe(k)});
    return next();
  }

  bool at_keyword(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

  NameRef plain_ident() {
    const auto t = expect(Tok::Ident);
    if (keywords().contains(t.text))
      throw SyntaxError(t.span, "keyword '" + t.text + "'", {"identifier"});
    return {t.text, t.span, std::nullopt};
  }

  std::vector<NameRef> ident_list() {
    expect(Tok::LParen);
    std::vector<NameRef> out;
    if (accept(Tok::RParen)) return out;
    out.push_back(plain_ident());
    while (accept(Tok::Comma)) out.push_back(plain_ident());
    if (!accept(Tok::RParen)) fail({"','", "')'"});
    return out;
  }

  NameRef name_ref() {
    std::optional<char> sigil;
    const auto span = peek().span;
    if (accept(Tok::Dollar)) sigil = '$';
    else if (accept(Tok::Caret)) sigil = '^';
    else if (accept(Tok::Query)) sigil = '?';
    if (peek().kind != Tok::Ident) fail({"identifier"});
    auto ref = plain_ident();
    ref.span = span;
    ref.sigil = sigil;
    return ref;
  }

  IteratorAst iterator() {
    IteratorAst it;
    it.span = expect(Tok::Star).span;
    expect(Tok::LBracket);
    if (at_keyword("priv")) {
      next();
      it.privates = ident_list();
    }
    if (at_keyword("bind")) {
      next();
      it.binders = ident_list();
    }
    it.body = process(/*allow_bare_zero=*/true);
    if (!accept(Tok::RBracket)) fail({"'.'", "']'"});
    return it;
  }

  ProcessAst process(bool allow_bare_zero) {
    ProcessAst p;
    p.span = peek().span;
    if (peek().kind == Tok::Zero) {
      if (!allow_bare_zero)
        throw WellFormednessError(p.span, "empty-branch",
                                  "a sum or par branch needs at least one prefix");
      next();
      return p;
    }
    while (true) {
      p.prefixes.push_back(prefix());
      if (!accept(Tok::Dot)) fail({"'.'"});
      if (peek().kind == Tok::Zero) {
        const auto zero = next();
        if (std::holds_alternative<MatchAst>(p.prefixes.back().node))
          throw WellFormednessError(zero.span, "match-before-0",
                                    "a match prefix cannot directly precede the terminator 0");
        return p;
      }
    }
  }

  PrefixAst prefix() {
    PrefixAst out;
    out.span = peek().span;
    if (at_keyword("tau")) {
      next();
      out.node = SilentAst{};
      return out;
    }
    if (at_keyword("sum") || at_keyword("par")) {
      const bool is_sum = next().text == "sum";
      expect(Tok::LBrace);
      std::vector<ProcessAst> branches;
      branches.push_back(process(false));
      const Tok sep = is_sum ? Tok::Plus : Tok::ParBar;
      while (accept(sep)) branches.push_back(process(false));
      if (!accept(Tok::RBrace)) fail({describe(sep), "'}'"});
      if (branches.size() < 2)
        throw WellFormednessError(out.span, is_sum ? "sum-arity" : "par-arity",
                                  std::string(is_sum ? "sum" : "par") +
                                      " needs at least two branches");
      if (is_sum) out.node = SumAst{std::move(branches)};
      else out.node = ParAst{std::move(branches)};
      return out;
    }
    if (accept(Tok::LBracket)) {
      MatchAst m;
      m.left = name_ref();
      expect(Tok::Equals);
      m.right = name_ref();
      expect(Tok::RBracket);
      out.node = std::move(m);
      return out;
    }
    if (peek().kind != Tok::Ident && peek().kind != Tok::Dollar && peek().kind != Tok::Caret &&
        peek().kind != Tok::Query)
      fail({"'tau'", "'sum'", "'par'", "'['", "a channel name"});
    auto channel = name_ref();
    if (accept(Tok::Bang)) {
      expect(Tok::Less);
      auto datum = name_ref();
      expect(Tok::Greater);
      out.node = OutputAst{std::move(channel), std::move(datum)};
      return out;
    }
    if (accept(Tok::Query)) {
      expect(Tok::LParen);
      auto binder = name_ref();
      expect(Tok::RParen);
      out.node = InputAst{std::move(channel), std::move(binder)};
      return out;
    }
    fail({"'!'", "'?'"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline char sigil_of(NameKind k) {
  switch (k) {
    case NameKind::Private: return '$';
    case NameKind::Restriction: return '^';
    case NameKind::Binder: return '?';
    default: return '\0';
  }
}

class Validator {
 public:
  explicit Validator(const GraphAst& g) : g_(g) {}

  void run() {
    std::set<std::string> declared;
    const auto declare = [&](const NameRef& r) {
      if (!declared.insert(r.ident).second)
        throw WellFormednessError(r.span, "duplicate-declaration",
                                  "name '" + r.ident + "' declared more than once");
    };
    for (const auto& r : g_.free_names) declare(r);
    for (const auto& r : g_.restrictions) declare(r);
    for (const auto& it : g_.iterators) {
      for (const auto& r : it.privates) declare(r);
      for (const auto& r : it.binders) declare(r);
    }
    for (iter_ = 0; iter_ < g_.iterators.size(); ++iter_) process(g_.iterators[iter_].body);
  }

 private:
  Name use(const NameRef& r) {
    const auto n = resolve_name(g_, iter_, r.ident);
    if (!n)
      throw WellFormednessError(r.span, "undeclared-name",
                                "name '" + r.ident + "' is not declared in scope");
    if (r.sigil && *r.sigil != sigil_of(n->kind()))
      throw WellFormednessError(r.span, "sigil-mismatch",
                                "'" + std::string(1, *r.sigil) + r.ident +
                                    "' does not match the declaration of '" + r.ident + "'");
    return *n;
  }

  void process(const ProcessAst& p) {
    for (const auto& prefix : p.prefixes) {
      std::visit(
          [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, OutputAst>) {
              use(node.channel);
              use(node.datum);
            } else if constexpr (std::is_same_v<T, InputAst>) {
              use(node.channel);
              if (use(node.binder).kind() != NameKind::Binder)
                throw WellFormednessError(node.binder.span, "input-binder",
                                          "'" + node.binder.ident +
                                              "' is not a binder of the enclosing iterator");
            } else if constexpr (std::is_same_v<T, MatchAst>) {
              use(node.left);
              use(node.right);
            } else if constexpr (std::is_same_v<T, SumAst> || std::is_same_v<T, ParAst>) {
              for (const auto& b : node.branches) process(b);
            }
          },
          prefix.node);
    }
  }

  const GraphAst& g_;
  std::size_t iter_ = 0;
};

}  // namespace detail

/// Checks declaration and scoping rules on an AST.  `parse` already calls it.
inline void validate(const GraphAst& g) {
  if (g.iterators.empty())
    throw WellFormednessError({}, "no-iterator", "a graph needs at least one iterator");
  detail::Validator(g).run();
}

/// Parses a model in the `.pig` concrete syntax and validates it.
inline GraphAst parse(std::string_view source) {
  auto g = detail::Parser(detail::lex(source)).graph();
  validate(g);
  return g;
}

}  // namespace pigraph
