//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "eagqa/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "eagqa/error.hpp"

namespace eagqa {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kValidation, "query: " + what);
}

bool is_ident(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(head) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\x%02x", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string number_text(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string var_text(const VarTerm& t) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EntityVar>) {
          return "?" + v.name + ":" + std::string(to_string(v.etype));
        } else if constexpr (std::is_same_v<T, ValueVar>) {
          return "?" + v.name + "*";
        } else {
          return "_:" + std::string(to_string(v.etype)) + "@" +
                 std::to_string(v.index);
        }
      },
      t);
}

std::optional<VarTerm> as_var(const Term& t) {
  if (const auto* e = std::get_if<EntityVar>(&t)) return VarTerm{*e};
  if (const auto* v = std::get_if<ValueVar>(&t)) return VarTerm{*v};
  if (const auto* w = std::get_if<Wildcard>(&t)) return VarTerm{*w};
  return std::nullopt;
}

bool is_entity_term(const Term& t) {
  return std::holds_alternative<EntityVar>(t) ||
         std::holds_alternative<Wildcard>(t);
}

}  // namespace

std::string node_key(const VarTerm& t) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Wildcard>) {
          return "_:" + std::string(to_string(v.etype)) + "@" +
                 std::to_string(v.index);
        } else {
          return "?" + v.name;
        }
      },
      t);
}

std::string node_key(const Term& t) {
  if (auto v = as_var(t)) return node_key(*v);
  if (const auto* c = std::get_if<Const>(&t)) {
    return "=" + print_term(Term{*c});
  }
  const auto& f = std::get<FuncApp>(t);
  return f.function + "(" + node_key(f.argument) + ")";
}

std::string print_term(const Term& t) {
  if (auto v = as_var(t)) return var_text(*v);
  if (const auto* c = std::get_if<Const>(&t)) {
    if (c->value.is_label()) return quote(c->value.as_label());
    if (c->value.is_number()) return number_text(c->value.as_number().amount);
    return "<unprintable>";
  }
  const auto& f = std::get<FuncApp>(t);
  return f.function + "(" + var_text(f.argument) + ")";
}

std::string print_triple(const QueryTriple& t) {
  return "(" + print_term(t.subject) + ", " + t.predicate + ", " +
         print_term(t.object) + ")";
}

std::string_view to_string(AnswerKind k) noexcept {
  switch (k) {
    case AnswerKind::kEntitySet: return "entity_set";
    case AnswerKind::kValueSet: return "value_set";
    case AnswerKind::kCount: return "count";
    case AnswerKind::kBoolean: return "boolean";
    case AnswerKind::kLabel: return "label";
  }
  return "entity_set";
}

namespace {

// DSL keyword for each answer kind.
std::string_view kind_keyword(AnswerKind k) {
  switch (k) {
    case AnswerKind::kEntitySet: return "entities";
    case AnswerKind::kValueSet: return "values";
    case AnswerKind::kCount: return "count";
    case AnswerKind::kBoolean: return "exists";
    case AnswerKind::kLabel: return "label";
  }
  return "entities";
}

std::optional<AnswerKind> kind_from_keyword(std::string_view s) {
  for (auto k : {AnswerKind::kEntitySet, AnswerKind::kValueSet,
                 AnswerKind::kCount, AnswerKind::kBoolean, AnswerKind::kLabel}) {
    if (kind_keyword(k) == s) return k;
  }
  return std::nullopt;
}

}  // namespace

AnswerKind default_answer_kind(const Term& focus) {
  if (std::holds_alternative<ValueVar>(focus)) return AnswerKind::kValueSet;
  if (const auto* f = std::get_if<FuncApp>(&focus)) {
    if (f->function == kNumFunction) return AnswerKind::kCount;
    if (f->function == kMinFunction) return AnswerKind::kLabel;
  }
  return AnswerKind::kEntitySet;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class DisjointSets {
 public:
  std::size_t add(const std::string& key) {
    auto [it, inserted] = index_.emplace(key, parent_.size());
    if (inserted) parent_.push_back(parent_.size());
    return it->second;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }
  std::size_t components() {
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < parent_.size(); ++i) roots.insert(find(i));
    return roots.size();
  }
  bool contains(const std::string& key) const { return index_.contains(key); }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> parent_;
};

void check_term(const Term& t, bool subject_position) {
  if (std::holds_alternative<FuncApp>(t)) {
    invalid("functions are only supported in the focus position");
  }
  if (subject_position && !is_entity_term(t)) {
    invalid("triple subject must be an entity variable or wildcard");
  }
  if (const auto* e = std::get_if<EntityVar>(&t); e && !is_ident(e->name)) {
    invalid("invalid variable name \"" + e->name + "\"");
  }
  if (const auto* v = std::get_if<ValueVar>(&t); v && !is_ident(v->name)) {
    invalid("invalid variable name \"" + v->name + "\"");
  }
  if (const auto* w = std::get_if<Wildcard>(&t); w && w->index < 0) {
    invalid("wildcard index must be nonnegative");
  }
  if (const auto* c = std::get_if<Const>(&t)) {
    const Value& v = c->value;
    bool ok = v.is_label() ||
              (v.is_number() && v.as_number().unit == Unit::kNone &&
               std::isfinite(v.as_number().amount));
    if (!ok) invalid("constants must be strings or plain numbers");
  }
}

}  // namespace

QueryGraph QueryGraph::create(std::vector<QueryTriple> triples, Term focus,
                              std::optional<AnswerKind> kind) {
  if (triples.empty()) invalid("a query needs at least one triple");

  // Kind of each variable name: entity type or value.
  std::map<std::string, std::optional<EntityType>> var_kinds;
  auto note_var = [&](const VarTerm& v) {
    std::optional<EntityType> k;
    std::string name;
    if (const auto* e = std::get_if<EntityVar>(&v)) {
      k = e->etype;
      name = e->name;
    } else if (const auto* x = std::get_if<ValueVar>(&v)) {
      name = x->name;
    } else {
      return;
    }
    auto [it, inserted] = var_kinds.emplace(name, k);
    if (!inserted && it->second != k) {
      invalid("variable ?" + name + " used with conflicting kinds");
    }
  };

  for (const auto& t : triples) {
    check_term(t.subject, true);
    check_term(t.object, false);
    if (!is_ident(t.predicate)) invalid("invalid predicate \"" + t.predicate + "\"");
    note_var(*as_var(t.subject));
    if (auto v = as_var(t.object)) note_var(*v);
  }

  std::sort(triples.begin(), triples.end(),
            [](const QueryTriple& a, const QueryTriple& b) {
              return print_triple(a) < print_triple(b);
            });
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

  DisjointSets sets;
  for (const auto& t : triples) {
    sets.unite(sets.add(node_key(t.subject)), sets.add(node_key(t.object)));
  }
  if (sets.components() != 1) {
    throw Error(ErrorCode::kConnectivity, "query: query graph is not connected");
  }

  std::optional<VarTerm> focus_var;
  if (const auto* f = std::get_if<FuncApp>(&focus)) {
    if (f->function != kMinFunction && f->function != kNumFunction) {
      throw Error(ErrorCode::kUnsupportedFunction,
                  "query: unsupported function " + f->function + "()");
    }
    if (!std::holds_alternative<EntityVar>(f->argument)) {
      invalid(f->function + "() takes an entity variable");
    }
    focus_var = f->argument;
  } else if (std::holds_alternative<EntityVar>(focus) ||
             std::holds_alternative<ValueVar>(focus)) {
    focus_var = as_var(focus);
  } else {
    invalid("focus must be a variable or a function of one");
  }
  if (!sets.contains(node_key(*focus_var))) {
    invalid("focus " + var_text(*focus_var) + " does not occur in any triple");
  }
  note_var(*focus_var);

  QueryGraph q;
  q.triples_ = std::move(triples);
  q.focus_ = std::move(focus);
  q.kind_ = kind.value_or(default_answer_kind(q.focus_));

  const bool entity_focus = std::holds_alternative<EntityVar>(q.focus_);
  const bool value_focus = std::holds_alternative<ValueVar>(q.focus_);
  const auto* func = std::get_if<FuncApp>(&q.focus_);
  bool kind_ok = false;
  switch (q.kind_) {
    case AnswerKind::kEntitySet: kind_ok = entity_focus; break;
    case AnswerKind::kValueSet: kind_ok = value_focus; break;
    case AnswerKind::kCount: kind_ok = func && func->function == kNumFunction; break;
    case AnswerKind::kBoolean: kind_ok = entity_focus || value_focus; break;
    case AnswerKind::kLabel:
      kind_ok = entity_focus || value_focus ||
                (func && func->function == kMinFunction);
      break;
  }
  if (!kind_ok) {
    invalid("answer kind " + std::string(to_string(q.kind_)) +
            " does not fit focus " + print_term(q.focus_));
  }
  if (func && func->function == kMinFunction && !q.min_triple()) {
    invalid("min() needs exactly one (" + var_text(func->argument) +
            ", distance, <entity>) triple");
  }
  return q;
}

std::size_t QueryGraph::node_count() const {
  std::set<std::string> keys;
  for (const auto& t : triples_) {
    keys.insert(node_key(t.subject));
    keys.insert(node_key(t.object));
  }
  return keys.size();
}

std::optional<std::size_t> QueryGraph::min_triple() const {
  const auto* f = std::get_if<FuncApp>(&focus_);
  if (!f || f->function != kMinFunction) return std::nullopt;
  const std::string key = node_key(f->argument);
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    const auto& t = triples_[i];
    if (node_key(t.subject) != key || t.predicate != predicates::kDistance) continue;
    if (!is_entity_term(t.object) || found) return std::nullopt;
    found = i;
  }
  return found;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  kIdent, kVar, kWild, kString, kNumber,
  kLBrace, kRBrace, kLParen, kRParen, kComma, kColon, kStar, kAt, kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

[[noreturn]] void syntax(int line, int column, const std::string& what) {
  throw Error(ErrorCode::kParse, "query: line " + std::to_string(line) +
                                     ", column " + std::to_string(column) +
                                     ": " + what);
}

// Well-formed text that does not describe a valid query graph.
[[noreturn]] void semantic(int line, int column, const std::string& what) {
  throw Error(ErrorCode::kValidation, "query: line " + std::to_string(line) +
                                          ", column " + std::to_string(column) +
                                          ": " + what);
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t{Tok::kEnd, "", 0.0, line_, col_};
      if (at_end()) {
        out.push_back(t);
        return out;
      }
      char c = peek();
      if (c == '{') t.kind = Tok::kLBrace, advance();
      else if (c == '}') t.kind = Tok::kRBrace, advance();
      else if (c == '(') t.kind = Tok::kLParen, advance();
      else if (c == ')') t.kind = Tok::kRParen, advance();
      else if (c == ',') t.kind = Tok::kComma, advance();
      else if (c == ':') t.kind = Tok::kColon, advance();
      else if (c == '*') t.kind = Tok::kStar, advance();
      else if (c == '@') t.kind = Tok::kAt, advance();
      else if (c == '?') {
        advance();
        t.kind = Tok::kVar;
        t.text = ident();
        if (t.text.empty()) syntax(t.line, t.column, "expected a name after '?'");
      } else if (c == '_' && peek(1) == ':') {
        advance();
        t.kind = Tok::kWild;
      } else if (c == '"') {
        t.kind = Tok::kString;
        t.text = string_literal();
      } else if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::kNumber;
        t.text = number_literal();
        const char* b = t.text.data();
        const char* e = b + t.text.size();
        if (*b == '+') ++b;
        auto [p, ec] = std::from_chars(b, e, t.number);
        if (ec != std::errc() || p != e) {
          syntax(t.line, t.column, "malformed number \"" + t.text + "\"");
        }
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::kIdent;
        t.text = ident();
      } else {
        syntax(line_, col_, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }
  std::string ident() {
    std::string s;
    if (at_end()) return s;
    char c = peek();
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') return s;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                         peek() == '_')) {
      s += advance();
    }
    return s;
  }
  std::string number_literal() {
    std::string s;
    auto digits = [&] {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        s += advance();
      }
    };
    if (peek() == '-' || peek() == '+') s += advance();
    digits();
    if (peek() == '.') {
      s += advance();
      digits();
    }
    if (peek() == 'e' || peek() == 'E') {
      s += advance();
      if (peek() == '-' || peek() == '+') s += advance();
      digits();
    }
    return s;
  }
  std::string string_literal() {
    int line = line_, col = col_;
    advance();  // opening quote
    std::string s;
    for (;;) {
      if (at_end()) syntax(line, col, "unterminated string");
      char c = advance();
      if (c == '"') return s;
      if (c != '\\') {
        s += c;
        continue;
      }
      if (at_end()) syntax(line, col, "unterminated string");
      char e = advance();
      switch (e) {
        case '"': s += '"'; break;
        case '\\': s += '\\'; break;
        case 'n': s += '\n'; break;
        case 't': s += '\t'; break;
        case 'r': s += '\r'; break;
        case 'x': {
          std::string hex;
          for (int i = 0; i < 2 && !at_end(); ++i) hex += advance();
          unsigned v = 0;
          auto [p, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
          if (hex.size() != 2 || ec != std::errc() || p != hex.data() + 2) {
            syntax(line_, col_, "bad \\x escape");
          }
          s += static_cast<char>(v);
          break;
        }
        default:
          syntax(line_, col_, std::string("unknown escape \\") + e);
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

// A term as written, before names are resolved across the whole query.
struct RawTerm {
  enum class Kind { kVar, kWild, kConst, kFunc } kind = Kind::kVar;
  std::string name;                     // variable or function name
  std::optional<std::string> type;      // ":type"
  bool star = false;                    // "*"
  int index = 0;                        // wildcard index
  Value value;                          // constant
  std::vector<RawTerm> args;            // function argument
  int line = 1, column = 1;
};

struct RawTriple {
  RawTerm subject;
  std::string predicate;
  RawTerm object;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  QueryGraph run() {
    const Token& ask = expect(Tok::kIdent, "'ask'");
    if (ask.text != "ask") syntax(ask.line, ask.column, "expected 'ask'");

    std::optional<AnswerKind> kind;
    if (peek().kind == Tok::kIdent && peek(1).kind != Tok::kLParen) {
      if (auto k = kind_from_keyword(peek().text)) {
        kind = k;
        next();
      }
    }
    if (peek().kind == Tok::kLBrace) {
      syntax(peek().line, peek().column, "query focus is missing");
    }
    RawTerm focus = focus_term();
    expect(Tok::kLBrace, "'{'");
    std::vector<RawTriple> raw;
    while (peek().kind == Tok::kLParen) raw.push_back(triple());
    if (raw.empty()) syntax(peek().line, peek().column, "expected a triple");
    expect(Tok::kRBrace, "'}'");
    expect(Tok::kEnd, "end of input");
    return resolve(raw, focus, kind);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      syntax(peek().line, peek().column, std::string("expected ") + what);
    }
    return next();
  }

  RawTerm focus_term() {
    if (peek().kind == Tok::kIdent && peek(1).kind == Tok::kLParen) {
      RawTerm f;
      f.kind = RawTerm::Kind::kFunc;
      f.line = peek().line;
      f.column = peek().column;
      f.name = next().text;
      next();  // '('
      f.args.push_back(term());
      expect(Tok::kRParen, "')'");
      return f;
    }
    return term();
  }

  RawTriple triple() {
    expect(Tok::kLParen, "'('");
    RawTriple t;
    t.subject = term();
    expect(Tok::kComma, "','");
    t.predicate = expect(Tok::kIdent, "a predicate").text;
    expect(Tok::kComma, "','");
    t.object = focus_term();
    expect(Tok::kRParen, "')'");
    return t;
  }

  RawTerm term() {
    const Token& t = peek();
    RawTerm r;
    r.line = t.line;
    r.column = t.column;
    switch (t.kind) {
      case Tok::kVar:
        r.kind = RawTerm::Kind::kVar;
        r.name = next().text;
        if (peek().kind == Tok::kColon) {
          next();
          r.type = expect(Tok::kIdent, "an entity type").text;
        }
        if (peek().kind == Tok::kStar) {
          next();
          r.star = true;
        }
        return r;
      case Tok::kWild: {
        next();
        r.kind = RawTerm::Kind::kWild;
        expect(Tok::kColon, "':'");
        r.type = expect(Tok::kIdent, "an entity type").text;
        expect(Tok::kAt, "'@'");
        const Token& n = expect(Tok::kNumber, "a wildcard index");
        if (n.text.empty() || !std::all_of(n.text.begin(), n.text.end(), [](char c) {
              return std::isdigit(static_cast<unsigned char>(c));
            })) {
          syntax(n.line, n.column, "wildcard index must be a nonnegative integer");
        }
        r.index = static_cast<int>(n.number);
        return r;
      }
      case Tok::kString:
        r.kind = RawTerm::Kind::kConst;
        r.value = Value::label(next().text);
        return r;
      case Tok::kNumber:
        r.kind = RawTerm::Kind::kConst;
        r.value = Value::number(next().number, Unit::kNone);
        return r;
      default:
        syntax(t.line, t.column, "expected a term");
    }
  }

  static EntityType entity_type(const RawTerm& r) {
    auto t = parse_entity_type(*r.type);
    if (!t) semantic(r.line, r.column, "unknown entity type \"" + *r.type + "\"");
    return *t;
  }

  QueryGraph resolve(const std::vector<RawTriple>& raw, const RawTerm& focus,
                     std::optional<AnswerKind> kind) {
    // Gather what each variable name is declared as anywhere in the query.
    struct Decl {
      std::optional<EntityType> type;
      bool star = false;
    };
    std::map<std::string, Decl> decls;
    auto declare = [&](const RawTerm& r) {
      if (r.kind != RawTerm::Kind::kVar) return;
      auto& d = decls[r.name];
      if (r.type && r.star) {
        semantic(r.line, r.column, "?" + r.name + " cannot be both typed and '*'");
      }
      if (r.type) {
        EntityType t = entity_type(r);
        if (d.type && *d.type != t) {
          semantic(r.line, r.column, "?" + r.name + " declared with two types");
        }
        d.type = t;
      }
      if (r.star) d.star = true;
      if (d.type && d.star) {
        semantic(r.line, r.column, "?" + r.name + " is used as entity and value");
      }
    };
    for (const auto& t : raw) {
      declare(t.subject);
      declare(t.object);
    }
    if (focus.kind == RawTerm::Kind::kFunc) {
      declare(focus.args.front());
    } else {
      declare(focus);
    }

    auto var = [&](const RawTerm& r) -> VarTerm {
      if (r.kind == RawTerm::Kind::kWild) return Wildcard{entity_type(r), r.index};
      const auto& d = decls[r.name];
      if (d.star) return ValueVar{r.name};
      if (!d.type) semantic(r.line, r.column, "?" + r.name + " needs a type or '*'");
      return EntityVar{r.name, *d.type};
    };
    auto term = [&](const RawTerm& r) -> Term {
      switch (r.kind) {
        case RawTerm::Kind::kConst: return Const{r.value};
        case RawTerm::Kind::kFunc: semantic(r.line, r.column, "unexpected function");
        default: break;
      }
      return std::visit([](auto v) -> Term { return v; }, var(r));
    };

    std::vector<QueryTriple> triples;
    for (const auto& t : raw) {
      triples.push_back({term(t.subject), t.predicate, term(t.object)});
    }
    Term focus_term;
    if (focus.kind == RawTerm::Kind::kFunc) {
      const RawTerm& arg = focus.args.front();
      if (arg.kind == RawTerm::Kind::kConst) {
        semantic(arg.line, arg.column, "function argument must be a variable");
      }
      focus_term = FuncApp{focus.name, var(arg)};
    } else {
      focus_term = term(focus);
    }
    return QueryGraph::create(std::move(triples), std::move(focus_term), kind);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

QueryGraph parse_query(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

std::string print_query(const QueryGraph& q) {
  std::string out = "ask ";
  if (q.answer_kind() != default_answer_kind(q.focus())) {
    out += std::string(kind_keyword(q.answer_kind())) + " ";
  }
  out += print_term(q.focus()) + " {\n";
  for (const auto& t : q.triples()) out += "  " + print_triple(t) + "\n";
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Templates

std::optional<TemplateId> parse_template_id(std::string_view s) noexcept {
  if (s.size() == 2 && (s[0] == 'Q' || s[0] == 'q') && s[1] >= '1' && s[1] <= '7') {
    return static_cast<TemplateId>(s[1] - '0');
  }
  return std::nullopt;
}

std::string to_string(TemplateId id) {
  return "Q" + std::to_string(static_cast<int>(id));
}

std::vector<TemplateId> all_templates() {
  return {TemplateId::kQ1, TemplateId::kQ2, TemplateId::kQ3, TemplateId::kQ4,
          TemplateId::kQ5, TemplateId::kQ6, TemplateId::kQ7};
}

QueryTemplate query_template(TemplateId id) {
  QueryTemplate t{id, "", std::nullopt, Dispatch::kMatch, PostHook::kNone};
  switch (id) {
    case TemplateId::kQ1:
      t.question = "Who is holding the soccer?";
      t.graph = parse_query(R"(ask min(?p:person) {
        (?p:person, role, "player")
        (?p:person, distance, _:soccer@1)
      })");
      break;
    case TemplateId::kQ2:
      t.question = "What is the uniform color of the referee?";
      t.graph = parse_query(R"(ask ?c* {
        (?r:person, role, "referee")
        (?r:person, uniform, ?c*)
      })");
      break;
    case TemplateId::kQ3:
      t.question = "Is there any referee in the image?";
      t.graph = parse_query(R"(ask exists ?r:person {
        (?r:person, role, "referee")
      })");
      break;
    case TemplateId::kQ4:
      t.question = "Which team does the goalkeeper belong to?";
      t.graph = parse_query(R"(ask label ?g:person {
        (?g:person, role, "goalkeeper")
      })");
      t.hook = PostHook::kGoalkeeperTeam;
      break;
    case TemplateId::kQ5:
      t.question = "Who is the defending team?";
      t.dispatch = Dispatch::kTeamStatusInference;
      break;
    case TemplateId::kQ6:
      t.question = "Which part of the field are the players being now?";
      t.graph = parse_query(R"(ask label ?part* {
        (_:field@1, part, ?part*)
      })");
      break;
    case TemplateId::kQ7:
      t.question = "How many players are there in the image?";
      t.graph = parse_query(R"(ask num(?p:person) {
        (?p:person, role, "player")
      })");
      break;
  }
  return t;
}

}  // namespace eagqa
