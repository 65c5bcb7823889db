#include "nmlab/formula.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace nmlab {

// ---------------------------------------------------------------------------
// Representation

struct Formula::Node {
  Conn kind;
  std::string name;  // Var, Meta
  Formula a, b;      // operands
  int size = 1;
  int depth = 0;     // modal depth
  bool has_meta = false;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

Formula Formula::make(Conn k, std::string name, Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->a = std::move(a);
  n->b = std::move(b);
  switch (k) {
    case Conn::Var:
    case Conn::Meta:
      n->has_meta = (k == Conn::Meta);
      n->hash = mix(std::hash<std::string>{}(n->name), std::size_t(k));
      break;
    case Conn::Neg:
      n->size = 1 + n->a.size();
      n->depth = n->a.modal_depth();
      n->has_meta = n->a.contains_meta();
      n->hash = mix(n->a.hash(), 0x4eu);
      break;
    case Conn::Box:
      n->size = 1 + n->a.size();
      n->depth = 1 + n->a.modal_depth();
      n->has_meta = n->a.contains_meta();
      n->hash = mix(n->a.hash(), 0xb0u);
      break;
    case Conn::Impl:
      n->size = 1 + n->a.size() + n->b.size();
      n->depth = std::max(n->a.modal_depth(), n->b.modal_depth());
      n->has_meta = n->a.contains_meta() || n->b.contains_meta();
      n->hash = mix(mix(n->a.hash(), n->b.hash()), 0x13u);
      break;
  }
  return Formula(std::move(n));
}

Formula Formula::var(std::string name) { return make(Conn::Var, std::move(name), {}, {}); }
Formula Formula::meta(std::string name) { return make(Conn::Meta, std::move(name), {}, {}); }
Formula Formula::neg(Formula body) { return make(Conn::Neg, {}, std::move(body), {}); }
Formula Formula::box(Formula body) { return make(Conn::Box, {}, std::move(body), {}); }
Formula Formula::impl(Formula lhs, Formula rhs) {
  return make(Conn::Impl, {}, std::move(lhs), std::move(rhs));
}

Conn Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
int Formula::size() const { return node_->size; }
int Formula::modal_depth() const { return node_->depth; }
bool Formula::contains_meta() const { return node_->has_meta; }
std::size_t Formula::hash() const { return node_->hash; }

const Formula& Formula::left() const { return node_->a; }
const Formula& Formula::right() const { return node_->b; }

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  const Node* x = node_.get();
  const Node* y = o.node_.get();
  if (x->hash != y->hash || x->kind != y->kind || x->size != y->size) return false;
  switch (x->kind) {
    case Conn::Var:
    case Conn::Meta:
      return x->name == y->name;
    case Conn::Neg:
    case Conn::Box:
      return x->a == y->a;
    case Conn::Impl:
      return x->a == y->a && x->b == y->b;
  }
  return false;
}

bool Formula::closure_less(const Formula& a, const Formula& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.str() < b.str();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Conn::Var:
    case Conn::Meta:
      out += f.name();
      break;
    case Conn::Neg:
    case Conn::Box: {
      out += (f.kind() == Conn::Neg) ? "~" : "[]";
      const Formula& body = f.left();
      if (body.kind() == Conn::Impl) {
        out += '(';
        print_into(body, out);
        out += ')';
      } else {
        print_into(body, out);
      }
      break;
    }
    case Conn::Impl: {
      const Formula& lhs = f.left();
      if (lhs.kind() == Conn::Impl) {
        out += '(';
        print_into(lhs, out);
        out += ')';
      } else {
        print_into(lhs, out);
      }
      out += " -> ";
      print_into(f.right(), out);  // right-associative: no parens needed
      break;
    }
  }
}

}  // namespace

std::string Formula::str() const {
  std::string out;
  print_into(*this, out);
  return out;
}

std::vector<std::string> Formula::variables() const {
  std::vector<std::string> vars;
  std::vector<Formula> stack{*this};
  while (!stack.empty()) {
    Formula f = stack.back();
    stack.pop_back();
    if (f.empty()) continue;
    if (f.kind() == Conn::Var) vars.push_back(f.name());
    if (f.kind() == Conn::Neg || f.kind() == Conn::Box || f.kind() == Conn::Impl)
      stack.push_back(f.left());
    if (f.kind() == Conn::Impl) stack.push_back(f.right());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Ident, MetaIdent, Not, Box, Diamond, And, Or, Arrow, Iff, LParen, RParen, End };

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  Tok tok = Tok::End;
  std::string text;       // identifier payload
  std::size_t tok_pos = 0;

  explicit Lexer(std::string_view s) : src(s) { advance(); }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  bool starts_with(std::string_view s) const {
    return src.substr(pos, s.size()) == s;
  }

  void advance() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    tok_pos = pos;
    if (pos >= src.size()) {
      tok = Tok::End;
      return;
    }
    // Multi-byte spellings first.
    struct Spelling { std::string_view s; Tok t; };
    static constexpr Spelling table[] = {
        {"<->", Tok::Iff},    {"↔", Tok::Iff},
        {"->", Tok::Arrow},   {"→", Tok::Arrow},
        {"/\\", Tok::And},    {"∧", Tok::And},
        {"\\/", Tok::Or},     {"∨", Tok::Or},
        {"[]", Tok::Box},     {"□", Tok::Box},
        {"<>", Tok::Diamond}, {"◇", Tok::Diamond},
        {"~", Tok::Not},      {"¬", Tok::Not},
    };
    for (const auto& sp : table) {
      if (starts_with(sp.s)) {
        pos += sp.s.size();
        tok = sp.t;
        return;
      }
    }
    char c = src[pos];
    if (c == '(') { ++pos; tok = Tok::LParen; return; }
    if (c == ')') { ++pos; tok = Tok::RParen; return; }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t start = pos++;
      while (pos < src.size() &&
             (std::islower(static_cast<unsigned char>(src[pos])) ||
              std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      text.assign(src.substr(start, pos - start));
      tok = Tok::Ident;
      return;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::size_t start = pos++;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      text.assign(src.substr(start, pos - start));
      tok = Tok::MetaIdent;
      return;
    }
    fail("unknown token", pos);
  }
};

// Precedence, loosest first: <->, ->, \/, /\, prefix ops.
struct Parser {
  Lexer lex;
  bool allow_meta;

  Parser(std::string_view s, bool meta) : lex(s), allow_meta(meta) {}

  Formula run() {
    Formula f = parse_iff();
    if (lex.tok != Tok::End) lex.fail("trailing input", lex.tok_pos);
    return f;
  }

  Formula parse_iff() {
    Formula f = parse_impl();
    while (lex.tok == Tok::Iff) {
      lex.advance();
      Formula g = parse_impl();
      // a <-> b  =>  (a -> b) /\ (b -> a)
      f = conj(Formula::impl(f, g), Formula::impl(g, f));
    }
    return f;
  }

  Formula parse_impl() {
    Formula f = parse_or();
    if (lex.tok == Tok::Arrow) {
      lex.advance();
      return Formula::impl(f, parse_impl());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (lex.tok == Tok::Or) {
      lex.advance();
      Formula g = parse_and();
      f = Formula::impl(Formula::neg(f), g);
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (lex.tok == Tok::And) {
      lex.advance();
      f = conj(f, parse_unary());
    }
    return f;
  }

  static Formula conj(Formula a, Formula b) {
    return Formula::neg(Formula::impl(std::move(a), Formula::neg(std::move(b))));
  }

  Formula parse_unary() {
    switch (lex.tok) {
      case Tok::Not:
        lex.advance();
        return Formula::neg(parse_unary());
      case Tok::Box:
        lex.advance();
        return Formula::box(parse_unary());
      case Tok::Diamond:
        lex.advance();
        return Formula::neg(Formula::box(Formula::neg(parse_unary())));
      default:
        return parse_primary();
    }
  }

  Formula parse_primary() {
    switch (lex.tok) {
      case Tok::Ident: {
        Formula f = Formula::var(lex.text);
        lex.advance();
        return f;
      }
      case Tok::MetaIdent: {
        if (!allow_meta) lex.fail("metavariable not allowed here", lex.tok_pos);
        Formula f = Formula::meta(lex.text);
        lex.advance();
        return f;
      }
      case Tok::LParen: {
        lex.advance();
        Formula f = parse_iff();
        if (lex.tok != Tok::RParen) lex.fail("expected ')'", lex.tok_pos);
        lex.advance();
        return f;
      }
      case Tok::End:
        lex.fail("unexpected end of input", lex.tok_pos);
      default:
        lex.fail("expected a formula", lex.tok_pos);
    }
  }
};

}  // namespace

Formula Formula::parse(std::string_view text) { return Parser(text, false).run(); }

Schema Schema::parse(std::string_view text) { return Schema(Parser(text, true).run()); }

// ---------------------------------------------------------------------------
// Schemas

std::vector<std::string> Schema::metavariables() const {
  std::vector<std::string> out;
  std::vector<Formula> stack{pattern_};
  while (!stack.empty()) {
    Formula f = stack.back();
    stack.pop_back();
    if (f.empty()) continue;
    switch (f.kind()) {
      case Conn::Meta:
        out.push_back(f.name());
        break;
      case Conn::Var:
        break;
      case Conn::Neg:
      case Conn::Box:
        stack.push_back(f.left());
        break;
      case Conn::Impl:
        stack.push_back(f.left());
        stack.push_back(f.right());
        break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

Formula subst_into(const Formula& f, const Substitution& sub) {
  switch (f.kind()) {
    case Conn::Var:
      return f;
    case Conn::Meta: {
      auto it = sub.find(f.name());
      if (it == sub.end()) throw SchemaError("no binding for metavariable " + f.name());
      if (it->second.contains_meta())
        throw SchemaError("binding for " + f.name() + " contains a metavariable");
      return it->second;
    }
    case Conn::Neg:
      return Formula::neg(subst_into(f.left(), sub));
    case Conn::Box:
      return Formula::box(subst_into(f.left(), sub));
    case Conn::Impl:
      return Formula::impl(subst_into(f.left(), sub), subst_into(f.right(), sub));
  }
  throw SchemaError("malformed pattern");
}

bool match_into(const Formula& pat, const Formula& f, Substitution& sub) {
  switch (pat.kind()) {
    case Conn::Meta: {
      auto [it, fresh] = sub.emplace(pat.name(), f);
      return fresh || it->second == f;
    }
    case Conn::Var:
      return f.kind() == Conn::Var && f.name() == pat.name();
    case Conn::Neg:
    case Conn::Box:
      return f.kind() == pat.kind() && match_into(pat.left(), f.left(), sub);
    case Conn::Impl:
      return f.kind() == Conn::Impl && match_into(pat.left(), f.left(), sub) &&
             match_into(pat.right(), f.right(), sub);
  }
  return false;
}

}  // namespace

Formula Schema::instantiate(const Substitution& sub) const { return subst_into(pattern_, sub); }

std::optional<Substitution> Schema::match(const Formula& f) const {
  Substitution sub;
  if (!match_into(pattern_, f, sub)) return std::nullopt;
  return sub;
}

// ---------------------------------------------------------------------------
// Closures

Closure Closure::of(const std::vector<Formula>& roots) {
  std::unordered_set<Formula, FormulaHash> seen;
  std::vector<Formula> all;
  std::vector<Formula> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    Formula f = stack.back();
    stack.pop_back();
    if (f.empty() || !seen.insert(f).second) continue;
    all.push_back(f);
    switch (f.kind()) {
      case Conn::Var:
      case Conn::Meta:
        break;
      case Conn::Neg:
      case Conn::Box:
        stack.push_back(f.left());
        break;
      case Conn::Impl:
        stack.push_back(f.left());
        stack.push_back(f.right());
        break;
    }
  }
  std::sort(all.begin(), all.end(), Formula::closure_less);

  Closure c;
  c.items_.reserve(all.size());
  std::unordered_map<Formula, int, FormulaHash> index;
  for (const Formula& f : all) {
    Item item;
    item.formula = f;
    item.kind = f.kind();
    if (f.kind() == Conn::Neg || f.kind() == Conn::Box || f.kind() == Conn::Impl)
      item.a = index.at(f.left());
    if (f.kind() == Conn::Impl) item.b = index.at(f.right());
    index.emplace(f, static_cast<int>(c.items_.size()));
    c.items_.push_back(std::move(item));
  }
  return c;
}

std::optional<std::size_t> Closure::index_of(const Formula& f) const {
  // Closures are small; a scan keeps the type trivially copyable.
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (items_[i].formula == f) return i;
  return std::nullopt;
}

}  // namespace nmlab
