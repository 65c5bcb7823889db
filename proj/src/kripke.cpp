#include "nmlab/kripke.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace nmlab {

// ---------------------------------------------------------------------------
// Frames

bool Frame::reflexive() const {
  for (int i = 0; i < n; ++i)
    if (!related(i, i)) return false;
  return true;
}

bool Frame::transitive() const {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (related(i, j))
        for (int k = 0; k < n; ++k)
          if (related(j, k) && !related(i, k)) return false;
  return true;
}

bool Frame::symmetric() const {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (related(i, j) != related(j, i)) return false;
  return true;
}

std::vector<std::pair<int, int>> Frame::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (related(i, j)) out.emplace_back(i, j);
  return out;
}

std::string Frame::str() const {
  std::ostringstream os;
  os << "n=" << n << " R={";
  bool first = true;
  for (auto [i, j] : pairs()) {
    if (!first) os << ",";
    os << "(" << i << "," << j << ")";
    first = false;
  }
  os << "}";
  return os.str();
}

std::string_view frame_class_name(FrameClass c) {
  switch (c) {
    case FrameClass::All:
      return "all";
    case FrameClass::Reflexive:
      return "reflexive";
    case FrameClass::Transitive:
      return "transitive";
    case FrameClass::ReflTrans:
      return "refl-trans";
    case FrameClass::Equivalence:
      return "equivalence";
  }
  return "all";
}

FrameClass frame_class_from(std::string_view name) {
  if (name == "all") return FrameClass::All;
  if (name == "reflexive") return FrameClass::Reflexive;
  if (name == "transitive") return FrameClass::Transitive;
  if (name == "refl-trans") return FrameClass::ReflTrans;
  if (name == "equivalence") return FrameClass::Equivalence;
  throw std::invalid_argument("unknown frame class " + std::string(name));
}

namespace {

// Set partitions as restricted growth strings, lexicographic.
void partitions_rec(int n, int i, int max_used, std::vector<int>& block,
                    std::vector<Frame>& out) {
  if (i == n) {
    Frame f;
    f.n = n;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (block[a] == block[b]) f.rel |= 1u << (a * n + b);
    out.push_back(f);
    return;
  }
  for (int v = 0; v <= max_used + 1; ++v) {
    block[i] = v;
    partitions_rec(n, i + 1, std::max(max_used, v), block, out);
  }
}

}  // namespace

std::vector<Frame> enumerate_frames(int n, FrameClass c) {
  if (n < 1 || n > 5) throw std::invalid_argument("world count must be in 1..5");
  std::vector<Frame> out;
  if (c == FrameClass::Equivalence) {
    std::vector<int> block(n, 0);
    block[0] = 0;
    partitions_rec(n, 1, 0, block, out);
    return out;
  }
  const std::uint64_t total = 1ull << (n * n);
  for (std::uint64_t rel = 0; rel < total; ++rel) {
    Frame f{n, static_cast<std::uint32_t>(rel)};
    switch (c) {
      case FrameClass::All:
        break;
      case FrameClass::Reflexive:
        if (!f.reflexive()) continue;
        break;
      case FrameClass::Transitive:
        if (!f.transitive()) continue;
        break;
      case FrameClass::ReflTrans:
        if (!f.reflexive() || !f.transitive()) continue;
        break;
      case FrameClass::Equivalence:
        break;
    }
    out.push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Models

bool Model::var_true(int world, const std::string& name) const {
  for (const auto& [var, mask] : truth)
    if (var == name) return (mask >> world) & 1u;
  return false;
}

Model& Model::set(const std::string& name, std::uint32_t worlds_mask) {
  for (auto& [var, mask] : truth)
    if (var == name) {
      mask = worlds_mask;
      return *this;
    }
  truth.emplace_back(name, worlds_mask);
  return *this;
}

nlohmann::json Model::to_json(std::optional<int> world) const {
  nlohmann::json j;
  j["worlds"] = frame.n;
  nlohmann::json rel = nlohmann::json::array();
  for (auto [i, k] : frame.pairs()) rel.push_back({i, k});
  j["relation"] = rel;
  nlohmann::json val = nlohmann::json::object();
  std::vector<std::pair<std::string, std::uint32_t>> sorted = truth;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [var, mask] : sorted) {
    std::vector<int> where;
    for (int w = 0; w < frame.n; ++w)
      if ((mask >> w) & 1u) where.push_back(w);
    val[var] = where;
  }
  j["valuation"] = val;
  if (world) j["world"] = *world;
  return j;
}

Model Model::from_json(const nlohmann::json& j) {
  Model m;
  m.frame.n = j.at("worlds").get<int>();
  if (m.frame.n < 1 || m.frame.n > 5)
    throw std::invalid_argument("model world count must be in 1..5");
  for (const auto& pair : j.at("relation")) {
    int a = pair.at(0).get<int>(), b = pair.at(1).get<int>();
    if (a < 0 || b < 0 || a >= m.frame.n || b >= m.frame.n)
      throw std::invalid_argument("relation pair out of range");
    m.frame.rel |= 1u << (a * m.frame.n + b);
  }
  if (j.contains("valuation"))
    for (const auto& [var, worlds] : j.at("valuation").items()) {
      std::uint32_t mask = 0;
      for (const auto& w : worlds) {
        int iw = w.get<int>();
        if (iw < 0 || iw >= m.frame.n)
          throw std::invalid_argument("valuation world out of range");
        mask |= 1u << iw;
      }
      m.set(var, mask);
    }
  return m;
}

bool eval_model(const Model& m, int world, const Formula& f) {
  switch (f.kind()) {
    case Conn::Var:
      return m.var_true(world, f.name());
    case Conn::Neg:
      return !eval_model(m, world, f.left());
    case Conn::Impl:
      return !eval_model(m, world, f.left()) || eval_model(m, world, f.right());
    case Conn::Box:
      for (int j = 0; j < m.frame.n; ++j)
        if (m.frame.related(world, j) && !eval_model(m, j, f.left())) return false;
      return true;
    case Conn::Meta:
      break;
  }
  throw std::invalid_argument("cannot evaluate a metavariable");
}

namespace {

// Truth set of f (bit per world), computed bottom-up; succ[i] masks i's
// successors.
std::uint32_t truth_set(const Formula& f, const std::uint32_t* succ, int n,
                        const std::vector<std::string>& vars,
                        const std::uint32_t* var_masks, std::uint32_t full) {
  switch (f.kind()) {
    case Conn::Var: {
      for (std::size_t k = 0; k < vars.size(); ++k)
        if (vars[k] == f.name()) return var_masks[k];
      return 0;
    }
    case Conn::Neg:
      return full & ~truth_set(f.left(), succ, n, vars, var_masks, full);
    case Conn::Impl:
      return (full & ~truth_set(f.left(), succ, n, vars, var_masks, full)) |
             truth_set(f.right(), succ, n, vars, var_masks, full);
    case Conn::Box: {
      std::uint32_t body = truth_set(f.left(), succ, n, vars, var_masks, full);
      std::uint32_t out = 0;
      for (int i = 0; i < n; ++i)
        if ((succ[i] & ~body) == 0) out |= 1u << i;
      return out;
    }
    case Conn::Meta:
      break;
  }
  throw std::invalid_argument("cannot evaluate a metavariable");
}

}  // namespace

bool frame_valid(const Frame& fr, const Formula& f) {
  const std::vector<std::string> vars = f.variables();
  const int n = fr.n;
  std::uint32_t succ[5] = {};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (fr.related(i, j)) succ[i] |= 1u << j;
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);

  const std::size_t total_bits = vars.size() * static_cast<std::size_t>(n);
  std::uint32_t masks[8] = {};
  const std::uint64_t combos = 1ull << total_bits;
  for (std::uint64_t combo = 0; combo < combos; ++combo) {
    for (std::size_t k = 0; k < vars.size(); ++k)
      masks[k] = static_cast<std::uint32_t>((combo >> (k * n)) & full);
    if (truth_set(f, succ, n, vars, masks, full) != full) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Frame conditions

struct FrameCondition::Node {
  enum Kind { Rel, Eq, Not, And, Or, Impl, Forall, Exists } kind;
  std::string var_a, var_b;  // Rel/Eq operands, quantifier variable in var_a
  std::shared_ptr<const Node> a, b;
};

namespace {

using CNode = FrameCondition::Node;
using CNodePtr = std::shared_ptr<const CNode>;

CNodePtr cnode(CNode::Kind k, std::string va = "", std::string vb = "",
               CNodePtr a = nullptr, CNodePtr b = nullptr) {
  auto n = std::make_shared<CNode>();
  n->kind = k;
  n->var_a = std::move(va);
  n->var_b = std::move(vb);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

struct CondParser {
  std::string_view src;
  std::size_t pos = 0;

  explicit CondParser(std::string_view s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos); }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (src.substr(pos, tok.size()) != tok) return false;
    // Keep identifier-like tokens from matching prefixes of longer names.
    if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
      std::size_t end = pos + tok.size();
      if (end < src.size() &&
          (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
        return false;
    }
    pos += tok.size();
    return true;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= src.size() || !std::islower(static_cast<unsigned char>(src[pos])))
      fail("expected a variable");
    while (pos < src.size() &&
           (std::islower(static_cast<unsigned char>(src[pos])) ||
            std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    return std::string(src.substr(start, pos - start));
  }

  CNodePtr parse() {
    CNodePtr c = parse_cond();
    skip_ws();
    if (pos != src.size()) fail("trailing input");
    return c;
  }

  CNodePtr parse_cond() {
    skip_ws();
    if (eat("forall")) return parse_quant(CNode::Forall);
    if (eat("exists")) return parse_quant(CNode::Exists);
    return parse_impl();
  }

  CNodePtr parse_quant(CNode::Kind k) {
    std::vector<std::string> vars;
    vars.push_back(ident());
    skip_ws();
    while (pos < src.size() && src[pos] != '.') {
      vars.push_back(ident());
      skip_ws();
    }
    if (!eat(".")) fail("expected '.' after quantifier variables");
    CNodePtr body = parse_cond();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      body = cnode(k, *it, "", body);
    return body;
  }

  CNodePtr parse_impl() {
    CNodePtr lhs = parse_or();
    if (eat("->")) return cnode(CNode::Impl, "", "", lhs, parse_cond());
    return lhs;
  }

  CNodePtr parse_or() {
    CNodePtr lhs = parse_and();
    while (eat("\\/") || eat("|")) lhs = cnode(CNode::Or, "", "", lhs, parse_and());
    return lhs;
  }

  CNodePtr parse_and() {
    CNodePtr lhs = parse_unary();
    while (true) {
      skip_ws();
      if (eat("/\\") || eat("&")) {
        lhs = cnode(CNode::And, "", "", lhs, parse_unary());
        continue;
      }
      return lhs;
    }
  }

  CNodePtr parse_unary() {
    skip_ws();
    if (eat("~")) return cnode(CNode::Not, "", "", parse_unary());
    if (eat("forall")) return parse_quant(CNode::Forall);
    if (eat("exists")) return parse_quant(CNode::Exists);
    if (eat("(")) {
      CNodePtr c = parse_cond();
      if (!eat(")")) fail("expected ')'");
      return c;
    }
    if (eat("R")) {
      if (!eat("(")) fail("expected '(' after R");
      std::string a = ident();
      if (!eat(",")) fail("expected ',' in R(,)");
      std::string b = ident();
      if (!eat(")")) fail("expected ')' after R(,)");
      return cnode(CNode::Rel, a, b);
    }
    std::string a = ident();
    if (!eat("=")) fail("expected '=' after variable");
    std::string b = ident();
    return cnode(CNode::Eq, a, b);
  }
};

void free_vars(const CNodePtr& n, std::vector<std::string>& bound,
               std::vector<std::string>& out) {
  if (!n) return;
  auto note = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
    if (std::find(out.begin(), out.end(), v) != out.end()) return;
    out.push_back(v);
  };
  switch (n->kind) {
    case CNode::Rel:
    case CNode::Eq:
      note(n->var_a);
      note(n->var_b);
      return;
    case CNode::Not:
      free_vars(n->a, bound, out);
      return;
    case CNode::And:
    case CNode::Or:
    case CNode::Impl:
      free_vars(n->a, bound, out);
      free_vars(n->b, bound, out);
      return;
    case CNode::Forall:
    case CNode::Exists:
      bound.push_back(n->var_a);
      free_vars(n->a, bound, out);
      bound.pop_back();
      return;
  }
}

bool eval_node(const CNodePtr& n, const Frame& fr,
               std::vector<std::pair<std::string, int>>& env) {
  auto lookup = [&](const std::string& v) -> int {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == v) return it->second;
    throw std::invalid_argument("unbound condition variable " + v);
  };
  switch (n->kind) {
    case CNode::Rel:
      return fr.related(lookup(n->var_a), lookup(n->var_b));
    case CNode::Eq:
      return lookup(n->var_a) == lookup(n->var_b);
    case CNode::Not:
      return !eval_node(n->a, fr, env);
    case CNode::And:
      return eval_node(n->a, fr, env) && eval_node(n->b, fr, env);
    case CNode::Or:
      return eval_node(n->a, fr, env) || eval_node(n->b, fr, env);
    case CNode::Impl:
      return !eval_node(n->a, fr, env) || eval_node(n->b, fr, env);
    case CNode::Forall:
      for (int w = 0; w < fr.n; ++w) {
        env.emplace_back(n->var_a, w);
        bool ok = eval_node(n->a, fr, env);
        env.pop_back();
        if (!ok) return false;
      }
      return true;
    case CNode::Exists:
      for (int w = 0; w < fr.n; ++w) {
        env.emplace_back(n->var_a, w);
        bool ok = eval_node(n->a, fr, env);
        env.pop_back();
        if (ok) return true;
      }
      return false;
  }
  return false;
}

void print_node(const CNodePtr& n, std::ostringstream& os) {
  switch (n->kind) {
    case CNode::Rel:
      os << "R(" << n->var_a << "," << n->var_b << ")";
      return;
    case CNode::Eq:
      os << n->var_a << " = " << n->var_b;
      return;
    case CNode::Not:
      os << "~";
      print_node(n->a, os);
      return;
    case CNode::And:
    case CNode::Or:
    case CNode::Impl: {
      const char* op = n->kind == CNode::And ? " & " : n->kind == CNode::Or ? " | " : " -> ";
      os << "(";
      print_node(n->a, os);
      os << op;
      print_node(n->b, os);
      os << ")";
      return;
    }
    case CNode::Forall:
    case CNode::Exists:
      os << (n->kind == CNode::Forall ? "forall " : "exists ") << n->var_a << ". (";
      print_node(n->a, os);
      os << ")";
      return;
  }
}

}  // namespace

FrameCondition FrameCondition::parse(std::string_view text) {
  CNodePtr root = CondParser(text).parse();
  // Implicit universal closure of free variables, first occurrence outermost.
  std::vector<std::string> bound, free;
  free_vars(root, bound, free);
  for (auto it = free.rbegin(); it != free.rend(); ++it)
    root = cnode(CNode::Forall, *it, "", root);
  FrameCondition c;
  c.root_ = std::move(root);
  return c;
}

std::string FrameCondition::str() const {
  std::ostringstream os;
  print_node(root_, os);
  return os.str();
}

bool FrameCondition::eval(const Frame& fr) const {
  std::vector<std::pair<std::string, int>> env;
  return eval_node(root_, fr, env);
}

bool eval_condition(const Frame& fr, const FrameCondition& c) { return c.eval(fr); }

// ---------------------------------------------------------------------------
// Correspondence

CorrespondenceResult correspondence_scan(const std::string& axiom_name,
                                         const Formula& axiom,
                                         const FrameCondition& condition,
                                         const CorrespondenceOptions& opts) {
  CorrespondenceResult out;
  out.axiom_name = axiom_name;
  out.axiom_text = axiom.str();
  out.condition_text = condition.str();
  out.cls = opts.cls;
  out.max_worlds = opts.max_worlds;
  for (int n = 1; n <= opts.max_worlds; ++n) {
    for (const Frame& fr : enumerate_frames(n, opts.cls)) {
      if (++out.frames_scanned > opts.frame_budget)
        throw ResourceCapError("frame budget " + std::to_string(opts.frame_budget) +
                               " exhausted at n=" + std::to_string(n));
      bool av = frame_valid(fr, axiom);
      bool ch = condition.eval(fr);
      if (av != ch) out.mismatches.push_back({fr, av, ch});
    }
  }
  return out;
}

}  // namespace nmlab
