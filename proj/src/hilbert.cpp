#include "nmlab/hilbert.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "nmlab/nmatrix.hpp"

namespace nmlab {

const Schema* System::axiom(std::string_view axiom_name) const {
  for (const auto& [n, s] : axioms)
    if (n == axiom_name) return &s;
  return nullptr;
}

namespace {

std::pair<std::string, Schema> ax(std::string name, std::string pattern) {
  return {std::move(name), Schema::parse(pattern)};
}

std::vector<std::pair<std::string, Schema>> classical_base() {
  return {
      ax("p1", "A -> (B -> A)"),
      ax("p2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))"),
      ax("p3", "(~B -> ~A) -> (A -> B)"),
  };
}

System make_w() {
  System sys;
  sys.name = "W";
  sys.axioms = classical_base();
  sys.axioms.push_back(ax("T", "[]A -> A"));
  sys.necessitation = false;
  return sys;
}

System make_tbat() {
  System sys = make_w();
  sys.name = "TBAT";
  static const char* picks[] = {
      "N1", "N4", "B1", "B7",
      "I_PP_P", "I_tP_P", "I_fP_P", "I_RR_P", "I_Rt_P", "I_RP_P", "I_Rf_P",
      "I_Pt_t", "I_fR_t", "I_Pf_f", "I_tf_f", "I_tR_f", "I_PR_R",
  };
  for (const char* name : picks) sys.axioms.emplace_back(name, strengthening(name).axiom);
  return sys;
}

System make_kripke_system(std::string_view name) {
  System sys;
  sys.name = std::string(name);
  sys.axioms = classical_base();
  sys.axioms.push_back(ax("K", "[](A -> B) -> ([]A -> []B)"));
  sys.necessitation = true;
  if (name == "GL") {
    sys.axioms.push_back(ax("4", "[]A -> [][]A"));
    sys.axioms.push_back(ax("Loeb", "[]([]A -> A) -> []A"));
    return sys;
  }
  if (name == "K") return sys;
  sys.axioms.push_back(ax("T", "[]A -> A"));
  if (name == "T") return sys;
  sys.axioms.push_back(ax("4", "[]A -> [][]A"));
  if (name == "S4") return sys;
  sys.axioms.push_back(ax("B", "A -> []~[]~A"));
  return sys;  // S5
}

}  // namespace

System builtin_system(std::string_view name) {
  if (name == "W") return make_w();
  if (name == "TBAT") return make_tbat();
  if (name == "K" || name == "T" || name == "S4" || name == "S5" || name == "GL")
    return make_kripke_system(name);
  throw std::invalid_argument("unknown system: " + std::string(name));
}

std::vector<std::string> builtin_system_names() {
  return {"W", "TBAT", "K", "T", "S4", "S5", "GL"};
}

Formula Proof::conclusion() const {
  if (lines.empty()) throw std::logic_error("empty proof has no conclusion");
  return lines.back().formula;
}

Proof Proof::parse_jsonl(std::istream& in) {
  Proof proof;
  std::string raw;
  int lineno = 0;
  bool seen_line = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto start = raw.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
      throw ProofFormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      if (j.contains("premises")) {
        if (seen_line || !proof.premises.empty())
          throw ProofFormatError("line " + std::to_string(lineno) +
                                 ": premises must come first and only once");
        for (const auto& p : j.at("premises"))
          proof.premises.push_back(Formula::parse(p.get<std::string>()));
        continue;
      }
      ProofLine ln;
      ln.formula = Formula::parse(j.at("formula").get<std::string>());
      ln.rule = j.at("rule").get<std::string>();
      if (j.contains("refs"))
        for (const auto& r : j.at("refs")) ln.refs.push_back(r.get<int>());
      proof.lines.push_back(std::move(ln));
      seen_line = true;
    } catch (const ProofFormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw ProofFormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return proof;
}

Proof Proof::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProofFormatError("cannot open " + path);
  return parse_jsonl(in);
}

CheckResult check_proof(const Proof& proof, const System& sys) {
  CheckResult res;
  std::vector<std::set<int>> deps(proof.lines.size());

  for (std::size_t i = 0; i < proof.lines.size(); ++i) {
    const ProofLine& ln = proof.lines[i];
    auto reject = [&](const std::string& why) {
      res.ok = false;
      res.line = static_cast<int>(i) + 1;
      res.reason = why;
      return res;
    };
    for (int r : ln.refs)
      if (r < 1 || r > static_cast<int>(i))
        return reject("reference " + std::to_string(r) + " is not an earlier line");

    if (ln.rule == "premise") {
      int found = -1;
      for (std::size_t k = 0; k < proof.premises.size(); ++k)
        if (proof.premises[k] == ln.formula) { found = static_cast<int>(k); break; }
      if (found < 0) return reject(ln.formula.str() + " is not among the premises");
      deps[i].insert(found);
      continue;
    }
    if (ln.rule == "mp") {
      if (ln.refs.size() != 2) return reject("mp needs exactly two references");
      const Formula& a = proof.lines[ln.refs[0] - 1].formula;
      const Formula& imp = proof.lines[ln.refs[1] - 1].formula;
      if (!(imp == Formula::impl(a, ln.formula)))
        return reject("line " + std::to_string(ln.refs[1]) + " is not line " +
                      std::to_string(ln.refs[0]) + " -> this line");
      deps[i] = deps[ln.refs[0] - 1];
      deps[i].insert(deps[ln.refs[1] - 1].begin(), deps[ln.refs[1] - 1].end());
      continue;
    }
    if (ln.rule == "nec") {
      if (!sys.necessitation)
        return reject("necessitation is not part of " + sys.name);
      if (ln.refs.size() != 1) return reject("nec needs exactly one reference");
      if (!deps[ln.refs[0] - 1].empty())
        return reject("necessitation over a premise-dependent line");
      if (!(ln.formula == Formula::box(proof.lines[ln.refs[0] - 1].formula)))
        return reject("this line is not box of line " + std::to_string(ln.refs[0]));
      continue;
    }
    const Schema* schema = sys.axiom(ln.rule);
    if (!schema) return reject("unknown rule '" + ln.rule + "'");
    if (!ln.refs.empty()) return reject("axiom lines take no references");
    if (!schema->match(ln.formula))
      return reject(ln.formula.str() + " is not an instance of " + ln.rule);
  }
  res.ok = true;
  return res;
}

namespace {

struct DerivRecord {
  std::string rule;   // axiom name, "premise", "mp" or "nec"
  Formula a, b;       // mp: antecedent and implication; nec: the boxed line
  bool from_free = false;  // mp/nec: whether operands came from the free tier
};

// Two-tier forward closure: tier F holds premise-free derivations (eligible
// for necessitation), tier D everything.  F is a subset of D.
struct ForwardState {
  std::unordered_map<Formula, DerivRecord, FormulaHash> any, free;
  std::unordered_map<Formula, std::vector<Formula>, FormulaHash> impls_any, impls_free;
  std::vector<std::pair<Formula, bool>> work;  // (formula, premise_free)
  std::size_t cap;
  bool overflow = false;

  bool add(const Formula& f, bool premise_free, const DerivRecord& rec) {
    bool grew = false;
    if (premise_free && !free.count(f)) {
      free.emplace(f, rec);
      work.emplace_back(f, true);
      grew = true;
    }
    if (!any.count(f)) {
      any.emplace(f, rec);
      work.emplace_back(f, false);
      grew = true;
      if (any.size() > cap) overflow = true;
    }
    return grew;
  }
};

}  // namespace

std::optional<Proof> derive_bounded(const Formula& goal, const System& sys,
                                    const std::vector<Formula>& premises,
                                    const DeriveOptions& opts) {
  if (goal.empty()) throw std::invalid_argument("derive_bounded: empty goal");
  if (goal.contains_meta()) throw std::invalid_argument("derive_bounded: goal contains metavariables");

  for (const auto& [name, schema] : sys.axioms)
    if (schema.match(goal)) {
      Proof proof;
      proof.premises = premises;
      proof.lines.push_back({goal, name, {}});
      return proof;
    }

  std::vector<Formula> roots{goal};
  for (const auto& p : premises) roots.push_back(p);
  const Closure closure = Closure::of(roots);
  std::vector<Formula> universe;
  for (const auto& it : closure.items()) universe.push_back(it.formula);

  std::unordered_set<Formula, FormulaHash> box_targets;
  for (const auto& f : universe)
    if (f.kind() == Conn::Box) box_targets.insert(f);

  ForwardState st;
  st.cap = opts.max_formulas;

  for (const auto& p : premises) st.add(p, false, {"premise", {}, {}, false});

  // The goal ends the search the moment it appears; a budget overflow only
  // counts when the goal is still missing at that point.
  bool found = st.any.count(goal) > 0;

  for (const auto& [name, schema] : sys.axioms) {
    if (found) break;
    const auto metas = schema.metavariables();
    std::vector<std::size_t> pick(metas.size(), 0);
    while (!found) {
      Substitution sub;
      for (std::size_t k = 0; k < metas.size(); ++k) sub[metas[k]] = universe[pick[k]];
      st.add(schema.instantiate(sub), true, {name, {}, {}, false});
      if (st.any.count(goal)) { found = true; break; }
      if (st.overflow) return std::nullopt;
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == universe.size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }

  std::size_t cursor = 0;
  while (!found && cursor < st.work.size()) {
    const auto [f, is_free] = st.work[cursor++];
    auto& impls = is_free ? st.impls_free : st.impls_any;
    auto& tier = is_free ? st.free : st.any;

    if (f.kind() == Conn::Impl) {
      impls[f.left()].push_back(f);
      if (tier.count(f.left()))
        st.add(f.right(), is_free, {"mp", f.left(), f, is_free});
    }
    auto want = impls.find(f);
    if (want != impls.end())
      for (const auto& imp : want->second)
        st.add(imp.right(), is_free, {"mp", f, imp, is_free});
    if (is_free && sys.necessitation) {
      const Formula boxed = Formula::box(f);
      if (box_targets.count(boxed)) st.add(boxed, true, {"nec", f, {}, true});
    }
    if (st.any.count(goal)) break;
    if (st.overflow) return std::nullopt;
  }

  const bool have_free = st.free.count(goal) > 0;
  if (!have_free && !st.any.count(goal)) return std::nullopt;

  Proof proof;
  proof.premises = premises;
  std::unordered_map<Formula, int, FormulaHash> line_free, line_any;

  // Emits a derivation of f, from the free tier when asked, and returns its
  // 1-based line number.
  auto emit = [&](auto&& self, const Formula& f, bool need_free) -> int {
    auto& memo = need_free ? line_free : line_any;
    if (auto it = memo.find(f); it != memo.end()) return it->second;
    const DerivRecord& rec = need_free ? st.free.at(f) : st.any.at(f);
    ProofLine ln;
    ln.formula = f;
    ln.rule = rec.rule;
    if (rec.rule == "mp") {
      const int la = self(self, rec.a, rec.from_free);
      const int li = self(self, rec.b, rec.from_free);
      ln.refs = {la, li};
    } else if (rec.rule == "nec") {
      ln.refs = {self(self, rec.a, true)};
    }
    proof.lines.push_back(ln);
    const int num = static_cast<int>(proof.lines.size());
    memo[f] = num;
    line_any[f] = num;
    return num;
  };
  emit(emit, goal, have_free);
  return proof;
}

}  // namespace nmlab
