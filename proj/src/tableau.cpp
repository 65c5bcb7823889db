#include "nmlab/tableau.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_set>

namespace nmlab {

std::string_view logic_name(LogicId l) {
  switch (l) {
    case LogicId::K: return "K";
    case LogicId::T: return "T";
    case LogicId::S4: return "S4";
    case LogicId::S5: return "S5";
  }
  return "?";
}

LogicId logic_from(std::string_view name) {
  std::string up(name);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "K") return LogicId::K;
  if (up == "T") return LogicId::T;
  if (up == "S4") return LogicId::S4;
  if (up == "S5") return LogicId::S5;
  throw std::invalid_argument("unknown logic: " + std::string(name));
}

FrameClass logic_frame_class(LogicId l) {
  switch (l) {
    case LogicId::K: return FrameClass::All;
    case LogicId::T: return FrameClass::Reflexive;
    case LogicId::S4: return FrameClass::ReflTrans;
    case LogicId::S5: return FrameClass::Equivalence;
  }
  return FrameClass::All;
}

std::string_view remark_status_name(RemarkStatus s) {
  switch (s) {
    case RemarkStatus::Confirmed: return "confirmed";
    case RemarkStatus::Refuted: return "refuted";
    case RemarkStatus::Unchecked: return "unchecked";
  }
  return "?";
}

namespace {

using Prefix = std::vector<int>;

std::string prefix_str(const Prefix& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

bool is_proper_ancestor(const Prefix& anc, const Prefix& p) {
  if (anc.size() >= p.size()) return false;
  return std::equal(anc.begin(), anc.end(), p.begin());
}

struct Entry {
  Prefix prefix;
  Formula f;
  bool expanded = false;        // alpha/beta/pi entries fire once
  std::set<Prefix> nu_done;     // box entries: targets already served
  int trace_id = 0;
};

using FormulaSet = std::unordered_set<Formula, FormulaHash>;

struct Branch {
  std::vector<Entry> entries;
  std::map<Prefix, FormulaSet> present;
  std::vector<Prefix> prefixes;  // creation order
  std::map<Prefix, int> next_child;
  int next_flat = 2;             // S5 world naming
  bool closed = false;
};

struct Search {
  LogicId logic;
  TableauOptions opts;
  std::size_t applications = 0;
  std::vector<TraceStep> trace;

  int record(const Prefix& p, const Formula& f, const std::string& rule, int parent) {
    TraceStep st;
    st.id = static_cast<int>(trace.size()) + 1;
    st.prefix = prefix_str(p);
    st.formula = f.str();
    st.rule = rule;
    st.parent = parent;
    trace.push_back(st);
    return st.id;
  }

  void spend() {
    if (++applications > opts.max_rule_applications)
      throw DepthExceededError("tableau rule budget exhausted (" +
                               std::to_string(opts.max_rule_applications) + " applications)");
  }

  // Adds f at p unless already there; detects clashes.  Returns false on no-op.
  bool add(Branch& b, const Prefix& p, const Formula& f, const std::string& rule, int parent) {
    auto& set = b.present[p];
    if (set.count(f)) return false;
    if (set.empty()) b.prefixes.push_back(p);
    set.insert(f);
    Entry e;
    e.prefix = p;
    e.f = f;
    e.trace_id = record(p, f, rule, parent);
    b.entries.push_back(e);
    Formula clash;
    if (f.kind() == Conn::Neg && set.count(f.left())) clash = f.left();
    else if (set.count(Formula::neg(f))) clash = Formula::neg(f);
    if (!clash.empty()) {
      b.closed = true;
      record(p, clash, "close", e.trace_id);
    }
    return true;
  }

  bool try_alpha(Branch& b) {
    for (auto& e : b.entries) {
      if (e.expanded || e.f.kind() != Conn::Neg) continue;
      const Formula inner = e.f.left();
      if (inner.kind() == Conn::Neg) {
        e.expanded = true;
        spend();
        Prefix p = e.prefix;
        int parent = e.trace_id;
        add(b, p, inner.left(), "neg-neg", parent);
        return true;
      }
      if (inner.kind() == Conn::Impl) {
        e.expanded = true;
        spend();
        Prefix p = e.prefix;
        int parent = e.trace_id;
        add(b, p, inner.left(), "neg-impl", parent);
        if (!b.closed) add(b, p, Formula::neg(inner.right()), "neg-impl", parent);
        return true;
      }
    }
    return false;
  }

  // Target prefixes a box entry still owes, paired with what to send there.
  bool try_nu(Branch& b) {
    for (std::size_t i = 0; i < b.entries.size(); ++i) {
      if (b.entries[i].f.kind() != Conn::Box) continue;
      const Formula body = b.entries[i].f.left();
      const Formula boxed = b.entries[i].f;
      std::vector<std::pair<Prefix, Formula>> targets;
      const Prefix at = b.entries[i].prefix;
      switch (logic) {
        case LogicId::K:
          for (const auto& p : b.prefixes)
            if (p.size() == at.size() + 1 && is_proper_ancestor(at, p))
              targets.emplace_back(p, body);
          break;
        case LogicId::T:
          targets.emplace_back(at, body);
          for (const auto& p : b.prefixes)
            if (p.size() == at.size() + 1 && is_proper_ancestor(at, p))
              targets.emplace_back(p, body);
          break;
        case LogicId::S4:
          targets.emplace_back(at, body);
          for (const auto& p : b.prefixes)
            if (p.size() == at.size() + 1 && is_proper_ancestor(at, p))
              targets.emplace_back(p, boxed);
          break;
        case LogicId::S5:
          for (const auto& p : b.prefixes) targets.emplace_back(p, body);
          break;
      }
      for (const auto& [p, f] : targets) {
        if (b.entries[i].nu_done.count(p)) continue;
        if (b.present[p].count(f)) {
          b.entries[i].nu_done.insert(p);
          continue;
        }
        b.entries[i].nu_done.insert(p);
        spend();
        add(b, p, f, "nu", b.entries[i].trace_id);
        return true;
      }
    }
    return false;
  }

  int find_beta(const Branch& b) const {
    for (std::size_t i = 0; i < b.entries.size(); ++i)
      if (!b.entries[i].expanded && b.entries[i].f.kind() == Conn::Impl)
        return static_cast<int>(i);
    return -1;
  }

  bool s4_blocked(const Branch& b, const Prefix& p) const {
    const auto& here = b.present.at(p);
    for (const auto& anc : b.prefixes) {
      if (!is_proper_ancestor(anc, p)) continue;
      const auto& there = b.present.at(anc);
      bool sub = true;
      for (const auto& f : here)
        if (!there.count(f)) { sub = false; break; }
      if (sub) return true;
    }
    return false;
  }

  bool try_pi(Branch& b) {
    for (std::size_t i = 0; i < b.entries.size(); ++i) {
      auto& e = b.entries[i];
      if (e.expanded || e.f.kind() != Conn::Neg || e.f.left().kind() != Conn::Box) continue;
      const Formula witness = Formula::neg(e.f.left().left());
      if (logic == LogicId::S5) {
        for (const auto& p : b.prefixes) {
          if (!b.present[p].count(witness)) continue;
          e.expanded = true;
          spend();
          record(p, witness, "pi-reuse", e.trace_id);
          return true;
        }
        e.expanded = true;
        spend();
        Prefix fresh{b.next_flat++};
        add(b, fresh, witness, "pi", e.trace_id);
        return true;
      }
      if (logic == LogicId::S4 && s4_blocked(b, e.prefix)) continue;
      e.expanded = true;
      spend();
      Prefix child = e.prefix;
      child.push_back(b.next_child[e.prefix]++ + 1);
      add(b, child, witness, "pi", e.trace_id);
      return true;
    }
    return false;
  }

  // Explores the branch to closure or saturation.  Returns true when every
  // extension closes; an open saturated branch is kept in `open`.
  bool explore(Branch b, std::optional<Branch>& open) {
    while (true) {
      if (b.closed) return true;
      if (try_alpha(b)) continue;
      if (try_nu(b)) continue;
      int bi = find_beta(b);
      if (bi >= 0) {
        spend();
        const Formula f = b.entries[bi].f;
        const Prefix p = b.entries[bi].prefix;
        const int parent = b.entries[bi].trace_id;
        b.entries[bi].expanded = true;
        Branch left = b;
        add(left, p, Formula::neg(f.left()), "beta-left", parent);
        if (!explore(std::move(left), open)) return false;
        add(b, p, f.right(), "beta-right", parent);
        continue;
      }
      if (try_pi(b)) continue;
      open = std::move(b);
      return false;
    }
  }
};

Model extract_model(const Branch& b, LogicId logic, const Formula& goal) {
  const int n = static_cast<int>(b.prefixes.size());
  std::map<Prefix, int> index;
  for (int i = 0; i < n; ++i) index[b.prefixes[i]] = i;

  Frame fr;
  fr.n = n;
  fr.rel = 0;
  if (logic == LogicId::S5) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) fr = fr.with(i, j);
  } else {
    for (const auto& p : b.prefixes) {
      if (p.size() > 1) {
        Prefix parent(p.begin(), p.end() - 1);
        fr = fr.with(index.at(parent), index.at(p));
      }
    }
    if (logic == LogicId::S4) {
      // loop edges from held-back prefixes to their nearest covering ancestor
      for (const auto& p : b.prefixes) {
        bool held = false;
        for (const auto& e : b.entries)
          if (!e.expanded && e.prefix == p && e.f.kind() == Conn::Neg &&
              e.f.left().kind() == Conn::Box) { held = true; break; }
        if (!held) continue;
        const auto& here = b.present.at(p);
        int best = -1;
        for (const auto& anc : b.prefixes) {
          if (!is_proper_ancestor(anc, p)) continue;
          const auto& there = b.present.at(anc);
          bool sub = true;
          for (const auto& f : here)
            if (!there.count(f)) { sub = false; break; }
          if (sub && (best < 0 || anc.size() > b.prefixes[best].size()))
            best = index.at(anc);
        }
        if (best >= 0) fr = fr.with(index.at(p), best);
      }
    }
    if (logic == LogicId::T || logic == LogicId::S4)
      for (int i = 0; i < n; ++i) fr = fr.with(i, i);
    if (logic == LogicId::S4) {
      for (bool grew = true; grew;) {
        grew = false;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (fr.related(i, j))
              for (int k = 0; k < n; ++k)
                if (fr.related(j, k) && !fr.related(i, k)) {
                  fr = fr.with(i, k);
                  grew = true;
                }
      }
    }
  }

  Model m;
  m.frame = fr;
  for (const auto& v : goal.variables()) {
    uint32_t mask = 0;
    for (int i = 0; i < n; ++i)
      if (b.present.at(b.prefixes[i]).count(Formula::var(v))) mask |= 1u << i;
    m.set(v, mask);
  }
  return m;
}

}  // namespace

TableauResult decide(const Formula& f, LogicId logic, const TableauOptions& opts) {
  if (f.empty()) throw std::invalid_argument("decide: empty formula");
  if (f.contains_meta()) throw std::invalid_argument("decide: formula contains metavariables");
  Search s;
  s.logic = logic;
  s.opts = opts;

  Branch root;
  Prefix one{1};
  s.add(root, one, Formula::neg(f), "init", 0);

  std::optional<Branch> open;
  TableauResult out;
  out.theorem = s.explore(std::move(root), open);
  out.trace = std::move(s.trace);
  if (!out.theorem) {
    Countermodel cm;
    cm.model = extract_model(*open, logic, f);
    cm.world = 0;
    out.counter = cm;
  }
  return out;
}

RemarkCheck verify_remark(const NamedStrengthening& s, const TableauOptions& opts) {
  RemarkCheck out;
  out.name = s.name;
  out.remark = s.remark;
  if (s.remark == Remark::None) {
    out.status = RemarkStatus::Unchecked;
    out.detail = "no provability remark on this row";
    return out;
  }

  Substitution sub;
  static const char* fresh[] = {"p", "q", "r", "s"};
  std::size_t i = 0;
  for (const auto& mv : s.axiom.metavariables()) sub[mv] = Formula::var(fresh[i++]);
  const Formula inst = s.axiom.instantiate(sub);

  const LogicId logic = s.remark == Remark::NotProvableS5
                            ? LogicId::S5
                            : (s.remark == Remark::ProvableT ? LogicId::T : LogicId::K);
  TableauResult r;
  try {
    r = decide(inst, logic, opts);
  } catch (const DepthExceededError& e) {
    out.status = RemarkStatus::Unchecked;
    out.detail = e.what();
    return out;
  }

  if (s.remark == Remark::NotProvableS5) {
    if (r.theorem) {
      out.status = RemarkStatus::Refuted;
      out.detail = "S5 tableau closed on " + inst.str();
      return out;
    }
    const auto& cm = *r.counter;
    const Frame& fr = cm.model.frame;
    const bool frame_ok = fr.reflexive() && fr.transitive() && fr.symmetric();
    const bool falsified = !eval_model(cm.model, cm.world, inst);
    if (frame_ok && falsified) {
      out.status = RemarkStatus::Confirmed;
      out.detail = "counter-model on " + std::to_string(fr.n) + " world(s) checks out";
      out.counter = cm;
    } else {
      out.status = RemarkStatus::Unchecked;
      out.detail = frame_ok ? "extracted model fails to falsify the instance"
                            : "extracted frame is not an equivalence";
    }
    return out;
  }

  if (r.theorem) {
    out.status = RemarkStatus::Confirmed;
    out.detail = std::string(logic_name(logic)) + " tableau closed in " +
                 std::to_string(r.trace.size()) + " steps";
  } else {
    out.status = RemarkStatus::Refuted;
    out.detail = std::string(logic_name(logic)) + " tableau found a counter-model for " + inst.str();
    out.counter = r.counter;
  }
  return out;
}

}  // namespace nmlab
