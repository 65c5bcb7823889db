#include "nmlab/nmatrix.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nmlab {

// ---------------------------------------------------------------------------
// Construction and validation

Nmatrix::Nmatrix(std::string name, std::vector<std::string> values,
                 std::vector<std::string> designated, std::vector<ValueSet> neg,
                 std::vector<ValueSet> box, std::vector<std::vector<ValueSet>> impl)
    : name_(std::move(name)),
      values_(std::move(values)),
      neg_(std::move(neg)),
      box_(std::move(box)),
      impl_(std::move(impl)) {
  const std::size_t n = values_.size();
  if (n == 0 || n > 32) throw MatrixFormatError("value count must be in 1..32");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (values_[i] == values_[j])
        throw MatrixFormatError("duplicate value symbol " + values_[i]);

  for (const std::string& d : designated) {
    auto id = value_id(d);
    if (!id) throw MatrixFormatError("designated symbol " + d + " not a value");
    designated_.add(*id);
  }
  if (designated_.empty()) throw MatrixFormatError("designated set is empty");
  if (designated_.count() == static_cast<int>(n))
    throw MatrixFormatError("designated set must be a proper subset");

  ValueSet full;
  for (std::size_t v = 0; v < n; ++v) full.add(static_cast<ValueId>(v));
  auto check_cell = [&](ValueSet s, const char* where) {
    if (s.empty()) throw MatrixFormatError(std::string("empty cell in ") + where);
    if (!s.subset_of(full))
      throw MatrixFormatError(std::string("cell value out of range in ") + where);
  };
  if (neg_.size() != n || box_.size() != n || impl_.size() != n)
    throw MatrixFormatError("table shape does not match value count");
  for (std::size_t a = 0; a < n; ++a) {
    check_cell(neg_[a], "neg");
    check_cell(box_[a], "box");
    if (impl_[a].size() != n) throw MatrixFormatError("impl table is not square");
    for (std::size_t b = 0; b < n; ++b) check_cell(impl_[a][b], "impl");
  }
}

std::optional<ValueId> Nmatrix::value_id(std::string_view symbol) const {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] == symbol) return static_cast<ValueId>(i);
  return std::nullopt;
}

ValueSet Nmatrix::cell(Conn c, ValueId a, ValueId b) const {
  switch (c) {
    case Conn::Neg:
      return neg_[a];
    case Conn::Box:
      return box_[a];
    case Conn::Impl:
      return impl_[a][b];
    default:
      throw std::invalid_argument("connective has no table");
  }
}

bool Nmatrix::same_cells(const Nmatrix& o) const {
  return same_carrier(o) && neg_ == o.neg_ && box_ == o.box_ && impl_ == o.impl_;
}

// ---------------------------------------------------------------------------
// JSON round-trip
//
// {"values":["P","t","f","R"], "designated":["P","t"],
//  "neg":{"P":["R"],...}, "box":{...}, "impl":{"P,P":["P"],...}}

namespace {

std::vector<std::string> set_symbols(const Nmatrix& m, ValueSet s) {
  std::vector<std::string> out;
  for (ValueId v : s.values()) out.push_back(m.value_name(v));
  return out;
}

}  // namespace

nlohmann::json Nmatrix::to_json() const {
  nlohmann::json j;
  j["name"] = name_;
  j["values"] = values_;
  j["designated"] = set_symbols(*this, designated_);
  nlohmann::json neg, box, impl;
  for (std::size_t a = 0; a < values_.size(); ++a) {
    neg[values_[a]] = set_symbols(*this, neg_[a]);
    box[values_[a]] = set_symbols(*this, box_[a]);
    for (std::size_t b = 0; b < values_.size(); ++b)
      impl[values_[a] + "," + values_[b]] = set_symbols(*this, impl_[a][b]);
  }
  j["neg"] = neg;
  j["box"] = box;
  j["impl"] = impl;
  return j;
}

Nmatrix Nmatrix::from_json(const nlohmann::json& j, std::string name) {
  if (!j.is_object()) throw MatrixFormatError("matrix document must be an object");
  for (const char* key : {"values", "designated", "neg", "box", "impl"})
    if (!j.contains(key)) throw MatrixFormatError(std::string("missing key ") + key);

  std::vector<std::string> values = j.at("values").get<std::vector<std::string>>();
  std::vector<std::string> designated =
      j.at("designated").get<std::vector<std::string>>();

  auto id_of = [&](const std::string& sym) -> ValueId {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] == sym) return static_cast<ValueId>(i);
    throw MatrixFormatError("unknown value symbol " + sym);
  };
  auto read_set = [&](const nlohmann::json& arr) {
    ValueSet s;
    for (const auto& sym : arr.get<std::vector<std::string>>()) s.add(id_of(sym));
    return s;
  };

  const std::size_t n = values.size();
  std::vector<ValueSet> neg(n), box(n);
  std::vector<std::vector<ValueSet>> impl(n, std::vector<ValueSet>(n));
  for (std::size_t a = 0; a < n; ++a) {
    if (!j.at("neg").contains(values[a]))
      throw MatrixFormatError("neg table missing row " + values[a]);
    if (!j.at("box").contains(values[a]))
      throw MatrixFormatError("box table missing row " + values[a]);
    neg[a] = read_set(j.at("neg").at(values[a]));
    box[a] = read_set(j.at("box").at(values[a]));
    for (std::size_t b = 0; b < n; ++b) {
      std::string key = values[a] + "," + values[b];
      if (!j.at("impl").contains(key))
        throw MatrixFormatError("impl table missing cell " + key);
      impl[a][b] = read_set(j.at("impl").at(key));
    }
  }
  if (j.contains("name")) name = j.at("name").get<std::string>();
  return Nmatrix(std::move(name), std::move(values), std::move(designated),
                 std::move(neg), std::move(box), std::move(impl));
}

Nmatrix Nmatrix::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixFormatError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MatrixFormatError(path + ": " + e.what());
  }
  return from_json(j, path);
}

std::string Nmatrix::render_table() const {
  std::ostringstream os;
  auto cell_str = [&](ValueSet s) {
    std::string out = "{";
    bool first = true;
    for (ValueId v : s.values()) {
      if (!first) out += ",";
      out += values_[v];
      first = false;
    }
    return out + "}";
  };
  os << "matrix " << name_ << "\n";
  os << "values:";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    os << " " << values_[i];
    if (designated_.contains(static_cast<ValueId>(i))) os << "*";
  }
  os << "  (* designated)\n\n";
  os << "  a    ~a        []a\n";
  for (std::size_t a = 0; a < values_.size(); ++a)
    os << "  " << values_[a] << "    " << cell_str(neg_[a]) << "    "
       << cell_str(box_[a]) << "\n";
  os << "\n  a->b";
  for (const auto& v : values_) os << "  " << v;
  os << "  (rows: a)\n";
  for (std::size_t a = 0; a < values_.size(); ++a) {
    os << "  " << values_[a] << "   ";
    for (std::size_t b = 0; b < values_.size(); ++b) os << "  " << cell_str(impl_[a][b]);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Built-in matrices

namespace {

ValueSet vs(std::initializer_list<int> ids) {
  ValueSet s;
  for (int v : ids) s.add(static_cast<ValueId>(v));
  return s;
}

// Value ids: P=0, t=1, f=2, R=3.
constexpr int P = 0, T = 1, F = 2, R = 3;

Nmatrix make_tbat(bool original) {
  std::vector<ValueSet> neg{vs({R}), vs({F}), vs({T}), vs({P})};
  std::vector<ValueSet> box{vs({P}), vs({F, R}), vs({F, R}), vs({R})};
  std::vector<std::vector<ValueSet>> impl{
      {vs({P}), vs({T}), vs({F}), vs({R})},
      {vs({P}), vs({P, T}), vs({F}), vs({F})},
      {vs({P}), vs({P, T}), vs({P, T}), original ? vs({P, T}) : vs({T})},
      {vs({P}), vs({P}), vs({P}), vs({P})},
  };
  return Nmatrix(original ? "TBAT_ORIGINAL" : "TBAT", {"P", "t", "f", "R"},
                 {"P", "t"}, std::move(neg), std::move(box), std::move(impl));
}

Nmatrix make_w(bool simplified) {
  std::vector<ValueSet> neg{vs({F, R}), vs({F, R}),
                            simplified ? vs({T}) : vs({P, T}),
                            simplified ? vs({P}) : vs({P, T})};
  std::vector<ValueSet> box{vs({P, T}), vs({F, R}), vs({F, R}), vs({F, R})};
  std::vector<std::vector<ValueSet>> impl{
      {vs({P, T}), vs({P, T}), vs({F, R}), vs({F, R})},
      {vs({P, T}), vs({P, T}), vs({F, R}), vs({F, R})},
      {vs({P, T}), vs({P, T}), vs({P, T}), vs({P, T})},
      {vs({P, T}), vs({P, T}), vs({P, T}), vs({P, T})},
  };
  return Nmatrix(simplified ? "W_SIMPLIFIED" : "W", {"P", "t", "f", "R"},
                 {"P", "t"}, std::move(neg), std::move(box), std::move(impl));
}

}  // namespace

const Nmatrix& builtin_matrix(std::string_view name) {
  static const Nmatrix tbat = make_tbat(false);
  static const Nmatrix tbat_original = make_tbat(true);
  static const Nmatrix w = make_w(false);
  static const Nmatrix w_simplified = make_w(true);
  if (name == "TBAT") return tbat;
  if (name == "TBAT_ORIGINAL") return tbat_original;
  if (name == "W") return w;
  if (name == "W_SIMPLIFIED") return w_simplified;
  throw std::invalid_argument("unknown matrix " + std::string(name));
}

const std::vector<std::string>& builtin_matrix_names() {
  static const std::vector<std::string> names{"TBAT", "TBAT_ORIGINAL", "W",
                                              "W_SIMPLIFIED"};
  return names;
}

// ---------------------------------------------------------------------------
// Compose and refine

Nmatrix compose(const Nmatrix& base, const std::vector<CellRestriction>& rs,
                std::string name) {
  const int n = base.value_count();
  std::vector<ValueSet> neg(n), box(n);
  std::vector<std::vector<ValueSet>> impl(n, std::vector<ValueSet>(n));
  for (int a = 0; a < n; ++a) {
    neg[a] = base.neg_cell(static_cast<ValueId>(a));
    box[a] = base.box_cell(static_cast<ValueId>(a));
    for (int b = 0; b < n; ++b)
      impl[a][b] = base.impl_cell(static_cast<ValueId>(a), static_cast<ValueId>(b));
  }

  auto resolve = [&](const std::string& sym) -> ValueId {
    auto id = base.value_id(sym);
    if (!id) throw std::invalid_argument("restriction value " + sym +
                                         " is not a value of " + base.name());
    return *id;
  };

  for (const CellRestriction& r : rs) {
    const std::size_t want = (r.connective == Conn::Impl) ? 2 : 1;
    if (r.inputs.size() != want)
      throw std::invalid_argument("restriction input arity mismatch");
    ValueSet allowed;
    for (const std::string& sym : r.allowed) allowed.add(resolve(sym));
    ValueId a = resolve(r.inputs[0]);
    ValueSet* slot = nullptr;
    std::string where;
    switch (r.connective) {
      case Conn::Neg:
        slot = &neg[a];
        where = "neg(" + r.inputs[0] + ")";
        break;
      case Conn::Box:
        slot = &box[a];
        where = "box(" + r.inputs[0] + ")";
        break;
      case Conn::Impl: {
        ValueId b = resolve(r.inputs[1]);
        slot = &impl[a][b];
        where = "impl(" + r.inputs[0] + "," + r.inputs[1] + ")";
        break;
      }
      default:
        throw std::invalid_argument("restriction on a connective with no table");
    }
    *slot = *slot & allowed;
    if (slot->empty())
      throw EmptyCellError("restriction empties cell " + where + " of " + base.name());
  }

  if (name.empty()) {
    name = base.name();
    for (const CellRestriction& r : rs) name += "+";
  }
  std::vector<std::string> desig;
  for (ValueId v : base.designated_set().values()) desig.push_back(base.value_name(v));
  return Nmatrix(std::move(name), base.value_names(), std::move(desig),
                 std::move(neg), std::move(box), std::move(impl));
}

bool refines(const Nmatrix& fine, const Nmatrix& coarse) {
  if (!fine.same_carrier(coarse))
    throw std::invalid_argument("refines: carriers differ (" + fine.name() + " vs " +
                                coarse.name() + ")");
  const int n = fine.value_count();
  for (int a = 0; a < n; ++a) {
    ValueId va = static_cast<ValueId>(a);
    if (!fine.neg_cell(va).subset_of(coarse.neg_cell(va))) return false;
    if (!fine.box_cell(va).subset_of(coarse.box_cell(va))) return false;
    for (int b = 0; b < n; ++b) {
      ValueId vb = static_cast<ValueId>(b);
      if (!fine.impl_cell(va, vb).subset_of(coarse.impl_cell(va, vb))) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Valuation enumeration

std::string Valuation::describe(const Nmatrix& m) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i)
    os << (*closure)[i].formula.str() << " = " << m.value_name(values[i]) << "\n";
  return os.str();
}

namespace {

// Cell for closure item i given the values already assigned below it.
ValueSet item_cell(const Closure::Item& item, const Nmatrix& m,
                   const std::vector<ValueId>& vals) {
  switch (item.kind) {
    case Conn::Var: {
      ValueSet all;
      for (int v = 0; v < m.value_count(); ++v) all.add(static_cast<ValueId>(v));
      return all;
    }
    case Conn::Neg:
      return m.neg_cell(vals[item.a]);
    case Conn::Box:
      return m.box_cell(vals[item.a]);
    case Conn::Impl:
      return m.impl_cell(vals[item.a], vals[item.b]);
    case Conn::Meta:
      break;
  }
  throw std::invalid_argument("closure contains a metavariable");
}

}  // namespace

void enumerate_valuations(
    const Closure& c, const Nmatrix& m,
    const std::function<Walk(const Valuation&)>& on_complete,
    const std::function<Walk(std::size_t, ValueId)>& on_assign) {
  Valuation val;
  val.closure = &c;
  val.values.assign(c.size(), 0);
  bool stop = false;

  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (stop) return;
    if (i == c.size()) {
      if (on_complete && on_complete(val) == Walk::Stop) stop = true;
      return;
    }
    ValueSet cell = item_cell(c[i], m, val.values);
    for (ValueId v : cell.values()) {
      val.values[i] = v;
      if (on_assign) {
        Walk w = on_assign(i, v);
        if (w == Walk::Stop) {
          stop = true;
          return;
        }
        if (w == Walk::Prune) continue;
      }
      self(self, i + 1);
      if (stop) return;
    }
  };
  rec(rec, 0);
}

std::size_t count_valuations(const Closure& c, const Nmatrix& m) {
  std::size_t n = 0;
  enumerate_valuations(c, m, [&](const Valuation&) {
    ++n;
    return Walk::Continue;
  });
  return n;
}

// ---------------------------------------------------------------------------
// Consequence

Verdict check_consequence(const std::vector<Formula>& premises,
                          const Formula& conclusion, const Nmatrix& m,
                          const ConsequenceOptions& opts) {
  std::vector<Formula> roots = premises;
  roots.push_back(conclusion);

  Verdict out;
  out.closure = std::make_shared<const Closure>(Closure::of(roots));
  const Closure& c = *out.closure;
  if (c.size() > opts.max_closure)
    throw ClosureCapError("closure size " + std::to_string(c.size()) +
                          " exceeds cap " + std::to_string(opts.max_closure));

  // premise_at[i] / conclusion_at[i]: index i carries that role.
  std::vector<bool> premise_at(c.size(), false);
  for (const Formula& p : premises) premise_at[*c.index_of(p)] = true;
  const std::size_t conclusion_at = *c.index_of(conclusion);

  ValueSet desig = m.designated_set();
  out.valid = true;
  enumerate_valuations(
      c, m,
      [&](const Valuation& v) {
        out.valid = false;
        out.witness = v;
        out.witness->closure = out.closure.get();
        return Walk::Stop;
      },
      [&](std::size_t i, ValueId v) {
        // A completed valuation is a countermodel, so cut any branch that can
        // no longer produce one.
        if (premise_at[i] && !desig.contains(v)) return Walk::Prune;
        if (i == conclusion_at && desig.contains(v)) return Walk::Prune;
        return Walk::Continue;
      });
  return out;
}

Verdict check_tautology(const Formula& f, const Nmatrix& m,
                        const ConsequenceOptions& opts) {
  return check_consequence({}, f, m, opts);
}

}  // namespace nmlab
