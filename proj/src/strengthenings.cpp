#include <array>
#include <sstream>

#include "nmlab/nmatrix.hpp"

// The named single-cell strengthenings of W_SIMPLIFIED.  Each row pins one
// non-deterministic cell to one value and carries the axiom whose validity
// separates the strengthened matrix from the base, plus the provability
// remark attached to that axiom.  Axioms are stated over the metavariables
// A and B.

namespace nmlab {

std::string_view remark_name(Remark r) {
  switch (r) {
    case Remark::None:
      return "None";
    case Remark::ProvableK:
      return "ProvableK";
    case Remark::ProvableT:
      return "ProvableT";
    case Remark::NotProvableS5:
      return "NotProvableS5";
  }
  return "None";
}

namespace {

NamedStrengthening row(std::string name, Conn conn, std::vector<std::string> inputs,
                       std::string allowed, std::string axiom, Remark remark) {
  NamedStrengthening s;
  s.name = std::move(name);
  s.restriction = {conn, std::move(inputs), {std::move(allowed)}};
  s.axiom = Schema::parse(axiom);
  s.remark = remark;
  return s;
}

// Characteristic pattern of a value v applied to x: the formula shape that
// holds exactly when x takes value v.
std::vector<Formula> value_pattern(char v, const Formula& x) {
  Formula bx = Formula::box(x);
  Formula bnx = Formula::box(Formula::neg(x));
  switch (v) {
    case 'P':
      return {bx};
    case 't':
      return {Formula::neg(bx), x};
    case 'f':
      return {Formula::neg(bnx), Formula::neg(x)};
    case 'R':
      return {bnx};
  }
  throw std::invalid_argument("bad value tag");
}

Formula fold_conj(const std::vector<Formula>& conjuncts) {
  Formula acc = conjuncts.front();
  for (std::size_t i = 1; i < conjuncts.size(); ++i)
    acc = Formula::neg(Formula::impl(acc, Formula::neg(conjuncts[i])));
  return acc;
}

// Axiom of the implication-cell row impl(a,b) = {c}:
//   pattern_a(A) /\ pattern_b(B)  ->  pattern_c(A -> B)
NamedStrengthening impl_row(char a, char b, char c, Remark remark) {
  Formula A = Formula::meta("A");
  Formula B = Formula::meta("B");
  std::vector<Formula> premise = value_pattern(a, A);
  for (const Formula& g : value_pattern(b, B)) premise.push_back(g);
  Formula conclusion = fold_conj(value_pattern(c, Formula::impl(A, B)));

  NamedStrengthening s;
  s.name = std::string("I_") + a + b + "_" + c;
  s.restriction = {Conn::Impl, {std::string(1, a), std::string(1, b)},
                   {std::string(1, c)}};
  s.axiom = Schema(Formula::impl(fold_conj(premise), conclusion));
  s.remark = remark;
  return s;
}

std::vector<NamedStrengthening> build_registry() {
  std::vector<NamedStrengthening> reg;

  reg.push_back(row("N1", Conn::Neg, {"P"}, "R", "[]A -> []~~A", Remark::ProvableK));
  reg.push_back(row("N2", Conn::Neg, {"P"}, "f", "[]A -> ~[]~~A", Remark::None));
  reg.push_back(
      row("N3", Conn::Neg, {"t"}, "R", "~[]A /\\ A -> []~~A", Remark::NotProvableS5));
  reg.push_back(
      row("N4", Conn::Neg, {"t"}, "f", "~[]A /\\ A -> ~[]~~A", Remark::ProvableK));

  reg.push_back(row("B1", Conn::Box, {"P"}, "P", "[]A -> [][]A", Remark::None));
  reg.push_back(row("B2", Conn::Box, {"P"}, "t", "[]A -> ~[][]A", Remark::None));
  reg.push_back(
      row("B3", Conn::Box, {"t"}, "R", "~[]A /\\ A -> []~[]A", Remark::None));
  reg.push_back(
      row("B4", Conn::Box, {"t"}, "f", "~[]A /\\ A -> ~[]~[]A", Remark::None));
  reg.push_back(
      row("B5", Conn::Box, {"f"}, "R", "~[]~A /\\ ~A -> []~[]A", Remark::None));
  reg.push_back(row("B6", Conn::Box, {"f"}, "f",
                    "~[]~A /\\ ~A -> ~[]A /\\ ~[]~[]A", Remark::NotProvableS5));
  reg.push_back(row("B7", Conn::Box, {"R"}, "R", "[]~A -> []~[]A", Remark::ProvableT));
  reg.push_back(row("B8", Conn::Box, {"R"}, "f", "[]~A -> ~[]A /\\ ~[]~[]A",
                    Remark::NotProvableS5));

  // Implication rows, in table order: input pairs row-major over P,t,f,R with
  // the two admissible outputs each.  Outputs follow the base cells: rows P
  // and t admit {P,t} against consequents P,t and {f,R} against f,R; rows f
  // and R always admit {P,t}.
  const Remark K = Remark::ProvableK, T = Remark::ProvableT,
               S5 = Remark::NotProvableS5;
  struct Spec {
    char a, b, c;
    Remark r;
  };
  const std::array<Spec, 32> table{{
      {'P', 'P', 'P', K},  {'P', 'P', 't', S5}, {'P', 't', 'P', S5},
      {'P', 't', 't', K},  {'P', 'f', 'f', T},  {'P', 'f', 'R', S5},
      {'P', 'R', 'f', S5}, {'P', 'R', 'R', K},  {'t', 'P', 'P', K},
      {'t', 'P', 't', S5}, {'t', 't', 'P', S5}, {'t', 't', 't', K},
      {'t', 'f', 'f', K},  {'t', 'f', 'R', S5}, {'t', 'R', 'f', T},
      {'t', 'R', 'R', S5}, {'f', 'P', 'P', K},  {'f', 'P', 't', S5},
      {'f', 't', 'P', S5}, {'f', 't', 't', S5}, {'f', 'f', 'P', S5},
      {'f', 'f', 't', S5}, {'f', 'R', 'P', S5}, {'f', 'R', 't', K},
      {'R', 'P', 'P', K},  {'R', 'P', 't', S5}, {'R', 't', 'P', K},
      {'R', 't', 't', S5}, {'R', 'f', 'P', K},  {'R', 'f', 't', S5},
      {'R', 'R', 'P', K},  {'R', 'R', 't', S5},
  }};
  for (const Spec& s : table) reg.push_back(impl_row(s.a, s.b, s.c, s.r));
  return reg;
}

}  // namespace

const std::vector<NamedStrengthening>& strengthening_registry() {
  static const std::vector<NamedStrengthening> reg = build_registry();
  return reg;
}

const NamedStrengthening& strengthening(std::string_view name) {
  for (const NamedStrengthening& s : strengthening_registry())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown strengthening " + std::string(name));
}

std::string registry_digest() {
  std::ostringstream os;
  for (const NamedStrengthening& s : strengthening_registry()) {
    os << s.name << "|" << static_cast<int>(s.restriction.connective) << "|";
    for (const auto& in : s.restriction.inputs) os << in << ",";
    os << "|";
    for (const auto& a : s.restriction.allowed) os << a << ",";
    os << "|" << s.axiom.str() << "|" << remark_name(s.remark) << "\n";
  }
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : os.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace nmlab
