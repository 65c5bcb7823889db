#pragma once
// Modal formula ASTs: parsing, printing, subformula closures, axiom schemas.
//
// Core connectives are Var, Neg, Impl and Box.  Conjunction, disjunction,
// biconditional and Diamond are surface syntax only; the parser expands them:
//
//   a /\ b   =>  ~(a -> ~b)
//   a \/ b   =>  ~a -> b
//   a <-> b  =>  (a -> b) /\ (b -> a)
//   <>a      =>  ~[]~a
//
// Formulas are immutable values backed by shared subtrees; copying is cheap
// and every operation here is safe to call from multiple threads.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nmlab {

enum class Conn : std::uint8_t { Var, Meta, Neg, Impl, Box };

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

class Formula {
 public:
  Formula() = default;  // empty handle; only assignment is valid afterwards

  static Formula var(std::string name);
  static Formula meta(std::string name);
  static Formula neg(Formula body);
  static Formula box(Formula body);
  static Formula impl(Formula lhs, Formula rhs);

  /// Parses the ASCII/Unicode surface grammar.  Metavariables (uppercase
  /// identifiers) are rejected; use Schema::parse for axiom patterns.
  static Formula parse(std::string_view text);

  bool empty() const { return node_ == nullptr; }
  Conn kind() const;
  const std::string& name() const;   // Var, Meta
  const Formula& left() const;       // Neg/Box body, Impl antecedent
  const Formula& right() const;      // Impl consequent
  int size() const;                  // node count
  int modal_depth() const;
  bool contains_meta() const;

  /// Minimal-parenthesis ASCII rendering; parse(str()) round-trips.
  std::string str() const;

  /// Sorted, de-duplicated variable names (metavariables excluded).
  std::vector<std::string> variables() const;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }
  std::size_t hash() const;

  /// Canonical ordering: node count first, then printed form.  Total on
  /// distinct formulas and topological (subformulas order strictly earlier).
  static bool closure_less(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Conn k, std::string name, Formula a, Formula b);
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

using Substitution = std::map<std::string, Formula>;

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An axiom pattern: a formula over metavariables (uppercase identifiers in
/// the surface syntax) mixed with ordinary connectives.
class Schema {
 public:
  Schema() = default;
  explicit Schema(Formula pattern) : pattern_(std::move(pattern)) {}
  static Schema parse(std::string_view text);

  const Formula& pattern() const { return pattern_; }
  std::string str() const { return pattern_.str(); }
  std::vector<std::string> metavariables() const;  // sorted, unique

  /// Replaces every metavariable via `sub`; throws SchemaError if a
  /// metavariable of the pattern has no binding or a binding contains a
  /// metavariable itself.
  Formula instantiate(const Substitution& sub) const;

  /// First-order match of `f` against the pattern: returns the unique witness
  /// substitution, or nullopt when shapes differ or a metavariable would need
  /// two different values.
  std::optional<Substitution> match(const Formula& f) const;

 private:
  Formula pattern_;
};

/// Subformula closure of a set of roots: de-duplicated, sorted by
/// Formula::closure_less, so every item's operands appear at earlier indices.
class Closure {
 public:
  struct Item {
    Formula formula;
    Conn kind;
    int a = -1;  // operand index (Neg/Box body, Impl antecedent)
    int b = -1;  // Impl consequent
  };

  static Closure of(const std::vector<Formula>& roots);

  std::size_t size() const { return items_.size(); }
  const Item& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Item>& items() const { return items_; }
  std::optional<std::size_t> index_of(const Formula& f) const;

 private:
  std::vector<Item> items_;
};

}  // namespace nmlab
