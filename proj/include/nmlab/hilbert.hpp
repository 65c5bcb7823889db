#pragma once
// Hilbert systems, proof checking and bounded proof search.
//
// A system is a list of named axiom schemas plus modus ponens, with
// necessitation optional.  Proofs are flat line lists; each line carries the
// rule that licenses it and 1-based references to earlier lines.  The checker
// tracks which premises every line depends on so that necessitation is only
// granted on premise-free lines.

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmlab/formula.hpp"

namespace nmlab {

struct System {
  std::string name;
  std::vector<std::pair<std::string, Schema>> axioms;
  bool necessitation = false;

  const Schema* axiom(std::string_view axiom_name) const;
};

/// W, TBAT, K, T, S4, S5, GL.
System builtin_system(std::string_view name);
std::vector<std::string> builtin_system_names();

struct ProofFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProofLine {
  Formula formula;
  std::string rule;        // axiom name, "premise", "mp" or "nec"
  std::vector<int> refs;   // 1-based earlier lines
};

struct Proof {
  std::vector<Formula> premises;
  std::vector<ProofLine> lines;

  Formula conclusion() const;

  // One JSON object per line.  An optional leading {"premises": [...]} record
  // declares hypotheses; every other record is
  //   {"formula": "...", "rule": "...", "refs": [...]}
  // with refs omitted for axiom and premise lines.
  static Proof parse_jsonl(std::istream& in);
  static Proof load_file(const std::string& path);
};

struct CheckResult {
  bool ok = false;
  int line = 0;         // 1-based first rejected line when !ok
  std::string reason;
};

CheckResult check_proof(const Proof& proof, const System& sys);

struct DeriveOptions {
  std::size_t max_formulas = 5000;  // derived-set cap; search gives up beyond it
};

/// Bounded forward search: instantiates the system's schemas over the
/// subformulas of goal and premises, closes under modus ponens and (for
/// premise-free lines) necessitation.  A found derivation is returned as a
/// checkable proof; nullopt means the budget ran out or the space was
/// exhausted, never that the goal is underivable.
std::optional<Proof> derive_bounded(const Formula& goal, const System& sys,
                                    const std::vector<Formula>& premises = {},
                                    const DeriveOptions& opts = {});

}  // namespace nmlab
