#pragma once
// Prefixed tableau provers for K, T, S4 and S5 over the core connectives,
// with counter-model extraction on open saturated branches and verification
// of the catalogue's provability remarks.
//
// Rule strategy is deterministic: double-negation and negated-implication
// unfolding first, then box instances, then implication splits, then new
// prefixes; within a class, the oldest entry fires.  S4 holds back new
// prefixes from any prefix whose formula set is contained in an ancestor's
// (the loop check); S5 uses flat prefixes and spawns at most one witness per
// distinct negated box formula.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmlab/formula.hpp"
#include "nmlab/kripke.hpp"
#include "nmlab/nmatrix.hpp"

namespace nmlab {

enum class LogicId { K, T, S4, S5 };
std::string_view logic_name(LogicId l);
LogicId logic_from(std::string_view name);

/// Frame class a logic's counter-models are drawn from (and closed under).
FrameClass logic_frame_class(LogicId l);

struct DepthExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TableauOptions {
  std::size_t max_rule_applications = 10000;
};

struct TraceStep {
  int id = 0;
  std::string prefix;
  std::string formula;
  std::string rule;
  int parent = 0;
};

struct Countermodel {
  Model model;
  int world = 0;
};

struct TableauResult {
  bool theorem = false;
  std::vector<TraceStep> trace;              // numbered rule applications
  std::optional<Countermodel> counter;       // present iff !theorem
};

/// Decides theoremhood of f in the logic.  Throws DepthExceededError when the
/// rule budget runs out; the guard is an error signal, never a verdict.
TableauResult decide(const Formula& f, LogicId logic, const TableauOptions& opts = {});

enum class RemarkStatus { Confirmed, Refuted, Unchecked };
std::string_view remark_status_name(RemarkStatus s);

struct RemarkCheck {
  std::string name;
  Remark remark = Remark::None;
  RemarkStatus status = RemarkStatus::Unchecked;
  std::string detail;
  std::optional<Countermodel> counter;  // evidence for refuted provability claims
};

/// Checks the row's remark on a fresh-variable instance of its axiom:
/// ProvableK/ProvableT run the matching prover expecting a theorem;
/// NotProvableS5 runs S5 expecting a counter-model, which is re-validated
/// against eval_model and the equivalence frame laws.  Rows with no remark
/// and depth-guard hits come back Unchecked.
RemarkCheck verify_remark(const NamedStrengthening& s, const TableauOptions& opts = {});

}  // namespace nmlab
