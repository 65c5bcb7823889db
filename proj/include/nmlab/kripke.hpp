#pragma once
// Finite Kripke frames and models, exhaustive frame validity, first-order
// frame conditions, and axiom/condition correspondence scans.
//
// Frames are tiny (the scans run worlds 1..4), so relations live in a single
// bitmask and everything is enumerated outright.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "nmlab/formula.hpp"

namespace nmlab {

/// Relation bit (i,j) set means world i sees world j.
struct Frame {
  int n = 1;
  std::uint32_t rel = 0;

  bool related(int i, int j) const { return (rel >> (i * n + j)) & 1u; }
  Frame with(int i, int j) const {
    Frame f = *this;
    f.rel |= 1u << (i * n + j);
    return f;
  }
  bool reflexive() const;
  bool transitive() const;
  bool symmetric() const;
  std::vector<std::pair<int, int>> pairs() const;
  std::string str() const;  // "n=2 R={(0,1),(1,0)}"
  bool operator==(const Frame&) const = default;
};

enum class FrameClass { All, Reflexive, Transitive, ReflTrans, Equivalence };
std::string_view frame_class_name(FrameClass c);
FrameClass frame_class_from(std::string_view name);

/// All frames on n worlds of the given class, relation bitmask ascending.
/// Equivalence frames are generated from set partitions (restricted growth
/// strings in lexicographic order).
std::vector<Frame> enumerate_frames(int n, FrameClass c);

/// A pointed-free model: valuation bit w of truth.at(var) is the value of
/// var at world w.  Variables missing from the map are false everywhere.
struct Model {
  Frame frame;
  std::vector<std::pair<std::string, std::uint32_t>> truth;

  bool var_true(int world, const std::string& name) const;
  Model& set(const std::string& name, std::uint32_t worlds_mask);
  nlohmann::json to_json(std::optional<int> world = {}) const;
  static Model from_json(const nlohmann::json& j);
};

/// Standard relational satisfaction at a world.
bool eval_model(const Model& m, int world, const Formula& f);

/// True iff f holds at every world under every valuation of f's variables.
bool frame_valid(const Frame& fr, const Formula& f);

// ---------------------------------------------------------------------------
// First-order frame conditions
//
// Grammar: quantifier prefixes "forall x y." / "exists z.", atoms R(x,y) and
// x = y, connectives ~, &, |, -> (loosest, right-associative), parens.
// Variables left unbound are universally closed at the front in order of
// first occurrence.  Inner quantifiers may shadow outer ones.

class FrameCondition {
 public:
  static FrameCondition parse(std::string_view text);
  std::string str() const;
  bool eval(const Frame& fr) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
};

bool eval_condition(const Frame& fr, const FrameCondition& c);

// ---------------------------------------------------------------------------
// Correspondence scans

struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorrespondenceOptions {
  int max_worlds = 3;
  FrameClass cls = FrameClass::All;
  std::size_t frame_budget = 1u << 20;  // frames examined before giving up
};

struct FrameMismatch {
  Frame frame;
  bool axiom_valid = false;
  bool condition_holds = false;
};

struct CorrespondenceResult {
  std::string axiom_name;
  std::string axiom_text;
  std::string condition_text;
  FrameClass cls = FrameClass::All;
  int max_worlds = 0;
  std::size_t frames_scanned = 0;
  std::vector<FrameMismatch> mismatches;
  bool exact() const { return mismatches.empty(); }
};

/// Compares frame_valid(axiom) against the condition on every frame of the
/// class with 1..max_worlds worlds.  Throws ResourceCapError if the frame
/// budget runs out.
CorrespondenceResult correspondence_scan(const std::string& axiom_name,
                                         const Formula& axiom,
                                         const FrameCondition& condition,
                                         const CorrespondenceOptions& opts = {});

}  // namespace nmlab
