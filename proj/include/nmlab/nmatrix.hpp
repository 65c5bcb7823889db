#pragma once
// Finite non-deterministic matrices over the core connectives, with dynamic
// (subformula-sharing) valuation semantics: a valuation picks one value per
// closure entry, drawn from the cell indexed by the operand values, so a
// shared subformula receives a single value everywhere it occurs.
//
// Built-in matrices use the four values P, t, f, R with P and t designated:
// P = provable, t = true but unprovable, f = false and refutable, R = false
// but irrefutable.  Validity is designatedness of the conclusion under every
// valuation that designates all premises.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "nmlab/formula.hpp"

namespace nmlab {

using ValueId = std::uint8_t;

/// Subset of matrix values as a bitmask; iteration yields ascending ids, and
/// the built-in id order is P < t < f < R.
class ValueSet {
 public:
  ValueSet() = default;
  explicit ValueSet(std::uint32_t bits) : bits_(bits) {}
  static ValueSet single(ValueId v) { return ValueSet(1u << v); }

  bool empty() const { return bits_ == 0; }
  bool contains(ValueId v) const { return (bits_ >> v) & 1u; }
  int count() const { return __builtin_popcount(bits_); }
  bool subset_of(ValueSet o) const { return (bits_ & ~o.bits_) == 0; }
  ValueSet operator&(ValueSet o) const { return ValueSet(bits_ & o.bits_); }
  ValueSet operator|(ValueSet o) const { return ValueSet(bits_ | o.bits_); }
  bool operator==(const ValueSet&) const = default;
  std::uint32_t bits() const { return bits_; }

  ValueSet& add(ValueId v) {
    bits_ |= 1u << v;
    return *this;
  }

  /// Least id in the set, or nullopt when empty.
  std::optional<ValueId> first() const {
    if (!bits_) return std::nullopt;
    return static_cast<ValueId>(__builtin_ctz(bits_));
  }

  std::vector<ValueId> values() const {
    std::vector<ValueId> out;
    for (ValueId v = 0; v < 32; ++v)
      if (contains(v)) out.push_back(v);
    return out;
  }

 private:
  std::uint32_t bits_ = 0;
};

struct EmptyCellError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MatrixFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Truth tables for Neg, Box and Impl whose cells are non-empty value sets.
/// Instances are immutable after construction; the constructor enforces
/// non-empty cells, non-empty proper designated subset, and distinct values.
class Nmatrix {
 public:
  Nmatrix(std::string name, std::vector<std::string> values,
          std::vector<std::string> designated, std::vector<ValueSet> neg,
          std::vector<ValueSet> box, std::vector<std::vector<ValueSet>> impl);

  const std::string& name() const { return name_; }
  int value_count() const { return static_cast<int>(values_.size()); }
  const std::vector<std::string>& value_names() const { return values_; }
  const std::string& value_name(ValueId v) const { return values_.at(v); }
  std::optional<ValueId> value_id(std::string_view symbol) const;
  bool designated(ValueId v) const { return designated_.contains(v); }
  ValueSet designated_set() const { return designated_; }

  ValueSet neg_cell(ValueId a) const { return neg_[a]; }
  ValueSet box_cell(ValueId a) const { return box_[a]; }
  ValueSet impl_cell(ValueId a, ValueId b) const { return impl_[a][b]; }
  ValueSet cell(Conn c, ValueId a, ValueId b = 0) const;

  bool same_carrier(const Nmatrix& o) const {
    return values_ == o.values_ && designated_ == o.designated_;
  }
  bool same_cells(const Nmatrix& o) const;

  nlohmann::json to_json() const;
  static Nmatrix from_json(const nlohmann::json& j, std::string name = "");
  static Nmatrix load_file(const std::string& path);
  std::string render_table() const;  // aligned plain-text tables

 private:
  std::string name_;
  std::vector<std::string> values_;
  ValueSet designated_;
  std::vector<ValueSet> neg_, box_;
  std::vector<std::vector<ValueSet>> impl_;
};

/// TBAT, TBAT_ORIGINAL, W and W_SIMPLIFIED; throws std::invalid_argument for
/// other names.
const Nmatrix& builtin_matrix(std::string_view name);
const std::vector<std::string>& builtin_matrix_names();

/// One cell override, by value symbol; resolved against a matrix at compose
/// time.  `inputs` holds one symbol for Neg/Box and two for Impl.
struct CellRestriction {
  Conn connective = Conn::Neg;
  std::vector<std::string> inputs;
  std::vector<std::string> allowed;
};

/// Intersects each restriction into its base cell.  Throws EmptyCellError if
/// an intersection is empty and std::invalid_argument on unknown symbols.
Nmatrix compose(const Nmatrix& base, const std::vector<CellRestriction>& rs,
                std::string name = "");

/// True when every cell of `fine` is a subset of the matching `coarse` cell.
/// Throws std::invalid_argument when carriers differ.
bool refines(const Nmatrix& fine, const Nmatrix& coarse);

// ---------------------------------------------------------------------------
// Valuations

struct Valuation {
  const Closure* closure = nullptr;
  std::vector<ValueId> values;

  ValueId value_of(std::size_t index) const { return values[index]; }
  std::string describe(const Nmatrix& m) const;  // one "formula = value" per line
};

struct ClosureCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Walk { Continue, Prune, Stop };

/// Depth-first enumeration over closure order with values tried in ascending
/// id order.  `on_assign` (optional) sees each tentative assignment and may
/// prune the subtree below it; `on_complete` sees each full valuation.  The
/// visit order is deterministic, so the first completed valuation is the
/// enumeration-least one.
void enumerate_valuations(
    const Closure& c, const Nmatrix& m,
    const std::function<Walk(const Valuation&)>& on_complete,
    const std::function<Walk(std::size_t, ValueId)>& on_assign = {});

std::size_t count_valuations(const Closure& c, const Nmatrix& m);

struct ConsequenceOptions {
  std::size_t max_closure = 24;
};

/// Valid, or the enumeration-least countervaluation.
struct Verdict {
  bool valid = false;
  std::optional<Valuation> witness;
  std::shared_ptr<const Closure> closure;  // keeps witness->closure alive
};

/// Does every valuation designating all premises designate the conclusion?
/// Branches are cut as soon as an assigned premise is non-designated or the
/// assigned conclusion is designated.  Throws ClosureCapError when the
/// closure exceeds opts.max_closure.
Verdict check_consequence(const std::vector<Formula>& premises,
                          const Formula& conclusion, const Nmatrix& m,
                          const ConsequenceOptions& opts = {});

Verdict check_tautology(const Formula& f, const Nmatrix& m,
                        const ConsequenceOptions& opts = {});

// ---------------------------------------------------------------------------
// The named strengthening catalogue

enum class Remark { None, ProvableK, ProvableT, NotProvableS5 };
std::string_view remark_name(Remark r);

/// A single-cell strengthening of W_SIMPLIFIED together with the axiom that
/// characterises it and the provability remark attached to that axiom.
struct NamedStrengthening {
  std::string name;
  CellRestriction restriction;
  Schema axiom;
  Remark remark = Remark::None;
};

/// Rows N1..N4, B1..B8 and the thirty-two implication rows, in table order.
const std::vector<NamedStrengthening>& strengthening_registry();
const NamedStrengthening& strengthening(std::string_view name);

/// FNV-1a digest of the canonical registry serialisation; embedded in report
/// headers so consumers can tell which catalogue produced them.
std::string registry_digest();

}  // namespace nmlab
