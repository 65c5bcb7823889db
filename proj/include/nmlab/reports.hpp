#pragma once
// Deterministic report builders over the strengthening catalogue.
//
// Every builder is a pure function of its inputs; renderings are plain ASCII
// and byte-stable across runs, which the test suite checks by building
// reports repeatedly and on separate threads.

#include <cstdint>
#include <string>
#include <vector>

#include "nmlab/kripke.hpp"
#include "nmlab/nmatrix.hpp"
#include "nmlab/tableau.hpp"

namespace nmlab {

/// FNV-1a over a byte string, rendered as 16 hex digits.  Used to pin the
/// inputs a report was computed from.
std::string fnv1a_hex(std::string_view bytes);

struct StrengtheningRow {
  std::string name;
  std::string axiom;
  std::string remark;
  bool valid_in_composed = false;  // axiom holds once its cell is restricted
  bool invalid_in_base = false;    // and does not hold in the base matrix
};

struct StrengtheningsReport {
  std::string base;
  std::string digest;  // catalogue digest the rows were computed from
  std::vector<StrengtheningRow> rows;
  int checks_passed = 0;
  int checks_total = 0;

  std::string text() const;
  std::string jsonl() const;
};

StrengtheningsReport report_strengthenings();

struct RemarkReportRow {
  std::string name;
  std::string remark;
  std::string status;
  std::string detail;
};

struct RemarksReport {
  std::string digest;
  std::vector<RemarkReportRow> rows;
  int confirmed = 0;
  int refuted = 0;
  int unchecked = 0;

  std::string text() const;
  std::string jsonl() const;
};

RemarksReport report_remarks(const TableauOptions& opts = {});

struct CorrespondenceRow {
  std::string name;
  std::string axiom;
  std::string condition;
  std::uint64_t frames_scanned = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;  // empty when exact
};

struct CorrespondenceReport {
  std::string source_digest;  // over the condition file's bytes
  int max_worlds = 0;
  std::string frame_class;
  std::vector<CorrespondenceRow> rows;
  int exact_rows = 0;

  std::string text() const;
  std::string jsonl() const;
};

/// Scans every row of a condition table against its axiom.  Rows name a
/// catalogue entry (axiom column "-") or carry an explicit axiom formula.
CorrespondenceReport report_correspondence(const std::string& tsv_path,
                                           const CorrespondenceOptions& opts = {});

struct SequentSample {
  std::vector<std::string> premises;
  std::string conclusion;
  bool valid_base = false;
  bool valid_simplified = false;
};

struct AgreementReport {
  std::uint64_t seed = 0;
  int samples = 0;
  int both_valid = 0;
  int both_invalid = 0;
  int base_only = 0;        // valid under W, invalid under the simplified table
  int simplified_only = 0;  // the converse
  std::vector<SequentSample> disagreements;  // capped at 10

  std::string text() const;
  std::string jsonl() const;
};

/// Samples random sequents (up to two premises, three variables, depth three)
/// and decides each under W and under its simplified table.  The two tables
/// present the same consequence relation, so disagreement rows are findings.
AgreementReport report_w_vs_simplified(std::uint64_t seed = 2027, int samples = 400);

}  // namespace nmlab
