#include "nmlab/reports.hpp"

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "json.hpp"
#include "nmlab/formula.hpp"

namespace nmlab {

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

Formula fresh_instance(const Schema& schema) {
  static const char* names[] = {"p", "q", "r", "s"};
  Substitution sub;
  std::size_t i = 0;
  for (const auto& mv : schema.metavariables()) sub[mv] = Formula::var(names[i++]);
  return schema.instantiate(sub);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

StrengtheningsReport report_strengthenings() {
  StrengtheningsReport rep;
  rep.base = "W_SIMPLIFIED";
  rep.digest = registry_digest();
  const Nmatrix base = builtin_matrix(rep.base);
  for (const auto& s : strengthening_registry()) {
    StrengtheningRow row;
    row.name = s.name;
    row.axiom = s.axiom.str();
    row.remark = std::string(remark_name(s.remark));
    const Formula inst = fresh_instance(s.axiom);
    const Nmatrix composed = compose(base, {s.restriction}, rep.base + "+" + s.name);
    row.valid_in_composed = check_tautology(inst, composed).valid;
    row.invalid_in_base = !check_tautology(inst, base).valid;
    rep.checks_passed += (row.valid_in_composed ? 1 : 0) + (row.invalid_in_base ? 1 : 0);
    rep.checks_total += 2;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string StrengtheningsReport::text() const {
  std::ostringstream os;
  os << "axiom-from-cell check against " << base << " (catalogue " << digest << ")\n";
  os << "rows " << rows.size() << ", checks " << checks_passed << "/" << checks_total << "\n\n";
  os << pad("name", 10) << pad("composed", 10) << pad("base", 8) << pad("remark", 18)
     << "axiom\n";
  for (const auto& r : rows)
    os << pad(r.name, 10) << pad(r.valid_in_composed ? "valid" : "OPEN", 10)
       << pad(r.invalid_in_base ? "open" : "VALID", 8) << pad(r.remark, 18) << r.axiom
       << "\n";
  return os.str();
}

std::string StrengtheningsReport::jsonl() const {
  std::ostringstream os;
  nlohmann::json head;
  head["report"] = "strengthenings";
  head["base"] = base;
  head["digest"] = digest;
  head["checks_passed"] = checks_passed;
  head["checks_total"] = checks_total;
  os << head.dump() << "\n";
  for (const auto& r : rows) {
    nlohmann::json j;
    j["name"] = r.name;
    j["axiom"] = r.axiom;
    j["remark"] = r.remark;
    j["valid_in_composed"] = r.valid_in_composed;
    j["invalid_in_base"] = r.invalid_in_base;
    os << j.dump() << "\n";
  }
  return os.str();
}

RemarksReport report_remarks(const TableauOptions& opts) {
  RemarksReport rep;
  rep.digest = registry_digest();
  for (const auto& s : strengthening_registry()) {
    if (s.remark == Remark::None) continue;
    const RemarkCheck chk = verify_remark(s, opts);
    RemarkReportRow row;
    row.name = s.name;
    row.remark = std::string(remark_name(s.remark));
    row.status = std::string(remark_status_name(chk.status));
    row.detail = chk.detail;
    switch (chk.status) {
      case RemarkStatus::Confirmed: ++rep.confirmed; break;
      case RemarkStatus::Refuted: ++rep.refuted; break;
      case RemarkStatus::Unchecked: ++rep.unchecked; break;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string RemarksReport::text() const {
  std::ostringstream os;
  os << "provability remark verification (catalogue " << digest << ")\n";
  os << "confirmed " << confirmed << ", refuted " << refuted << ", unchecked " << unchecked
     << "\n\n";
  os << pad("name", 10) << pad("remark", 20) << pad("status", 11) << "detail\n";
  for (const auto& r : rows)
    os << pad(r.name, 10) << pad(r.remark, 20) << pad(r.status, 11) << r.detail << "\n";
  return os.str();
}

std::string RemarksReport::jsonl() const {
  std::ostringstream os;
  nlohmann::json head;
  head["report"] = "remarks";
  head["digest"] = digest;
  head["confirmed"] = confirmed;
  head["refuted"] = refuted;
  head["unchecked"] = unchecked;
  os << head.dump() << "\n";
  for (const auto& r : rows) {
    nlohmann::json j;
    j["name"] = r.name;
    j["remark"] = r.remark;
    j["status"] = r.status;
    j["detail"] = r.detail;
    os << j.dump() << "\n";
  }
  return os.str();
}

CorrespondenceReport report_correspondence(const std::string& tsv_path,
                                           const CorrespondenceOptions& opts) {
  std::ifstream in(tsv_path);
  if (!in) throw std::runtime_error("cannot open " + tsv_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  CorrespondenceReport rep;
  rep.source_digest = fnv1a_hex(bytes);
  rep.max_worlds = opts.max_worlds;
  rep.frame_class = std::string(frame_class_name(opts.cls));

  std::istringstream lines(bytes);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw std::runtime_error(tsv_path + ":" + std::to_string(lineno) +
                               ": expected name<TAB>axiom<TAB>condition");
    const std::string name = line.substr(0, t1);
    const std::string axiom_field = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string condition_field = line.substr(t2 + 1);

    const Formula axiom = axiom_field == "-" ? fresh_instance(strengthening(name).axiom)
                                             : Formula::parse(axiom_field);
    const FrameCondition cond = FrameCondition::parse(condition_field);
    const CorrespondenceResult res = correspondence_scan(name, axiom, cond, opts);

    CorrespondenceRow row;
    row.name = name;
    row.axiom = axiom.str();
    row.condition = cond.str();
    row.frames_scanned = res.frames_scanned;
    row.mismatches = res.mismatches.size();
    if (!res.mismatches.empty()) {
      const FrameMismatch& m = res.mismatches.front();
      row.first_mismatch = m.frame.str() + " axiom " + (m.axiom_valid ? "holds" : "fails") +
                           ", condition " + (m.condition_holds ? "holds" : "fails");
    }
    if (res.exact()) ++rep.exact_rows;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string CorrespondenceReport::text() const {
  std::ostringstream os;
  os << "frame-correspondence scan, frames up to " << max_worlds << " worlds, class "
     << frame_class << " (source " << source_digest << ")\n";
  os << "rows " << rows.size() << ", exact " << exact_rows << "\n\n";
  os << pad("name", 10) << pad("frames", 9) << pad("mismatch", 10) << "condition\n";
  for (const auto& r : rows) {
    os << pad(r.name, 10) << pad(std::to_string(r.frames_scanned), 9)
       << pad(std::to_string(r.mismatches), 10) << r.condition << "\n";
    if (!r.first_mismatch.empty()) os << "          first: " << r.first_mismatch << "\n";
  }
  return os.str();
}

std::string CorrespondenceReport::jsonl() const {
  std::ostringstream os;
  nlohmann::json head;
  head["report"] = "correspondence";
  head["source_digest"] = source_digest;
  head["max_worlds"] = max_worlds;
  head["frame_class"] = frame_class;
  head["exact_rows"] = exact_rows;
  os << head.dump() << "\n";
  for (const auto& r : rows) {
    nlohmann::json j;
    j["name"] = r.name;
    j["axiom"] = r.axiom;
    j["condition"] = r.condition;
    j["frames_scanned"] = r.frames_scanned;
    j["mismatches"] = r.mismatches;
    if (!r.first_mismatch.empty()) j["first_mismatch"] = r.first_mismatch;
    os << j.dump() << "\n";
  }
  return os.str();
}

namespace {

struct SequentSampler {
  std::mt19937_64 rng;
  explicit SequentSampler(std::uint64_t seed) : rng(seed) {}

  Formula formula(int depth) {
    static const char* vars[] = {"p", "q", "r"};
    if (depth == 0) return Formula::var(vars[rng() % 3]);
    switch (rng() % 6) {
      case 0:
      case 1: return Formula::var(vars[rng() % 3]);
      case 2: return Formula::neg(formula(depth - 1));
      case 3: return Formula::box(formula(depth - 1));
      default: return Formula::impl(formula(depth - 1), formula(depth - 1));
    }
  }
};

}  // namespace

AgreementReport report_w_vs_simplified(std::uint64_t seed, int samples) {
  AgreementReport rep;
  rep.seed = seed;
  rep.samples = samples;
  const Nmatrix w = builtin_matrix("W");
  const Nmatrix ws = builtin_matrix("W_SIMPLIFIED");
  SequentSampler gen(seed);
  ConsequenceOptions copts;

  for (int done = 0; done < samples;) {
    const int n_prem = static_cast<int>(gen.rng() % 3);
    std::vector<Formula> premises;
    for (int i = 0; i < n_prem; ++i) premises.push_back(gen.formula(3));
    const Formula conclusion = gen.formula(3);

    std::vector<Formula> roots = premises;
    roots.push_back(conclusion);
    if (Closure::of(roots).size() > copts.max_closure) continue;

    const bool vb = check_consequence(premises, conclusion, w, copts).valid;
    const bool vs = check_consequence(premises, conclusion, ws, copts).valid;
    ++done;
    if (vb && vs) ++rep.both_valid;
    else if (!vb && !vs) ++rep.both_invalid;
    else if (vb) ++rep.base_only;
    else ++rep.simplified_only;
    if (vb != vs && rep.disagreements.size() < 10) {
      SequentSample s;
      for (const auto& p : premises) s.premises.push_back(p.str());
      s.conclusion = conclusion.str();
      s.valid_base = vb;
      s.valid_simplified = vs;
      rep.disagreements.push_back(std::move(s));
    }
  }
  return rep;
}

std::string AgreementReport::text() const {
  std::ostringstream os;
  os << "W vs simplified-table agreement, seed " << seed << ", " << samples << " sequents\n";
  os << "both valid " << both_valid << ", both invalid " << both_invalid << ", W-only "
     << base_only << ", simplified-only " << simplified_only << "\n";
  if (disagreements.empty()) {
    os << "no disagreements\n";
  } else {
    os << "\ndisagreements (first " << disagreements.size() << "):\n";
    for (const auto& d : disagreements) {
      os << "  ";
      for (std::size_t i = 0; i < d.premises.size(); ++i)
        os << (i ? ", " : "") << d.premises[i];
      os << " |- " << d.conclusion << "   W " << (d.valid_base ? "valid" : "invalid")
         << ", simplified " << (d.valid_simplified ? "valid" : "invalid") << "\n";
    }
  }
  return os.str();
}

std::string AgreementReport::jsonl() const {
  std::ostringstream os;
  nlohmann::json head;
  head["report"] = "w-vs-simplified";
  head["seed"] = seed;
  head["samples"] = samples;
  head["both_valid"] = both_valid;
  head["both_invalid"] = both_invalid;
  head["base_only"] = base_only;
  head["simplified_only"] = simplified_only;
  os << head.dump() << "\n";
  for (const auto& d : disagreements) {
    nlohmann::json j;
    j["premises"] = d.premises;
    j["conclusion"] = d.conclusion;
    j["valid_base"] = d.valid_base;
    j["valid_simplified"] = d.valid_simplified;
    os << j.dump() << "\n";
  }
  return os.str();
}

}  // namespace nmlab
