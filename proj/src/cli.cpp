#include "nmlab/cli.hpp"

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nmlab/formula.hpp"
#include "nmlab/hilbert.hpp"
#include "nmlab/kripke.hpp"
#include "nmlab/nmatrix.hpp"
#include "nmlab/reports.hpp"
#include "nmlab/tableau.hpp"

namespace nmlab {

namespace {

Nmatrix resolve_matrix(const std::string& name, const std::string& file) {
  if (!file.empty()) return Nmatrix::load_file(file);
  return builtin_matrix(name);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

CellRestriction parse_cell_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const auto eq = spec.find('=');
  if (colon == std::string::npos || eq == std::string::npos || colon > eq)
    throw std::invalid_argument("cell spec must look like conn:in[,in]=out[,out]: " + spec);
  CellRestriction r;
  const std::string conn = spec.substr(0, colon);
  if (conn == "neg") r.connective = Conn::Neg;
  else if (conn == "box") r.connective = Conn::Box;
  else if (conn == "impl") r.connective = Conn::Impl;
  else throw std::invalid_argument("unknown connective in cell spec: " + conn);
  r.inputs = split(spec.substr(colon + 1, eq - colon - 1), ',');
  r.allowed = split(spec.substr(eq + 1), ',');
  return r;
}

std::string witness_text(const Verdict& v, const Nmatrix& m) {
  std::ostringstream os;
  os << "counterexample:\n" << v.witness->describe(m);
  return os.str();
}

nlohmann::json witness_json(const Verdict& v, const Nmatrix& m) {
  nlohmann::json j = nlohmann::json::object();
  const Closure& c = *v.closure;
  for (std::size_t i = 0; i < c.size(); ++i)
    j[c[i].formula.str()] = m.value_name(v.witness->values[i]);
  return j;
}

std::string model_text(const Countermodel& cm) {
  std::ostringstream os;
  os << cm.model.frame.str() << ", refuting world " << cm.world << "\n";
  for (const auto& [name, mask] : cm.model.truth) {
    os << "  " << name << " true at {";
    bool first = true;
    for (int w = 0; w < cm.model.frame.n; ++w)
      if (mask >> w & 1) {
        os << (first ? "" : ",") << w;
        first = false;
      }
    os << "}\n";
  }
  return os.str();
}

int run_consequence(const std::vector<std::string>& premise_texts, const std::string& conclusion_text,
                    const std::string& matrix_name, const std::string& matrix_file,
                    int max_closure, bool json, std::ostream& out) {
  const Nmatrix m = resolve_matrix(matrix_name, matrix_file);
  std::vector<Formula> premises;
  for (const auto& t : premise_texts) premises.push_back(Formula::parse(t));
  const Formula conclusion = Formula::parse(conclusion_text);
  ConsequenceOptions opts;
  if (max_closure > 0) opts.max_closure = static_cast<std::size_t>(max_closure);
  const Verdict v = check_consequence(premises, conclusion, m, opts);
  if (json) {
    nlohmann::json j;
    j["matrix"] = m.name();
    j["valid"] = v.valid;
    if (!v.valid) j["witness"] = witness_json(v, m);
    out << j.dump(2) << "\n";
  } else if (v.valid) {
    out << "valid in " << m.name() << "\n";
  } else {
    out << witness_text(v, m) << "\n";
  }
  return v.valid ? 0 : 1;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"decision workbench for non-deterministic modal matrices"};
  app.name("nmlab");
  app.require_subcommand(1);
  int exit_code = 0;

  // taut
  auto* taut = app.add_subcommand("taut", "decide matrix validity of a formula");
  std::string taut_formula, taut_matrix = "TBAT", taut_file;
  int taut_cap = 0;
  bool taut_json = false;
  taut->add_option("formula", taut_formula)->required();
  taut->add_option("--matrix", taut_matrix, "builtin matrix name");
  taut->add_option("--matrix-file", taut_file, "matrix JSON file");
  taut->add_option("--max-closure", taut_cap, "closure size cap");
  taut->add_flag("--json", taut_json);
  taut->callback([&] {
    exit_code = run_consequence({}, taut_formula, taut_matrix, taut_file, taut_cap, taut_json, out);
  });

  // entails
  auto* entails = app.add_subcommand("entails", "decide matrix consequence");
  std::vector<std::string> ent_premises;
  std::string ent_conclusion, ent_matrix = "TBAT", ent_file;
  int ent_cap = 0;
  bool ent_json = false;
  entails->add_option("-p,--premise", ent_premises, "premise (repeatable)")->allow_extra_args(false);
  entails->add_option("conclusion", ent_conclusion)->required();
  entails->add_option("--matrix", ent_matrix, "builtin matrix name");
  entails->add_option("--matrix-file", ent_file, "matrix JSON file");
  entails->add_option("--max-closure", ent_cap, "closure size cap");
  entails->add_flag("--json", ent_json);
  entails->callback([&] {
    exit_code = run_consequence(ent_premises, ent_conclusion, ent_matrix, ent_file, ent_cap,
                                ent_json, out);
  });

  // matrix
  auto* matrix = app.add_subcommand("matrix", "inspect, load and restrict matrices");
  matrix->require_subcommand(1);

  auto* mlist = matrix->add_subcommand("list", "list builtin matrices");
  mlist->callback([&] {
    for (const auto& n : builtin_matrix_names()) out << n << "\n";
  });

  auto* mshow = matrix->add_subcommand("show", "print a matrix");
  std::string mshow_name = "TBAT", mshow_file;
  bool mshow_json = false;
  mshow->add_option("name", mshow_name, "builtin matrix name");
  mshow->add_option("--file", mshow_file, "matrix JSON file");
  mshow->add_flag("--json", mshow_json);
  mshow->callback([&] {
    const Nmatrix m = resolve_matrix(mshow_name, mshow_file);
    if (mshow_json) out << m.to_json().dump(2) << "\n";
    else out << m.render_table();
  });

  auto* mload = matrix->add_subcommand("load", "validate a matrix file");
  std::string mload_path;
  bool mload_json = false;
  mload->add_option("path", mload_path)->required();
  mload->add_flag("--json", mload_json);
  mload->callback([&] {
    const Nmatrix m = Nmatrix::load_file(mload_path);
    if (mload_json) {
      nlohmann::json j;
      j["name"] = m.name();
      j["values"] = m.value_names();
      j["designated"] = nlohmann::json::array();
      for (ValueId v : m.designated_set().values()) j["designated"].push_back(m.value_name(v));
      out << j.dump(2) << "\n";
    } else {
      out << "ok: " << m.name() << ", " << static_cast<int>(m.value_count()) << " values\n";
    }
  });

  auto* mcompose = matrix->add_subcommand("compose", "restrict cells of a base matrix");
  std::string mc_base = "W_SIMPLIFIED", mc_file, mc_name;
  std::vector<std::string> mc_specs;
  bool mc_json = false;
  mcompose->add_option("--base", mc_base, "builtin base matrix");
  mcompose->add_option("--base-file", mc_file, "base matrix JSON file");
  mcompose->add_option("--name", mc_name, "name for the result");
  mcompose->add_option("spec", mc_specs, "cell spec conn:in[,in]=out[,out] or a catalogue name")
      ->required();
  mcompose->add_flag("--json", mc_json);
  mcompose->callback([&] {
    const Nmatrix base = resolve_matrix(mc_base, mc_file);
    std::vector<CellRestriction> rs;
    for (const auto& s : mc_specs) {
      if (s.find('=') == std::string::npos) rs.push_back(strengthening(s).restriction);
      else rs.push_back(parse_cell_spec(s));
    }
    const Nmatrix m = compose(base, rs, mc_name);
    if (mc_json) out << m.to_json().dump(2) << "\n";
    else out << m.render_table();
  });

  // corr
  auto* corr = app.add_subcommand("corr", "scan frames for axiom/condition correspondence");
  std::string corr_axiom, corr_condition, corr_class = "all", corr_label = "axiom";
  int corr_worlds = 3;
  std::uint64_t corr_budget = 1u << 20;
  bool corr_json = false;
  corr->add_option("axiom", corr_axiom)->required();
  corr->add_option("condition", corr_condition)->required();
  corr->add_option("--max-worlds", corr_worlds)->check(CLI::Range(1, 5));
  corr->add_option("--class", corr_class, "all|reflexive|transitive|refl-trans|equivalence");
  corr->add_option("--budget", corr_budget, "frame scan cap");
  corr->add_flag("--json", corr_json);
  corr->callback([&] {
    CorrespondenceOptions opts;
    opts.max_worlds = corr_worlds;
    opts.cls = frame_class_from(corr_class);
    opts.frame_budget = corr_budget;
    const Formula axiom = Formula::parse(corr_axiom);
    const FrameCondition cond = FrameCondition::parse(corr_condition);
    const CorrespondenceResult res = correspondence_scan(corr_label, axiom, cond, opts);
    if (corr_json) {
      nlohmann::json j;
      j["axiom"] = axiom.str();
      j["condition"] = cond.str();
      j["frames_scanned"] = res.frames_scanned;
      j["exact"] = res.exact();
      j["mismatches"] = nlohmann::json::array();
      for (const auto& m : res.mismatches) {
        nlohmann::json mm;
        mm["frame"] = m.frame.str();
        mm["axiom_valid"] = m.axiom_valid;
        mm["condition_holds"] = m.condition_holds;
        j["mismatches"].push_back(mm);
      }
      out << j.dump(2) << "\n";
    } else if (res.exact()) {
      out << "exact over " << res.frames_scanned << " frames (up to " << corr_worlds
          << " worlds, class " << frame_class_name(opts.cls) << ")\n";
    } else {
      out << res.mismatches.size() << " mismatching frame(s) of " << res.frames_scanned << ":\n";
      std::size_t shown = 0;
      for (const auto& m : res.mismatches) {
        if (++shown > 5) break;
        out << "  " << m.frame.str() << ": axiom " << (m.axiom_valid ? "holds" : "fails")
            << ", condition " << (m.condition_holds ? "holds" : "fails") << "\n";
      }
    }
    exit_code = res.exact() ? 0 : 1;
  });

  // tableau
  auto* tab = app.add_subcommand("tableau", "prove or refute in K, T, S4 or S5");
  std::string tab_formula, tab_logic = "K";
  int tab_steps = 0;
  bool tab_json = false, tab_trace = false;
  tab->add_option("formula", tab_formula)->required();
  tab->add_option("--logic", tab_logic, "K|T|S4|S5");
  tab->add_option("--max-steps", tab_steps, "rule application budget");
  tab->add_flag("--trace", tab_trace, "print the rule applications");
  tab->add_flag("--json", tab_json);
  tab->callback([&] {
    const Formula f = Formula::parse(tab_formula);
    TableauOptions opts;
    if (tab_steps > 0) opts.max_rule_applications = static_cast<std::size_t>(tab_steps);
    const TableauResult res = decide(f, logic_from(tab_logic), opts);
    if (tab_json) {
      nlohmann::json j;
      j["logic"] = tab_logic;
      j["formula"] = f.str();
      j["theorem"] = res.theorem;
      j["steps"] = res.trace.size();
      if (res.counter) j["counter"] = res.counter->model.to_json(res.counter->world);
      out << j.dump(2) << "\n";
    } else {
      out << (res.theorem ? "theorem" : "not a theorem") << " of " << tab_logic << " ("
          << res.trace.size() << " steps)\n";
      if (res.counter) out << model_text(*res.counter);
      if (tab_trace)
        for (const auto& st : res.trace)
          out << "  " << st.id << ". " << st.prefix << " :: " << st.formula << "  [" << st.rule
              << (st.parent ? " <- " + std::to_string(st.parent) : "") << "]\n";
    }
    exit_code = res.theorem ? 0 : 1;
  });

  // proof-check
  auto* pc = app.add_subcommand("proof-check", "check a Hilbert proof (JSONL)");
  std::string pc_path, pc_system = "W";
  bool pc_json = false;
  pc->add_option("path", pc_path)->required();
  pc->add_option("--system", pc_system, "W|TBAT|K|T|S4|S5|GL");
  pc->add_flag("--json", pc_json);
  pc->callback([&] {
    const Proof proof = Proof::load_file(pc_path);
    const System sys = builtin_system(pc_system);
    const CheckResult res = check_proof(proof, sys);
    if (pc_json) {
      nlohmann::json j;
      j["system"] = sys.name;
      j["ok"] = res.ok;
      j["lines"] = proof.lines.size();
      if (res.ok && !proof.lines.empty()) j["conclusion"] = proof.conclusion().str();
      if (!res.ok) {
        j["line"] = res.line;
        j["reason"] = res.reason;
      }
      out << j.dump(2) << "\n";
    } else if (res.ok) {
      out << "ok: " << proof.lines.size() << " line(s)";
      if (!proof.lines.empty()) out << " prove " << proof.conclusion().str();
      out << " in " << sys.name << "\n";
    } else {
      out << "rejected at line " << res.line << ": " << res.reason << "\n";
    }
    exit_code = res.ok ? 0 : 1;
  });

  // report
  auto* rep = app.add_subcommand("report", "build a study report");
  std::string rep_which, rep_conditions = "data/conditions.tsv", rep_class = "all";
  int rep_worlds = 3, rep_samples = 400;
  std::uint64_t rep_seed = 2027;
  bool rep_json = false;
  rep->add_option("which", rep_which, "strengthenings|correspondence|remarks|w-vs-simplified")
      ->required()
      ->check(CLI::IsMember({"strengthenings", "correspondence", "remarks", "w-vs-simplified"}));
  rep->add_option("--conditions", rep_conditions, "condition table (TSV)");
  rep->add_option("--max-worlds", rep_worlds)->check(CLI::Range(1, 5));
  rep->add_option("--class", rep_class);
  rep->add_option("--seed", rep_seed);
  rep->add_option("--samples", rep_samples);
  rep->add_flag("--json", rep_json);
  rep->callback([&] {
    if (rep_which == "strengthenings") {
      const auto r = report_strengthenings();
      out << (rep_json ? r.jsonl() : r.text());
    } else if (rep_which == "remarks") {
      const auto r = report_remarks();
      out << (rep_json ? r.jsonl() : r.text());
    } else if (rep_which == "correspondence") {
      CorrespondenceOptions opts;
      opts.max_worlds = rep_worlds;
      opts.cls = frame_class_from(rep_class);
      const auto r = report_correspondence(rep_conditions, opts);
      out << (rep_json ? r.jsonl() : r.text());
    } else {
      const auto r = report_w_vs_simplified(rep_seed, rep_samples);
      out << (rep_json ? r.jsonl() : r.text());
    }
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace nmlab
