#include <string>
#include <vector>

#include "doctest.h"
#include "nmlab/tableau.hpp"
#include "testutil.hpp"

using namespace nmlab;
using testutil::Rng;
using testutil::fresh_instance;
using testutil::random_formula;

static Formula F(const char* s) { return Formula::parse(s); }

static bool counter_frame_lawful(const Countermodel& c, LogicId logic) {
  const Frame& fr = c.model.frame;
  switch (logic) {
    case LogicId::K:
      return true;
    case LogicId::T:
      return fr.reflexive();
    case LogicId::S4:
      return fr.reflexive() && fr.transitive();
    case LogicId::S5:
      return fr.reflexive() && fr.transitive() && fr.symmetric();
  }
  return false;
}

static void expect_theorem(const char* s, LogicId logic) {
  auto r = decide(F(s), logic);
  INFO(s, " in ", logic_name(logic));
  CHECK(r.theorem);
  CHECK_FALSE(r.counter.has_value());
  CHECK_FALSE(r.trace.empty());
}

static void expect_refuted(const char* s, LogicId logic) {
  Formula f = F(s);
  auto r = decide(f, logic);
  INFO(s, " in ", logic_name(logic));
  REQUIRE_FALSE(r.theorem);
  REQUIRE(r.counter.has_value());
  CHECK_FALSE(eval_model(r.counter->model, r.counter->world, f));
  CHECK(counter_frame_lawful(*r.counter, logic));
}

TEST_CASE("propositional theorems hold in every logic") {
  for (LogicId l : {LogicId::K, LogicId::T, LogicId::S4, LogicId::S5}) {
    expect_theorem("p -> p", l);
    expect_theorem("p -> q -> p", l);
    expect_theorem("(~q -> ~p) -> p -> q", l);
    expect_theorem("~~p -> p", l);
    expect_refuted("p -> q", l);
    expect_refuted("p", l);
  }
}

TEST_CASE("distribution is a theorem everywhere, reflection only from T up") {
  for (LogicId l : {LogicId::K, LogicId::T, LogicId::S4, LogicId::S5})
    expect_theorem("[](p -> q) -> []p -> []q", l);
  expect_refuted("[]p -> p", LogicId::K);
  for (LogicId l : {LogicId::T, LogicId::S4, LogicId::S5})
    expect_theorem("[]p -> p", l);
}

TEST_CASE("the K refutation of reflection is the irreflexive point") {
  auto r = decide(F("[]p -> p"), LogicId::K);
  REQUIRE_FALSE(r.theorem);
  REQUIRE(r.counter.has_value());
  CHECK(r.counter->model.frame.str() == "n=1 R={}");
  CHECK(r.counter->world == 0);
}

TEST_CASE("transitivity axiom separates T from S4") {
  expect_refuted("[]p -> [][]p", LogicId::K);
  expect_refuted("[]p -> [][]p", LogicId::T);
  expect_theorem("[]p -> [][]p", LogicId::S4);
  expect_theorem("[]p -> [][]p", LogicId::S5);
}

TEST_CASE("the euclidean axiom separates S4 from S5") {
  expect_refuted("~[]p -> []~[]p", LogicId::S4);
  expect_theorem("~[]p -> []~[]p", LogicId::S5);
  expect_refuted("<>p -> []<>p", LogicId::S4);
  expect_theorem("<>p -> []<>p", LogicId::S5);
  expect_refuted("p -> []p", LogicId::S5);
  expect_theorem("p -> []<>p", LogicId::S5);
}

TEST_CASE("the frozen S4 refutation of the euclidean axiom") {
  auto r = decide(F("<>p -> []<>p"), LogicId::S4);
  REQUIRE_FALSE(r.theorem);
  REQUIRE(r.counter.has_value());
  CHECK(r.counter->model.frame.str() == "n=3 R={(0,0),(0,1),(0,2),(1,1),(2,2)}");
  CHECK_FALSE(eval_model(r.counter->model, r.counter->world, F("<>p -> []<>p")));
}

TEST_CASE("S4 termination on box-iteration formulas") {
  expect_theorem("[]p -> [][][]p", LogicId::S4);
  expect_theorem("[][]p -> []p", LogicId::S4);
  expect_refuted("<>[]p -> []p", LogicId::S4);
  expect_refuted("[]([]p -> p) -> []p", LogicId::S4);
  expect_refuted("[]<>p -> <>[]p", LogicId::S4);
}

TEST_CASE("trace structure: ids ascend from 1 and parents come earlier") {
  auto r = decide(F("[](p -> q) -> []p -> []q"), LogicId::K);
  REQUIRE(r.theorem);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].id == static_cast<int>(i) + 1);
    CHECK(r.trace[i].parent < r.trace[i].id);
    CHECK_FALSE(r.trace[i].rule.empty());
  }
}

TEST_CASE("rule budget exhaustion signals an error, not a verdict") {
  TableauOptions tight;
  tight.max_rule_applications = 3;
  CHECK_THROWS_AS(decide(F("[](p -> q) -> []p -> []q"), LogicId::K, tight),
                  DepthExceededError);
}

TEST_CASE("theoremhood is monotone along the logic chain") {
  const LogicId chain[] = {LogicId::K, LogicId::T, LogicId::S4, LogicId::S5};
  Rng rng(71);
  const std::vector<std::string> vars = {"p", "q"};
  for (int round = 0; round < 60; ++round) {
    Formula f = random_formula(rng, 3, vars);
    bool prev = false;
    for (LogicId l : chain) {
      bool now = decide(f, l).theorem;
      if (prev) CHECK(now);
      prev = now;
    }
  }
}

TEST_CASE("theorems are valid on every small frame of the logic's class") {
  Rng rng(72);
  const std::vector<std::string> vars = {"p", "q"};
  for (int round = 0; round < 60; ++round) {
    Formula f = random_formula(rng, 3, vars);
    for (LogicId l : {LogicId::K, LogicId::T, LogicId::S4, LogicId::S5}) {
      auto r = decide(f, l);
      if (r.theorem) {
        for (int n = 1; n <= 3; ++n)
          for (const Frame& fr : enumerate_frames(n, logic_frame_class(l)))
            CHECK(frame_valid(fr, f));
      } else {
        REQUIRE(r.counter.has_value());
        CHECK_FALSE(eval_model(r.counter->model, r.counter->world, f));
        CHECK(counter_frame_lawful(*r.counter, l));
      }
    }
  }
}

TEST_CASE("logic names and frame classes") {
  CHECK(logic_name(LogicId::S4) == "S4");
  CHECK(logic_from("s5") == LogicId::S5);
  CHECK(logic_from("K") == LogicId::K);
  CHECK_THROWS_AS(logic_from("S3"), std::invalid_argument);
  CHECK(logic_frame_class(LogicId::K) == FrameClass::All);
  CHECK(logic_frame_class(LogicId::T) == FrameClass::Reflexive);
  CHECK(logic_frame_class(LogicId::S4) == FrameClass::ReflTrans);
  CHECK(logic_frame_class(LogicId::S5) == FrameClass::Equivalence);
}

TEST_CASE("remark verification across the status range") {
  auto confirmed_t = verify_remark(strengthening("B7"));
  CHECK(confirmed_t.status == RemarkStatus::Confirmed);
  CHECK(confirmed_t.remark == Remark::ProvableT);

  auto confirmed_k = verify_remark(strengthening("N1"));
  CHECK(confirmed_k.status == RemarkStatus::Confirmed);

  auto unprovable = verify_remark(strengthening("N3"));
  CHECK(unprovable.remark == Remark::NotProvableS5);
  CHECK(unprovable.status == RemarkStatus::Confirmed);
  REQUIRE(unprovable.counter.has_value());
  Formula inst = fresh_instance(strengthening("N3").axiom);
  CHECK_FALSE(eval_model(unprovable.counter->model, unprovable.counter->world, inst));
  CHECK(counter_frame_lawful(*unprovable.counter, LogicId::S5));

  auto none = verify_remark(strengthening("N2"));
  CHECK(none.status == RemarkStatus::Unchecked);
  CHECK(none.detail == "no provability remark on this row");

  // the one provability claim the prover rejects; kept as a recorded finding
  auto refuted = verify_remark(strengthening("I_tt_t"));
  CHECK(refuted.remark == Remark::ProvableK);
  CHECK(refuted.status == RemarkStatus::Refuted);
  CHECK(refuted.counter.has_value());
  CHECK(refuted.detail.find("counter-model") != std::string::npos);

  CHECK(remark_status_name(RemarkStatus::Confirmed) == "confirmed");
  CHECK(remark_status_name(RemarkStatus::Refuted) == "refuted");
  CHECK(remark_status_name(RemarkStatus::Unchecked) == "unchecked");
}
