#include <doctest.h>

#include "cpd/control.hpp"
#include "cpd/parser.hpp"
#include "cpd/ppf.hpp"
#include "cpd/synthesis.hpp"
#include "generators.hpp"
#include "test_util.hpp"

using namespace cpd;

namespace {

SystemSpec with_processes(SystemSpec spec, const std::string& supervisor_text) {
  spec.set_process("S", parse_term(spec.sig(), supervisor_text, &spec.processes));
  spec.supervisor = "S";
  return spec;
}

std::string all_true_supervisor(const Signature& sig) {
  std::string s = "(";
  for (const auto& ch : sig.channels())
    if (ch.cls == Controllability::controllable) s += ch.name + "! . 1 + ";
  return s + "1)*";
}

}  // namespace

TEST_SUITE("control") {
  TEST_CASE("single-configuration satisfaction") {
    const auto ppf = instantiate_ppf(1, {1});
    const auto& sig = ppf.sig();
    const Configuration init{ppf.plant_term(), Environment::initial(sig)};
    CHECK(satisfies(sig, init, parse_requirement(sig, "invariant !(CPM != 1 & MO_1_1 = 2)")));
    CHECK(satisfies(sig, init, parse_requirement(sig, "invariant true")));

    // Renamed plant at PC = 1 offers SchOper_1!?, which the requirement forbids.
    const Configuration renamed{xi_rename(sig, ppf.plant_term()), Environment::initial(sig)};
    const auto r = parse_requirement(sig, "event SchOper_1!? implies (PC_1 = 2 & TPM = 1) | PC_1 = 3");
    CHECK_FALSE(satisfies(sig, renamed, r));
    // The exclusion form with the negated formula judges identically.
    const auto ex = Requirement::state_excludes_event(BoolExpr::negation(r.formula), r.action);
    CHECK(satisfies(sig, renamed, ex) == satisfies(sig, renamed, r));
  }

  TEST_CASE("event_implies matches state_excludes_event on every state") {
    const auto ppf = instantiate_ppf(1, {1});
    const auto ss = renamed_plant_space(ppf);
    for (const auto& r : ppf.requirements) {
      if (r.kind != Requirement::Kind::event_implies) continue;
      const auto ex = Requirement::state_excludes_event(BoolExpr::negation(r.formula), r.action);
      for (StateId s = 0; s < ss.size(); ++s) CHECK(satisfies(ss, s, r) == satisfies(ss, s, ex));
    }
  }

  TEST_CASE("satisfies_globally") {
    const auto ppf = testing::load_model("models/ppf_1_1.cpd");
    const auto supervised = explore(ppf.signature, supervised_plant(ppf));
    CHECK(satisfies_globally(supervised, ppf.requirements));
    CHECK(satisfies_globally(supervised, {}));

    const auto renamed = renamed_plant_space(ppf);
    const auto report = satisfies_globally(renamed, ppf.requirements);
    REQUIRE_FALSE(report.holds);
    REQUIRE(report.first);
    CHECK_FALSE(report.trace.empty());
    // The trace ends with the offending transition out of the violating state.
    CHECK(report.trace.back().source == report.first->state);
    // Decomposition: the report lists exactly the failing (state, requirement) pairs.
    std::size_t failing = 0;
    for (StateId s = 0; s < renamed.size(); ++s)
      for (const auto& r : ppf.requirements) failing += satisfies(renamed, s, r) ? 0 : 1;
    CHECK(failing == report.violations.size());
  }

  TEST_CASE("AGV supervisor disables gotoX at L = X") {
    const auto agv = testing::load_model("models/agv.cpd");
    const auto ss = explore(agv.signature, supervised_plant(agv));
    const auto& sig = agv.sig();
    const auto l = *sig.find_variable("L");
    for (StateId s = 0; s < ss.size(); ++s)
      for (const auto& t : ss.out(s)) {
        const auto& name = sig.channel(t.action.channel).name;
        if (name == "gotoA") CHECK(ss.alpha(s)[l] != *sig.find_enumerator("A"));
        if (name == "gotoB") CHECK(ss.alpha(s)[l] != *sig.find_enumerator("B"));
      }
    CHECK(check_controllability(agv));
    CHECK(check_nonblocking(ss));
  }

  TEST_CASE("a supervisor enabling nothing") {
    const auto ppf = with_processes(instantiate_ppf(1, {1}), "(1)*");
    const auto ss = explore(ppf.signature, supervised_plant(ppf));
    for (const auto& t : ss.transitions()) CHECK_FALSE(ppf.sig().controllable(t.action));
  }

  TEST_CASE("a supervisor enabling everything is controllable") {
    for (const auto& base : {instantiate_ppf(1, {1}), testing::load_model("models/agv.cpd")}) {
      const auto spec = with_processes(base, all_true_supervisor(base.sig()));
      const auto r = check_controllability(spec);
      CHECK(r);
      CHECK(bisimilar(r.supervised, r.plant));
    }
    testing::Rng rng(17);
    for (int i = 0; i < 20; ++i) {
      const auto plant = testing::random_plant(rng);
      CHECK(check_controllability(with_processes(plant, all_true_supervisor(plant.sig()))));
    }
  }

  TEST_CASE("controllability of the bundled PPF supervisor and the tampered fixture") {
    CHECK(check_controllability(testing::load_model("models/ppf_1_1.cpd")));
    const auto tampered = testing::load_model("tests/fixtures/ppf_1_1_tampered.cpd");
    const auto r = check_controllability(tampered);
    REQUIRE_FALSE(r);
    REQUIRE(r.relation.counterexample);
    CHECK(r.relation.counterexample->clause == Counterexample::Clause::backward);
    CHECK_FALSE(tampered.sig().controllable(r.relation.counterexample->action));
    CHECK(render(r).find("_InRun") != std::string::npos);
  }

  TEST_CASE("nonblocking") {
    const auto sig = testing::small_signature();
    const auto dead = explore(sig, Configuration{parse_term(*sig, "b! . 0"), Environment::initial(*sig)});
    const auto r = check_nonblocking(dead);
    REQUIRE_FALSE(r);
    REQUIRE(r.blocking.size() == 2);
    REQUIRE(r.trace.empty());  // the initial state already blocks

    const auto dead_after = explore(sig, Configuration{parse_term(*sig, "b! . 0 + 1"), Environment::initial(*sig)});
    const auto r2 = check_nonblocking(dead_after);
    REQUIRE_FALSE(r2);
    CHECK(r2.blocking.size() == 1);
    CHECK(r2.trace.size() == 1);

    const auto loop = explore(sig, Configuration{parse_term(*sig, "(b! . 1)*"), Environment::initial(*sig)});
    CHECK(loop.size() == 1);
    CHECK(check_nonblocking(loop));
  }

  TEST_CASE("removing blocking states leaves a coreachable remainder") {
    testing::Rng rng(8);
    const auto sig = testing::small_signature();
    int seen = 0;
    for (int i = 0; i < 300 && seen < 40; ++i) {
      const auto ss = testing::explore_small(sig, testing::random_term(rng, *sig), 100);
      if (!ss) continue;
      const auto r = check_nonblocking(*ss);
      if (r.holds) continue;
      ++seen;
      std::vector<bool> blocked(ss->size());
      for (auto s : r.blocking) blocked[s] = true;
      const auto co = coreachable(*ss);
      const auto reach = reachable(*ss);
      for (StateId s = 0; s < ss->size(); ++s)
        if (reach[s] && !blocked[s]) CHECK(co[s]);
    }
    CHECK(seen > 0);
  }
}
