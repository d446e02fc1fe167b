#include <doctest.h>

#include <nlohmann/json.hpp>

#include "cpd/control.hpp"
#include "cpd/error.hpp"
#include "cpd/parser.hpp"
#include "cpd/ppf.hpp"
#include "generators.hpp"
#include "test_util.hpp"

using namespace cpd;

namespace {

std::size_t count_edges(const std::string& dot) {
  std::size_t n = 0;
  for (auto pos = dot.find("->"); pos != std::string::npos; pos = dot.find("->", pos + 2)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("state_space") {
  TEST_CASE("deadlock explores to a single unmarked state") {
    const auto sig = testing::small_signature();
    const auto ss = explore(sig, Configuration{Term::deadlock(), Environment::initial(*sig)});
    CHECK(ss.size() == 1);
    CHECK(ss.transitions().empty());
    CHECK(ss.marked_count() == 0);
    CHECK_FALSE(coreachable(ss)[0]);
  }

  TEST_CASE("one-state marked space exports") {
    const auto sig = testing::small_signature();
    const auto ss = explore(sig, Configuration{Term::termination(), Environment::initial(*sig)});
    CHECK(ss.marked_count() == 1);
    CHECK(coreachable(ss)[0]);
    const auto dot = export_space(ss, ExportFormat::dot);
    CHECK(dot.find("peripheries=2") != std::string::npos);
    CHECK(count_edges(dot) == 1);  // the initial arrow
  }

  TEST_CASE("AGV supervised space") {
    const auto agv = testing::load_model("models/agv.cpd");
    const auto ss = explore(agv.signature, supervised_plant(agv));
    const auto l = *agv.sig().find_variable("L");
    for (StateId s = 0; s < ss.size(); ++s) CHECK(agv.sig().variable(l).domain.contains(ss.alpha(s)[l]));
    CHECK(ss.size() == 4);
    CHECK(check_nonblocking(ss));

    const auto again = explore(agv.signature, supervised_plant(agv));
    CHECK(again.size() == ss.size());
    CHECK(again.transitions() == ss.transitions());

    const auto dot = export_space(ss, ExportFormat::dot);
    CHECK(count_edges(dot) == ss.transitions().size() + 1);
    const auto j = nlohmann::json::parse(export_space(ss, ExportFormat::json));
    CHECK(j["states"].size() == ss.size());
    CHECK(j["transitions"].size() == ss.transitions().size());
    CHECK(j["states"][0]["alpha"]["L"] == "A");
  }

  TEST_CASE("PPF supervised space stays in range") {
    const auto ppf = testing::load_model("models/ppf_1_1.cpd");
    const auto ss = explore(ppf.signature, supervised_plant(ppf));
    CHECK(ss.marked_count() > 0);
    const auto co = coreachable(ss);
    for (StateId s = 0; s < ss.size(); ++s) {
      CHECK(co[s]);
      for (VarId v = 0; v < ppf.sig().variables().size(); ++v)
        CHECK(ppf.sig().variable(v).domain.contains(ss.alpha(s)[v]));
    }
  }

  TEST_CASE("budget exhaustion is an error") {
    const auto ppf = testing::load_model("models/ppf_1_1.cpd");
    try {
      explore(ppf.signature, supervised_plant(ppf), ExploreOptions{.budget = 3});
      FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
      CHECK(e.budget() == 3);
      CHECK(e.discovered() > 3);
    }
  }

  TEST_CASE("random walks stay inside the explored space") {
    const auto sig = testing::small_signature();
    testing::Rng rng(21);
    int walks = 0;
    while (walks < 100) {
      const auto t = testing::random_term(rng, *sig);
      const auto ss = testing::explore_small(sig, t, 200);
      if (!ss) continue;
      ++walks;
      Configuration c = ss->state(ss->initial());
      for (int k = 0; k < 20; ++k) {
        const auto steps = step(*sig, c, StepOptions{.canonical = true});
        if (steps.empty()) break;
        c = steps[std::uniform_int_distribution<std::size_t>(0, steps.size() - 1)(rng)].target;
        bool found = false;
        for (const auto& st : ss->states())
          if (st.term == c.term && st.env.alpha == c.env.alpha) found = true;
        CHECK(found);
      }
    }
  }

  TEST_CASE("shortest traces follow BFS depth") {
    const auto ppf = testing::load_model("models/ppf_1_1.cpd");
    const auto ss = explore(ppf.signature, supervised_plant(ppf));
    for (StateId s = 0; s < ss.size(); ++s) {
      const auto t = shortest_trace(ss, s);
      REQUIRE(t);
      StateId at = ss.initial();
      for (const auto& tr : *t) {
        CHECK(tr.source == at);
        at = tr.target;
      }
      CHECK(at == s);
    }
    CHECK(shortest_trace(ss, ss.initial())->empty());
  }

  TEST_CASE("xi_relabel completes controllable receives only") {
    const auto agv = testing::load_model("models/agv.cpd");
    const auto plant = explore(agv.signature, Configuration{agv.plant_term(), Environment::initial(agv.sig())});
    const auto renamed = xi_relabel(plant);
    REQUIRE(plant.transitions().size() == renamed.transitions().size());
    for (std::size_t i = 0; i < plant.transitions().size(); ++i) {
      const auto& a = plant.transitions()[i].action;
      const auto& b = renamed.transitions()[i].action;
      if (agv.sig().controllable(a)) CHECK(b == Action{a.channel, a.senders + 1, a.receivers});
      else CHECK(b == a);
    }
  }
}
