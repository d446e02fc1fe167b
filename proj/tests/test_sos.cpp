#include <doctest.h>

#include <algorithm>

#include "cpd/control.hpp"
#include "cpd/error.hpp"
#include "cpd/parser.hpp"
#include "cpd/ppf.hpp"
#include "cpd/relations.hpp"
#include "generators.hpp"
#include "test_util.hpp"

using namespace cpd;

namespace {

Configuration at_initial(const Signature& sig, const Term& t) { return Configuration{t, Environment::initial(sig)}; }

// x : 0..3, channels s (controllable) and u (uncontrollable).
std::shared_ptr<Signature> sync_signature() {
  auto sig = std::make_shared<Signature>();
  sig->add_channel({"s", Controllability::controllable});
  sig->add_channel({"u", Controllability::uncontrollable});
  sig->add_variable({"x", Domain::range(0, 3), 0});
  sig->add_variable({"y", Domain::range(0, 3), 0});
  return sig;
}

}  // namespace

TEST_SUITE("sos") {
  TEST_CASE("terminates") {
    auto sig = sync_signature();
    CHECK(terminates(Term::termination(), {0, 0}));
    CHECK_FALSE(terminates(Term::deadlock(), {0, 0}));
    CHECK_FALSE(terminates(parse_term(*sig, "u! . 1"), {0, 0}));
    CHECK_FALSE(terminates(parse_term(*sig, "x = 1 -> 1"), {2, 0}));
    CHECK(terminates(parse_term(*sig, "x = 1 -> 1"), {1, 0}));
    CHECK(terminates(parse_term(*sig, "(u! . 0)*"), {0, 0}));
    CHECK(terminates(parse_term(*sig, "1 || (1 + u! . 1)"), {0, 0}));
    CHECK_FALSE(terminates(parse_term(*sig, "1 || u! . 1"), {0, 0}));
    CHECK_FALSE(terminates(parse_term(*sig, "1 . u! . 1"), {0, 0}));
    CHECK(terminates(parse_term(*sig, "encap{u!}(1)"), {0, 0}));
  }

  TEST_CASE("prefix step") {
    const auto agv = testing::load_model("models/agv.cpd");
    const auto body = parse_term(agv.sig(), "arrivedA! . 1");
    const auto t = Term::prefix(parse_action(agv.sig(), "gotoA?"), {}, body);
    Configuration c = at_initial(agv.sig(), t);
    const auto steps = step(agv.sig(), c);
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].action == Action{*agv.sig().find_channel("gotoA"), 0, 1});
    CHECK(steps[0].target.term == body);
    CHECK(steps[0].target.env.alpha == c.env.alpha);
    CHECK(steps[0].target.env.rho.empty());
  }

  TEST_CASE("synchronization updates the observer variable") {
    const auto agv = testing::load_model("models/agv.cpd");
    const auto& sig = agv.sig();
    const Value a = *sig.find_enumerator("A");
    const Value b = *sig.find_enumerator("B");
    Configuration c = at_initial(sig, parse_term(sig, "arrivedA! . 1 || arrivedA?[L := A] . 1"));
    c.env.alpha = {b};
    const auto steps = step(sig, c);
    const auto arrived = *sig.find_channel("arrivedA");
    auto it = std::find_if(steps.begin(), steps.end(), [&](const Step& s) { return s.action == Action{arrived, 1, 1}; });
    REQUIRE(it != steps.end());
    CHECK(it->target.env.alpha == Valuation{a});
    CHECK(it->target.env.rho == std::vector<VarId>{*sig.find_variable("L")});
    // Interleavings are present as well.
    CHECK(steps.size() == 3);
  }

  TEST_CASE("conflicting updates do not synchronize") {
    auto sig = sync_signature();
    const auto x = *sig->find_variable("x");
    const auto s = *sig->find_channel("s");
    for (Value v1 = 0; v1 <= 3; ++v1)
      for (Value v2 = 0; v2 <= 3; ++v2) {
        const auto text = "s![x := " + std::to_string(v1) + "] . 1 || s?[x := " + std::to_string(v2) + "] . 1";
        const auto steps = step(*sig, at_initial(*sig, parse_term(*sig, text)));
        const auto sync = std::count_if(steps.begin(), steps.end(), [&](const Step& st) { return st.action == Action{s, 1, 1}; });
        CHECK(sync == (v1 == v2 ? 1 : 0));
        if (v1 == v2)
          for (const auto& st : steps)
            if (st.action == Action{s, 1, 1}) CHECK(st.target.env.alpha[x] == v1);
      }
    // Disjoint updates merge.
    const auto steps = step(*sig, at_initial(*sig, parse_term(*sig, "s![x := 1] . 1 || s?[y := 2] . 1")));
    auto it = std::find_if(steps.begin(), steps.end(), [&](const Step& st) { return st.action == Action{s, 1, 1}; });
    REQUIRE(it != steps.end());
    CHECK(it->target.env.alpha == Valuation{1, 2});
    CHECK(it->target.env.rho.size() == 2);
  }

  TEST_CASE("out-of-domain updates are errors") {
    auto sig = sync_signature();
    const auto t = parse_term(*sig, "u![x := x + 5] . 1");
    CHECK_THROWS_AS(step(*sig, at_initial(*sig, t)), ModelError);
  }

  TEST_CASE("xi_rename") {
    const auto agv = testing::load_model("models/agv.cpd");
    const auto& sig = agv.sig();
    const auto goto_a = *sig.find_channel("gotoA");
    const auto renamed = xi_rename(sig, parse_term(sig, "gotoA? . arrivedA! . 1"));
    REQUIRE(renamed.is(TermKind::prefix));
    CHECK(renamed.action() == Action{goto_a, 1, 1});
    CHECK(renamed.body() == parse_term(sig, "arrivedA! . 1"));

    const auto ppf = instantiate_ppf(1, {1});
    const auto in_run = parse_term(ppf.sig(), "_InRun![CPM := 3] . 1");
    CHECK(xi_rename(ppf.sig(), in_run) == in_run);
    CHECK(xi_rename(sig, Term::termination()) == Term::termination());
    CHECK_THROWS_AS(xi_rename(sig, parse_term(sig, "gotoA! . 1")), ModelError);
  }

  TEST_CASE("xi_rename agrees with label renaming on a single receiver") {
    // With one receiver per controllable channel, renaming the term and
    // renaming the labels of the explored space give bisimilar results.
    const auto agv = testing::load_model("models/agv.cpd");
    const auto sig = agv.signature;
    const auto plant = agv.plant_term();
    const auto syntactic = explore(sig, at_initial(*sig, xi_rename(*sig, plant)));
    const auto semantic = xi_relabel(explore(sig, at_initial(*sig, plant)));
    CHECK(bisimilar(syntactic, semantic));

    const auto ppf = instantiate_ppf(1, {1});
    const auto ppf_syn = explore(ppf.signature, at_initial(ppf.sig(), xi_rename(ppf.sig(), ppf.plant_term())));
    const auto ppf_sem = renamed_plant_space(ppf);
    CHECK(bisimilar(ppf_syn, ppf_sem));
  }

  TEST_CASE("step is deterministic") {
    const auto sig = testing::small_signature();
    testing::Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      const auto t = testing::random_term(rng, *sig);
      const auto c = at_initial(*sig, t);
      CHECK(step(*sig, c) == step(*sig, c));
    }
  }

  TEST_CASE("guards and encapsulation on random terms") {
    const auto sig = testing::small_signature();
    testing::Rng rng(9);
    for (int i = 0; i < 200; ++i) {
      const auto p = testing::random_term(rng, *sig);
      const auto c = at_initial(*sig, p);
      const auto base = step(*sig, c);
      const auto with_true = step(*sig, at_initial(*sig, Term::guard(BoolExpr::constant(true), p)));
      CHECK(with_true == base);
      CHECK(terminates(Term::guard(BoolExpr::constant(true), p), c.env.alpha) == terminates(p, c.env.alpha));
      CHECK(step(*sig, at_initial(*sig, Term::guard(BoolExpr::constant(false), p))).empty());
      CHECK_FALSE(terminates(Term::guard(BoolExpr::constant(false), p), c.env.alpha));

      const auto h = ActionSet({testing::random_action(rng, *sig)}, {IncompletePattern{0, 2}});
      const auto enc = step(*sig, at_initial(*sig, Term::encap(h, p)));
      std::vector<Step> expected;
      for (const auto& s : base)
        if (!h.contains(s.action)) expected.push_back(s);
      REQUIRE(enc.size() == expected.size());
      for (const auto& e : expected) {
        const Step wrapped{e.action, Configuration{Term::encap(h, e.target.term), e.target.env}};
        CHECK(std::find(enc.begin(), enc.end(), wrapped) != enc.end());
      }
    }
  }
}
