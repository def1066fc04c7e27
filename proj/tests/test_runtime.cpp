#include <doctest.h>

#include <sstream>

#include "support/fuzz.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"
#include "tyche/parser.hpp"
#include "tyche/runtime.hpp"

using namespace tyche;
using tyche::testing::data_path;
using tyche::testing::slurp;

namespace {

const HomeConfig& demo_home() {
  static const HomeConfig home = load_home(data_path("demo_home.json"), builtin_catalog());
  return home;
}

RewrittenApp compile_app(const std::string& src) {
  auto ast = dsl::parse_source(src);
  return rewrite(ast, dsl::check_annotations(ast), default_risk_table());
}

RewrittenApp compile_file(const std::string& name) { return compile_app(slurp(data_path("apps/" + name))); }

std::vector<std::string> device_ids(const std::vector<const Device*>& ds) {
  std::vector<std::string> out;
  for (const auto* d : ds) out.push_back(d->id);
  return out;
}

Trace run_one(const RewrittenApp& app, const std::string& scenario, const HomeConfig& home = demo_home()) {
  auto prompt = ScriptedPrompt::load(data_path("answers/demo.answers"));
  std::vector<InstalledApp> apps{install(app, home, prompt)};
  auto events = load_scenario(data_path("scenarios/" + scenario));
  return run_scenario(apps, home, events, default_risk_table(), builtin_catalog());
}

bool lock_state_changed(const Trace& t) {
  for (const auto& e : t.events())
    if (const auto* s = e.as<trace::StateChanged>(); s && s->device == "frontDoor") return true;
  return false;
}

Grant grant(std::string cap, RiskLevel level) { return {"A", "b", "d", std::move(cap), level}; }

}  // namespace

TEST_SUITE("runtime") {

TEST_CASE("enumerate devices") {
  CHECK(device_ids(enumerate_devices(demo_home(), "switch", builtin_catalog())) ==
        std::vector<std::string>{"kitchenSwitch", "heaterSwitch"});
  CHECK(device_ids(enumerate_devices(demo_home(), "lock", builtin_catalog())) ==
        std::vector<std::string>{"frontDoor"});

  Catalog cat({Capability{"motionSensor", {}, {"motion"}}});
  HomeConfig home = parse_home(R"([
    {"id":"hallMotion","label":"Hall","capabilities":["motionSensor"],"initial_state":{"motion":"inactive"}},
    {"id":"yardMotion","label":"Yard","capabilities":["motionSensor"],"initial_state":{}}])",
                               cat);
  CHECK(device_ids(enumerate_devices(home, "motionSensor", cat)) ==
        std::vector<std::string>{"hallMotion", "yardMotion"});
  CHECK_THROWS_AS(enumerate_devices(home, "lock", cat), Error);
}

TEST_CASE("home validation") {
  const auto& cat = builtin_catalog();
  CHECK_THROWS_AS(parse_home(R"([{"id":"a","capabilities":["teleporter"]}])", cat), Error);
  CHECK_THROWS_AS(parse_home(R"([{"id":"a","capabilities":["lock"]},{"id":"a","capabilities":["lock"]}])", cat),
                  Error);
  CHECK_THROWS_AS(parse_home(R"([{"id":"time","capabilities":["lock"]}])", cat), Error);
  CHECK_THROWS_AS(parse_home(R"([{"id":"a","capabilities":["lock"],"initial_state":{"switch":"on"}}])", cat),
                  Error);
}

TEST_CASE("scenario format") {
  auto ev = parse_scenario("# comment\nt=21:00 frontContact.contact=closed\n\nt=00:05 heaterMeter.power=1800\n");
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].minute_of_day == 21 * 60);
  CHECK(ev[0].value == Value{std::string("closed")});
  CHECK(ev[1].value == Value{1800.0});
  CHECK(ev[1].line == 4);
  CHECK(ev[1].time_text() == "00:05");
  CHECK_THROWS_AS(parse_scenario("t=25:00 a.b=c\n"), Error);
  CHECK_THROWS_AS(parse_scenario("frontContact.contact=closed\n"), Error);
  CHECK_THROWS_AS(parse_scenario("t=10:00 frontContact=closed\n"), Error);
}

TEST_CASE("install grants under accept-all") {
  AcceptAllPrompt accept;
  InstalledApp app = install(compile_file("lockdown.ty"), demo_home(), accept);
  REQUIRE(app.grants().size() == 2);
  CHECK(app.grants()[0] == Grant{"LockDown", "frontDoor", "frontDoor", "lock", RiskLevel::Medium});
  CHECK(app.grants()[1] == Grant{"LockDown", "frontContact", "frontContact", "contactSensor", RiskLevel::Low});
  CHECK(app.monitored());
}

TEST_CASE("install is all or nothing") {
  auto deny = ScriptedPrompt::parse("frontContact = accept\nfrontDoor = deny\n");
  try {
    install(compile_file("lockdown.ty"), demo_home(), deny);
    FAIL("expected UserDenied");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UserDenied);
  }

  HomeConfig no_alarm = demo_home();
  std::erase_if(no_alarm.devices, [](const Device& d) { return d.supports("alarm"); });
  AcceptAllPrompt accept;
  try {
    install(compile_file("smokeprotector.ty"), no_alarm, accept);
    FAIL("expected NoMatchingDevice");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoMatchingDevice);
  }

  auto wrong = ScriptedPrompt::parse("frontDoor = kitchenSwitch\nfrontContact = accept\n");
  CHECK_THROWS_AS(install(compile_file("lockdown.ty"), demo_home(), wrong), Error);
}

TEST_CASE("scripted prompt: qualified keys win") {
  auto p = ScriptedPrompt::parse("outlet = kitchenSwitch\nEnergySaver.outlet = heaterSwitch\nmeter = accept\n");
  InstalledApp app = install(compile_file("energysaver.ty"), demo_home(), p);
  CHECK(*app.device_for("outlet") == "heaterSwitch");
  CHECK(*app.device_for("meter") == "heaterMeter");
}

TEST_CASE("prompt line") {
  auto cands = enumerate_devices(demo_home(), "switch", builtin_catalog());
  InstallRequest req{"EnergySaver", {"outlet", "switch", RiskLevel::High}};
  std::string line = prompt_line(req, cands);
  CHECK(line.find("EnergySaver") != std::string::npos);
  CHECK(line.find("HIGH") != std::string::npos);
  CHECK(line.find("kitchenSwitch") != std::string::npos);

  std::istringstream in("2\n");
  std::ostringstream out;
  ConsolePrompt console(in, out);
  CHECK(console.choose(req, cands) == std::optional<std::string>("heaterSwitch"));
  std::istringstream in2("deny\n");
  ConsolePrompt console2(in2, out);
  CHECK_FALSE(console2.choose(req, cands));
}

TEST_CASE("monitor check") {
  const RiskTable& t = default_risk_table();
  Trace tr;
  auto d = monitor_check(grant("lock", RiskLevel::Medium), {"lock", "lock", OperationKind::Command}, t, &tr);
  CHECK(d.verdict == Verdict::Allow);
  d = monitor_check(grant("lock", RiskLevel::Medium), {"lock", "unlock", OperationKind::Command}, t, &tr);
  CHECK(d.verdict == Verdict::Deny);
  CHECK(d.required == RiskLevel::High);
  REQUIRE(tr.size() == 2);
  CHECK(tr.events()[1].as<trace::MonitorCheck>()->verdict == Verdict::Deny);
  CHECK_THROWS_AS(monitor_check(grant("switch", RiskLevel::High), {"lock", "lock", OperationKind::Command}, t),
                  Error);
}

TEST_CASE("execute command") {
  Device door{"frontDoor", "Front door", {"lock"}, {{"lock", std::string("unlocked")}}};
  auto ev = execute_command(door, {"lock", "lock", OperationKind::Command});
  REQUIRE(ev);
  CHECK(ev->attribute == "lock");
  CHECK(ev->value == Value{std::string("locked")});
  CHECK(door.state["lock"] == Value{std::string("locked")});
  CHECK_FALSE(execute_command(door, {"lock", "lock", OperationKind::Command}));
  CHECK_THROWS_AS(execute_command(door, {"lock", "lock", OperationKind::Attribute}), Error);

  Device siren{"s", "", {"alarm"}, {{"alarm", std::string("off")}}};
  ev = execute_command(siren, {"alarm", "both", OperationKind::Command});
  REQUIRE(ev);
  CHECK(ev->value == Value{std::string("both")});
}

TEST_CASE("empty scenario yields only the startup notice") {
  AcceptAllPrompt accept;
  std::vector<InstalledApp> apps{install(compile_file("lockdown.ty"), demo_home(), accept)};
  Trace t = run_scenario(apps, demo_home(), {}, default_risk_table(), builtin_catalog());
  REQUIRE(t.size() == 2);
  for (const auto& e : t.events()) CHECK(e.kind() == TraceKind::StartupNotice);
}

TEST_CASE("legitimate LockDown locks the door after nine") {
  Trace t = run_one(compile_file("lockdown.ty"), "evening.scn");
  CHECK(tyche::testing::mediation_violations(t) == 0);
  int locks = 0;
  for (const auto& e : t.events()) {
    if (const auto* c = e.as<trace::CommandExecuted>()) {
      CHECK(c->op.id() == "lock.lock()");
      ++locks;
    }
    CHECK(e.kind() != TraceKind::PolicyViolation);
  }
  CHECK(locks == 1);
  CHECK(lock_state_changed(t));
}

TEST_CASE("attack is denied and matches the golden trace") {
  Trace t = run_one(compile_file("lockdown_attack.ty"), "evening.scn");
  CHECK_FALSE(lock_state_changed(t));
  int violations = 0;
  for (const auto& e : t.events())
    if (const auto* v = e.as<trace::PolicyViolation>()) {
      ++violations;
      CHECK(v->op.id() == "lock.unlock()");
      CHECK(v->granted == RiskLevel::Medium);
      CHECK(v->required == RiskLevel::High);
    }
  CHECK(violations == 1);
  CHECK(render(t) == slurp(tyche::testing::test_path("golden/lockdown_attack.trace")));
}

TEST_CASE("a denial aborts only the current handler") {
  auto app = compile_app(
      "app \"Two\"\nmedRiskRequest\ninput \"door\", \"capability.lock\"\n"
      "lowRiskRequest\ninput \"c\", \"capability.contactSensor\"\n"
      "subscribe(c, \"contact\", bad)\nsubscribe(c, \"contact\", good)\n"
      "def bad(evt) {\n  door.unlock()\n  log(\"after unlock\")\n}\n"
      "def good(evt) {\n  door.lock()\n}\n");
  auto prompt = ScriptedPrompt::parse("door = frontDoor\nc = frontContact\n");
  std::vector<InstalledApp> apps{install(app, demo_home(), prompt)};
  auto events = parse_scenario("t=10:00 frontContact.contact=closed\n");
  Trace t = run_scenario(apps, demo_home(), events, default_risk_table(), builtin_catalog());
  std::string text = render(t);
  CHECK(text.find("after unlock") == std::string::npos);
  CHECK(text.find("PolicyViolation") != std::string::npos);
  CHECK(text.find("CommandExecuted app=Two device=frontDoor op=lock.lock()") != std::string::npos);
}

TEST_CASE("scenario validation") {
  AcceptAllPrompt accept;
  std::vector<InstalledApp> apps{install(compile_file("lockdown.ty"), demo_home(), accept)};
  auto run = [&](const std::string& s) {
    auto ev = parse_scenario(s);
    return run_scenario(apps, demo_home(), ev, default_risk_table(), builtin_catalog());
  };
  CHECK_THROWS_AS(run("t=10:00 ghost.contact=closed\n"), Error);
  CHECK_THROWS_AS(run("t=10:00 frontDoor.switch=on\n"), Error);
  CHECK_THROWS_AS(run("t=10:00 time.clock=11:00\n"), Error);
  CHECK_NOTHROW(run("t=10:00 time.clock=10:00\n"));
}

TEST_CASE("runaway cascades stop at the cap") {
  auto app = compile_app(
      "app \"Flip\"\nhighRiskRequest\ninput \"sw\", \"capability.switch\"\n"
      "subscribe(sw, \"switch.on\", turnOff)\nsubscribe(sw, \"switch.off\", turnOn)\n"
      "def turnOff(evt) { sw.off() }\ndef turnOn(evt) { sw.on() }\n");
  auto prompt = ScriptedPrompt::parse("sw = kitchenSwitch\n");
  std::vector<InstalledApp> apps{install(app, demo_home(), prompt)};
  auto events = parse_scenario("t=10:00 kitchenSwitch.switch=off\n");
  Trace t = run_scenario(apps, demo_home(), events, default_risk_table(), builtin_catalog());
  CHECK(render(t).find("event cascade limit reached") != std::string::npos);
}

TEST_CASE("fuzz: determinism and grant soundness") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    auto c = tyche::testing::random_case(seed);
    auto rw = rewrite(c.app, dsl::check_annotations(c.app), default_risk_table());
    AcceptAllPrompt accept;
    std::vector<InstalledApp> apps{install(rw, c.home, accept)};
    Trace a = run_scenario(apps, c.home, c.scenario, default_risk_table(), builtin_catalog());
    Trace b = run_scenario(apps, c.home, c.scenario, default_risk_table(), builtin_catalog());
    CHECK(render(a) == render(b));
    CHECK(tyche::testing::mediation_violations(a) == 0);
    for (const auto& e : a.events()) {
      if (const auto* m = e.as<trace::MonitorCheck>()) {
        const Grant* g = apps[0].grant_for(m->binding);
        REQUIRE(g);
        CHECK(m->granted == g->level);
        CHECK(m->required == default_risk_table().level_of(m->op));
        CHECK((m->verdict == Verdict::Allow) == (m->required <= m->granted));
      }
      if (const auto* x = e.as<trace::CommandExecuted>()) {
        bool bound = false;
        for (const auto& g : apps[0].grants()) bound |= g.device == x->device && g.capability == x->op.capability;
        CHECK(bound);
      }
    }
  }
}

}  // TEST_SUITE
