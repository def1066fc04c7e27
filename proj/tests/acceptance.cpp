// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exit status is
// non-zero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "support/fuzz.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"
#include "tyche/cli.hpp"
#include "tyche/parser.hpp"
#include "tyche/riskgen.hpp"
#include "tyche/runtime.hpp"
#include "tyche/stats.hpp"
#include "tyche/survey.hpp"

using namespace tyche;
using tyche::testing::data_path;
using tyche::testing::slurp;
using json = nlohmann::json;

namespace {

// Pinned thresholds.
constexpr double kAnalyzeBudgetSeconds = 1.0;
constexpr double kReductionTolerance = 1e-9;
constexpr int kFuzzPairs = 200;
constexpr int kClusterInstances = 500;
constexpr double kPearsonTolerance = 1e-12;
constexpr int kCalibrationTrials = 200;
constexpr int kCalibrationItems = 60;
constexpr int kRandomRatersPerTrial = 10;
constexpr int kTrackersPerTrial = 30;
constexpr double kTrackerNoiseSd = 0.6;
constexpr double kMinRemovedRandom = 0.90;
constexpr double kMinKeptTrackers = 0.95;
constexpr double kPublishedRTolerance = 0.05;

struct Outcome {
  enum Status { Pass, Fail, Skip } status;
  std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Fail, std::move(d)}; }
Outcome check(bool ok, std::string d) { return {ok ? Outcome::Pass : Outcome::Fail, std::move(d)}; }

std::string app(const std::string& name) { return data_path("apps/" + name); }

RewrittenApp compile_file(const std::string& path, const RiskTable& table = default_risk_table()) {
  auto ast = dsl::parse_source(slurp(path));
  return rewrite(ast, dsl::check_annotations(ast), table);
}

const HomeConfig& demo_home() {
  static const HomeConfig home = load_home(data_path("demo_home.json"), builtin_catalog());
  return home;
}

Trace run_fixture(const std::vector<std::string>& apps, const std::string& scenario) {
  auto prompt = ScriptedPrompt::load(data_path("answers/demo.answers"));
  std::vector<InstalledApp> installed;
  for (const auto& a : apps) installed.push_back(install(compile_file(app(a)), demo_home(), prompt));
  auto events = load_scenario(data_path("scenarios/" + scenario));
  return run_scenario(installed, demo_home(), events, default_risk_table(), builtin_catalog());
}

// ---------------------------------------------------------------------------

json analyze_json(double* seconds) {
  std::istringstream in;
  std::ostringstream out, err;
  auto t0 = std::chrono::steady_clock::now();
  int code = cli::dispatch({"analyze", app("lockdown.ty"), app("smokeprotector.ty"), app("energysaver.ty"),
                            "--risk-table", data_path("default.risk"), "--format", "json"},
                           in, out, err);
  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (code != 0) throw std::runtime_error("analyze exited " + std::to_string(code) + ": " + err.str());
  return json::parse(out.str());
}

using Sets = std::map<std::string, std::set<std::string>>;

Outcome table4() {
  // Transcribed from the case-study table: accessible attrs and cmds per app.
  const std::map<std::string, std::pair<Sets, Sets>> expected{
      {"LockDown",
       {{{"attrs", {"lock", "contact"}}, {"cmds", {"lock()", "unlock()"}}},
        {{"attrs", {"contact"}}, {"cmds", {"lock()"}}}}},
      {"SmokeProtector",
       {{{"attrs", {"alarm", "smoke"}}, {"cmds", {"off()", "strobe()", "both()", "siren()"}}},
        {{"attrs", {"alarm", "smoke"}}, {"cmds", {"strobe()", "siren()", "both()"}}}}},
      {"EnergySaver",
       {{{"attrs", {"power", "switch"}}, {"cmds", {"on()", "off()"}}},
        {{"attrs", {"power", "switch"}}, {"cmds", {"on()", "off()"}}}}},
  };
  double seconds = 0;
  json doc = analyze_json(&seconds);
  auto sets_of = [](const json& j) {
    Sets s;
    for (const char* k : {"attrs", "cmds"})
      for (const auto& v : j.at(k)) s[k].insert(v.get<std::string>());
    return s;
  };
  std::set<std::string> seen;
  for (const auto& a : doc.at("apps")) {
    std::string name = a.at("app");
    auto it = expected.find(name);
    if (it == expected.end()) return fail("unexpected app " + name);
    if (sets_of(a.at("functional")) != it->second.first) return fail(name + ": functional sets differ");
    if (sets_of(a.at("risk_based")) != it->second.second) return fail(name + ": risk-based sets differ");
    seen.insert(name);
  }
  if (seen.size() != expected.size()) return fail("missing apps in report");
  std::ostringstream d;
  d << "3 apps x 2 models match; " << seconds << " s";
  return check(seconds < kAnalyzeBudgetSeconds, d.str());
}

Outcome reduction() {
  double seconds = 0;
  json doc = analyze_json(&seconds);
  double r = doc.at("high_risk_reduction");
  std::istringstream in;
  std::ostringstream out, err;
  cli::dispatch({"analyze", app("lockdown.ty"), app("smokeprotector.ty"), app("energysaver.ty"), "--risk-table",
                 data_path("default.risk")},
                in, out, err);
  bool line = out.str().find("high-risk reduction: 60.0%") != std::string::npos;
  std::ostringstream d;
  d << "reduction " << r << "%";
  return check(std::abs(r - 60.0) <= kReductionTolerance && line, d.str());
}

Outcome enforcement() {
  auto prompt = ScriptedPrompt::load(data_path("answers/demo.answers"));
  install(compile_file(app("lockdown_attack.ty")), demo_home(), prompt);  // throws if it cannot install

  Trace attack = run_fixture({"lockdown_attack.ty"}, "evening.scn");
  int violations = 0, lock_changes = 0;
  for (const auto& e : attack.events()) {
    if (e.kind() == TraceKind::PolicyViolation) ++violations;
    if (const auto* s = e.as<trace::StateChanged>(); s && s->device == "frontDoor") ++lock_changes;
  }
  if (violations == 0 || lock_changes != 0) return fail("attack not contained");

  Trace legit = run_fixture({"lockdown.ty"}, "evening.scn");
  bool locked = false;
  for (const auto& e : legit.events())
    if (const auto* s = e.as<trace::StateChanged>();
        s && s->device == "frontDoor" && s->value == Value{std::string("locked")})
      locked = true;
  if (!locked) return fail("legitimate lock() did not lock the door");

  std::string golden = slurp(tyche::testing::test_path("golden/lockdown_attack.trace"));
  std::string again = render(run_fixture({"lockdown_attack.ty"}, "evening.scn"));
  return check(render(attack) == golden && again == golden,
               std::to_string(violations) + " violation(s), no lock StateChanged, golden trace stable");
}

Outcome compile_gate() {
  auto err_path = std::filesystem::temp_directory_path() / "tyche_acceptance_compile.err";
  std::string cmd = std::string("\"") + TYCHE_CLI_PATH + "\" compile \"" + app("unannotated.ty") +
                    "\" --risk-table \"" + data_path("default.risk") + "\" >/dev/null 2>\"" + err_path.string() +
                    "\"";
  int raw = std::system(cmd.c_str());
  int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::string err = slurp(err_path.string());
  bool ok = code == 2 && err.find("MissingAnnotation") != std::string::npos &&
            err.find("line 6") != std::string::npos;
  std::string first = err.substr(0, err.find('\n'));
  return check(ok, "exit " + std::to_string(code) + ": " + first);
}

Outcome mediation() {
  int checked_ops = 0, bad = 0, runs = 0;
  auto count_ops = [&](const Trace& t) {
    for (const auto& e : t.events()) {
      if (e.kind() == TraceKind::CommandExecuted) ++checked_ops;
      if (const auto* d = e.as<trace::EventDelivered>(); d && d->op) ++checked_ops;
    }
    bad += tyche::testing::mediation_violations(t);
    ++runs;
  };
  const std::vector<std::string> apps{"lockdown.ty", "lockdown_attack.ty", "smokeprotector.ty", "energysaver.ty"};
  for (const char* scn : {"evening.scn", "smoke.scn", "heater.scn"}) {
    for (const auto& a : apps) count_ops(run_fixture({a}, scn));
    count_ops(run_fixture({"lockdown.ty", "smokeprotector.ty", "energysaver.ty"}, scn));
  }
  for (int seed = 1; seed <= kFuzzPairs; ++seed) {
    auto c = tyche::testing::random_case(static_cast<std::uint64_t>(seed));
    auto rw = rewrite(c.app, dsl::check_annotations(c.app), default_risk_table());
    AcceptAllPrompt accept;
    std::vector<InstalledApp> installed{install(rw, c.home, accept)};
    count_ops(run_scenario(installed, c.home, c.scenario, default_risk_table(), builtin_catalog()));
  }
  return check(bad == 0 && checked_ops > 0, std::to_string(runs) + " runs, " + std::to_string(checked_ops) +
                                                " device operations, " + std::to_string(bad) + " unmediated");
}

Outcome transparency() {
  RiskTable allow_all = uniform_risk_table(builtin_catalog(), RiskLevel::Low);
  int differing = 0, compared_lines = 0;
  for (int seed = 1; seed <= kFuzzPairs; ++seed) {
    auto c = tyche::testing::random_case(static_cast<std::uint64_t>(seed) + 100000);
    auto rw = rewrite(c.app, dsl::check_annotations(c.app), allow_all);
    AcceptAllPrompt accept;
    std::vector<InstalledApp> monitored{install(rw, c.home, accept)};
    std::vector<InstalledApp> plain{install_unmonitored(c.app, c.home, accept)};
    auto a = tyche::testing::without_monitoring(
        run_scenario(monitored, c.home, c.scenario, allow_all, builtin_catalog()));
    auto b = tyche::testing::without_monitoring(run_scenario(plain, c.home, c.scenario, allow_all, builtin_catalog()));
    if (a != b) ++differing;
    compared_lines += static_cast<int>(a.size());
  }
  return check(differing == 0, std::to_string(kFuzzPairs) + " pairs, " + std::to_string(compared_lines) +
                                   " trace lines compared, " + std::to_string(differing) + " differing");
}

Outcome clustering() {
  std::mt19937_64 rng(20171101);
  std::uniform_real_distribution<double> u(1, 5);
  int instances = 0, mismatched = 0;
  while (instances < kClusterInstances) {
    std::size_t n = 3 + rng() % 28;
    std::vector<double> v(n);
    // Mix continuous values with survey-like means (multiples of 1/3) that tie.
    for (auto& x : v) x = instances % 2 ? u(rng) : std::round(u(rng) * 3) / 3;
    std::set<double> distinct(v.begin(), v.end());
    if (distinct.size() < 3) continue;
    ++instances;
    double got = kmeans3_values(v).objective;
    double best = tyche::testing::exhaustive_three_split(v);
    if (std::abs(got - best) > 1e-9 * std::max(1.0, best)) ++mismatched;
  }
  if (mismatched) return fail(std::to_string(mismatched) + "/" + std::to_string(instances) + " non-optimal");

  std::mt19937_64 prng(7);
  std::vector<double> planted;
  std::vector<int> truth;
  const double centers[] = {1.4, 3.0, 4.6};
  for (int i = 0; i < 150; ++i) {
    planted.push_back(centers[i % 3] + std::normal_distribution<double>(0, 0.2)(prng));
    truth.push_back(i % 3);
  }
  if (kmeans3_values(planted).labels != truth) return fail("planted clusters not recovered");

  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 3 + rng() % 100;
    std::vector<double> x(n), y(n), ax(n);
    double a = 0.1 + u(rng), b = u(rng) - 3;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = 0.5 * x[i] + u(rng);
      ax[i] = a * x[i] + b;
    }
    double r = pearson_r(x, y);
    worst = std::max({worst, std::abs(r - tyche::testing::pearson_direct(x, y)), std::abs(pearson_r(ax, y) - r)});
  }
  std::ostringstream d;
  d << instances << " instances optimal, planted recovered, max |r - oracle| " << worst;
  return check(worst <= kPearsonTolerance, d.str());
}

SurveyResponse synthetic(std::string id, const std::vector<int>& ratings) {
  SurveyResponse r;
  r.participant = std::move(id);
  r.group = Group::Uninformed;
  r.age = 30;
  r.household_size = 2;
  for (std::size_t i = 0; i < ratings.size(); ++i)
    r.ratings[{"item", "q" + std::to_string(100 + i), OperationKind::Attribute}] = ratings[i];
  return r;
}

Outcome calibration() {
  long random_total = 0, random_removed = 0, tracker_total = 0, tracker_kept = 0;
  for (int trial = 0; trial < kCalibrationTrials; ++trial) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(trial) + 1);
    std::vector<double> mu(kCalibrationItems);
    for (int i = 0; i < kCalibrationItems; ++i) mu[i] = 1.0 + 4.0 * i / (kCalibrationItems - 1);
    std::shuffle(mu.begin(), mu.end(), rng);
    std::vector<SurveyResponse> rs;
    std::normal_distribution<double> noise(0, kTrackerNoiseSd);
    for (int k = 0; k < kTrackersPerTrial; ++k) {
      std::vector<int> ratings(kCalibrationItems);
      for (int i = 0; i < kCalibrationItems; ++i)
        ratings[i] = static_cast<int>(std::clamp(std::lround(mu[i] + noise(rng)), 1L, 5L));
      rs.push_back(synthetic("track" + std::to_string(k), ratings));
    }
    for (int k = 0; k < kRandomRatersPerTrial; ++k) {
      std::vector<int> ratings(kCalibrationItems);
      for (auto& x : ratings) x = std::uniform_int_distribution<int>(1, 5)(rng);
      rs.push_back(synthetic("rand" + std::to_string(k), ratings));
    }
    auto res = filter_chi_square(rs);
    for (const auto& r : res.kept) {
      if (r.participant.starts_with("track")) ++tracker_kept;
    }
    for (const auto& r : res.removed)
      if (r.participant.starts_with("rand")) ++random_removed;
    random_total += kRandomRatersPerTrial;
    tracker_total += kTrackersPerTrial;
  }
  double removed = static_cast<double>(random_removed) / random_total;
  double kept = static_cast<double>(tracker_kept) / tracker_total;
  std::ostringstream d;
  d << "uniform-random removed " << 100 * removed << "%, mean-tracking kept " << 100 * kept << "%";
  return check(removed >= kMinRemovedRandom && kept >= kMinKeptTrackers, d.str());
}

Outcome published() {
  std::string dir;
  if (const char* env = std::getenv("TYCHE_PUBLISHED_DIR")) dir = env;
  else dir = data_path("published");
  auto survey = std::filesystem::path(dir) / "survey.csv";
  auto catalog_file = std::filesystem::path(dir) / "catalog.json";
  if (!std::filesystem::exists(survey) || !std::filesystem::exists(catalog_file))
    return {Outcome::Skip, "published survey dataset not present (" + dir + ")"};

  Catalog catalog = load_catalog(catalog_file.string());
  auto responses = load_survey(survey.string(), catalog);
  auto result = derive_risk_table(responses, catalog);
  const std::map<Group, std::array<int, 3>> counts{
      {Group::Expert, {62, 58, 26}}, {Group::Informed, {20, 57, 69}}, {Group::Uninformed, {19, 45, 82}}};
  std::ostringstream d;
  bool ok = true;
  for (const auto& g : result.groups) {
    if (!g.cluster) {
      ok = false;
      d << to_string(g.group) << " not clustered; ";
      continue;
    }
    d << to_string(g.group) << " " << g.cluster->counts[0] << "/" << g.cluster->counts[1] << "/"
      << g.cluster->counts[2] << "; ";
    ok &= g.cluster->counts == counts.at(g.group);
  }
  for (const auto& c : result.correlations) {
    if (c.a != Group::Expert) continue;
    double want = c.b == Group::Informed ? 0.75 : 0.60;
    d << "r(" << to_string(c.a) << "," << to_string(c.b) << ")=" << c.r << " ";
    ok &= std::abs(c.r - want) <= kPublishedRTolerance;
  }
  return check(ok, d.str());
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 case-study access sets", table4},
      {"2 high-risk reduction 60.0%", reduction},
      {"3 enforcement and golden trace", enforcement},
      {"4 missing annotation exits 2", compile_gate},
      {"5 complete mediation", mediation},
      {"6 transparency under allow-all", transparency},
      {"7 clustering and correlation oracles", clustering},
      {"8 chi-square filter calibration", calibration},
      {"9 published survey reproduction", published},
  };
  auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Fail ? "FAIL" : "SKIP";
    if (o.status == Outcome::Fail) ++failures;
    std::cout << tag << "  " << name << "  (" << o.detail << ")\n";
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (failures ? "FAILED" : "OK") << "  " << failures << " failing criteria, " << secs << " s\n";
  return failures ? 1 : 0;
}
