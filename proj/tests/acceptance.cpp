// Runs each acceptance criterion at its stated sample counts and tolerances,
// with any time limit part of the pass condition. Exit status 1 on a failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <future>
#include <string>
#include <vector>

#include "loopnet/checks.hpp"
#include "oracles.hpp"

using namespace loopnet;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Runs registered checks and folds their records into one outcome.
Outcome run_checks(const checks::ScenarioConfig& cfg, const std::vector<std::string>& names) {
  std::vector<std::future<std::vector<checks::Record>>> pending;
  for (const auto& name : names) {
    const auto* info = checks::find_check(name);
    if (!info) return {false, "unknown check " + name};
    pending.push_back(std::async(std::launch::async, [info, &cfg] { return checks::run_check(*info, cfg); }));
  }
  Outcome out;
  std::size_t total = 0, passed = 0;
  double worst_ratio = 0.0;
  std::string worst;
  for (auto& f : pending)
    for (const auto& r : f.get()) {
      ++total;
      if (r.pass) ++passed;
      const double ratio = r.tolerance > 0 ? r.max_residual / r.tolerance : r.max_residual;
      if (!(ratio <= worst_ratio)) {
        worst_ratio = ratio;
        char buf[160];
        std::snprintf(buf, sizeof buf, "worst %s %.2e / %.0e", r.check.c_str(), r.max_residual, r.tolerance);
        worst = buf;
      }
    }
  out.pass = total > 0 && passed == total;
  out.detail = "records " + std::to_string(passed) + "/" + std::to_string(total) + (worst.empty() ? "" : ", " + worst);
  return out;
}

/// Every word of length <= 8 over three generators with inverses plus a
/// degenerate letter is reduced on real letters and compared with the rewriting
/// oracle. Split by first letter.
Outcome exhaustive_words() {
  Rng rng(checks::ScenarioConfig{}.seed);
  const TestFunctionTag tag = default_tag();
  std::vector<Letter> gens;
  for (int i = 0; i < 3; ++i) gens.emplace_back(random_simplex(rng, 1, tag));
  const FourVector p = random_point(rng);
  const Letter degenerate(make_segment(p, p, tag));
  auto letter = [&](int k) { return k == 0 ? degenerate : (k > 0 ? gens[k - 1] : gens[-k - 1].inverse()); };
  std::vector<Letter> table;
  for (int k = -3; k <= 3; ++k) table.push_back(letter(k));

  // Depth-first over words, extending the letter word in place.
  constexpr int kMaxLen = 8;
  auto subtree = [&](int first) {
    std::size_t count = 0, bad = 0;
    std::vector<int> w{first};
    Word word;
    word.letters.reserve(kMaxLen);
    word.letters.push_back(table[first + 3]);
    std::function<void()> visit = [&] {
      ++count;
      const Word r = reduce(word);
      const std::vector<int> expected = oracle::rewrite_normal_form(w);
      bool same = r.size() == expected.size();
      for (std::size_t i = 0; same && i < expected.size(); ++i) same = r.letters[i] == table[expected[i] + 3];
      if (!same) ++bad;
      if (w.size() == kMaxLen) return;
      for (int k = -3; k <= 3; ++k) {
        w.push_back(k);
        word.letters.push_back(table[k + 3]);
        visit();
        word.letters.pop_back();
        w.pop_back();
      }
    };
    visit();
    return std::pair{count, bad};
  };
  std::vector<std::future<std::pair<std::size_t, std::size_t>>> parts;
  for (int k = -3; k <= 3; ++k) parts.push_back(std::async(std::launch::async, subtree, k));
  std::size_t count = 1, bad = reduce(Word{}).empty() ? 0 : 1;  // the empty word
  for (auto& f : parts) {
    const auto [c, b] = f.get();
    count += c;
    bad += b;
  }
  return {bad == 0, "exhaustive words " + std::to_string(count) + ", mismatches " + std::to_string(bad)};
}

struct Criterion {
  int id;
  std::string name;
  double limit_s;  // 0: no stated limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  checks::ScenarioConfig cfg;
  cfg.samples = {{"boundary_squared", 1000},     {"homotopy_identity", 1000},     {"word_reduction", 10000},
                 {"cochain_round_trip", 200},    {"rep_round_trip", 200},         {"connection_loop_restore", 100},
                 {"frame_change_gauge", 100},    {"gauge_axioms", 100},           {"stokes", 100},
                 {"cone_equivalence", 100},      {"primitivity", 100},            {"closedness", 100},
                 {"gauge_closed", 100},          {"gauge_open", 100},             {"headline", 200},
                 {"headline_frame_equivalence", 200}, {"mock_causality", 100},    {"mock_noncommutativity", 10}};
  cfg.poincare_samples = 50;
  cfg.max_rapidity = 2.0;
  cfg.quadrature_orders = {32};
  cfg.validate();

  auto checks_of = [&](std::vector<std::string> names) { return [&cfg, names] { return run_checks(cfg, names); }; };

  const std::vector<Criterion> criteria{
      {1, "exact chain algebra", 5, checks_of({"boundary_squared", "homotopy_identity"})},
      {2, "word reduction", 10,
       [&] {
         Outcome a = exhaustive_words();
         Outcome b = run_checks(cfg, {"word_reduction"});
         return Outcome{a.pass && b.pass, a.detail + "; " + b.detail};
       }},
      {3, "cochain/representation round trips", 60, checks_of({"cochain_round_trip", "rep_round_trip"})},
      {4, "connection correspondences", 30, checks_of({"connection_loop_restore", "frame_change_gauge", "gauge_axioms"})},
      {5, "Stokes identity", 60, checks_of({"stokes"})},
      {6, "cone equivalence", 0, checks_of({"cone_equivalence"})},
      {7, "primitivity and closedness", 0, checks_of({"primitivity", "closedness"})},
      {8, "covariance with moving pole", 0, checks_of({"covariance"})},
      {9, "gauge invariance", 0, checks_of({"gauge_closed", "gauge_open"})},
      {10, "potential connection equivalence", 0, checks_of({"headline", "headline_frame_equivalence"})},
      {11, "mock causality", 0, checks_of({"mock_causality", "mock_noncommutativity"})},
      {12, "quadrature convergence", 0, checks_of({"quadrature_convergence"})},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_s <= 0 || secs < c.limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    char timing[64];
    if (c.limit_s > 0)
      std::snprintf(timing, sizeof timing, "%.2f s < %.0f s", secs, c.limit_s);
    else
      std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::printf("criterion %2d  %-4s  %-36s  %s  (%s)\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(),
                timing);
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
