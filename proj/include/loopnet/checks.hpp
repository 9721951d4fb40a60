#pragma once

// Check registry and report format for the batch runner.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "loopnet/emfield.hpp"
#include "loopnet/holonomy.hpp"
#include "loopnet/io.hpp"
#include "loopnet/loopgroup.hpp"
#include "loopnet/mock_lattice.hpp"
#include "loopnet/scenario.hpp"
#include "loopnet/simplex.hpp"

namespace loopnet::checks {

using io::Json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerance for checks whose residual is a count of failed exact identities.
inline constexpr double kCountTolerance = 0.5;

struct Record {
  std::string check;
  Json params = Json::object();
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;

  friend bool operator==(const Record& a, const Record& b) {
    const bool same_residual = a.max_residual == b.max_residual ||
                               (std::isnan(a.max_residual) && std::isnan(b.max_residual));
    return a.check == b.check && a.params == b.params && a.samples == b.samples && same_residual &&
           a.tolerance == b.tolerance && a.pass == b.pass;
  }
};

inline Record make_record(std::string check, Json params, std::size_t samples, double residual, double tolerance) {
  return {std::move(check), std::move(params), samples, residual, tolerance, residual <= tolerance};
}

struct Summary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  friend bool operator==(const Summary&, const Summary&) = default;
};

struct Report {
  std::vector<Record> records;

  Summary summary() const {
    Summary s;
    s.total = records.size();
    for (const auto& r : records) (r.pass ? s.passed : s.failed) += 1;
    return s;
  }
  friend bool operator==(const Report&, const Report&) = default;
};

enum class Format { Json, Text };

inline Json to_json(const Report& report) {
  Json out;
  Json records = Json::array();
  for (const auto& r : report.records) {
    Json j;
    j["check"] = r.check;
    j["params"] = r.params;
    j["samples"] = r.samples;
    j["max_residual"] = io::encode_number(r.max_residual);
    j["tolerance"] = io::encode_number(r.tolerance);
    j["pass"] = r.pass;
    records.push_back(std::move(j));
  }
  out["records"] = std::move(records);
  const Summary s = report.summary();
  out["summary"] = Json{{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}};
  return out;
}

inline std::string emit(const Report& report, Format format) {
  if (format == Format::Json) return to_json(report).dump();
  std::ostringstream os;
  os << std::left;
  os.width(34);
  os << "check";
  os << "  samples  max_residual  tolerance  result  params\n";
  char buf[64];
  for (const auto& r : report.records) {
    os.width(34);
    os << r.check;
    std::snprintf(buf, sizeof buf, "  %7zu  %12.3e  %9.2e  %-6s", r.samples, r.max_residual, r.tolerance,
                  r.pass ? "PASS" : "FAIL");
    os << buf << "  " << r.params.dump() << '\n';
  }
  const Summary s = report.summary();
  os << "total " << s.total << "  passed " << s.passed << "  failed " << s.failed << '\n';
  return os.str();
}

/// Inverse of the JSON emitter; also checks pass flags and the summary.
inline Report parse_report(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw io::FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  io::require(j.is_object() && j.contains("records") && j.at("records").is_array() && j.contains("summary"),
              "reports need 'records' and 'summary'");
  Report report;
  try {
    for (const auto& r : j.at("records")) {
      Record rec;
      rec.check = r.at("check").get<std::string>();
      rec.params = r.at("params");
      rec.samples = r.at("samples").get<std::size_t>();
      rec.max_residual = io::decode_number(r.at("max_residual"));
      rec.tolerance = io::decode_number(r.at("tolerance"));
      rec.pass = r.at("pass").get<bool>();
      io::require(rec.pass == (rec.max_residual <= rec.tolerance), "record '" + rec.check + "' has an inconsistent pass flag");
      report.records.push_back(std::move(rec));
    }
    const auto& s = j.at("summary");
    const Summary expected{s.at("total").get<std::size_t>(), s.at("passed").get<std::size_t>(),
                           s.at("failed").get<std::size_t>()};
    io::require(expected == report.summary(), "summary disagrees with the records");
  } catch (const Json::exception& e) {
    throw io::FormatError(std::string("malformed report: ") + e.what());
  }
  return report;
}

struct ModelEntry {
  std::string name;
  FieldModel model;
};

struct ScenarioConfig {
  std::uint64_t seed = 20240917;
  std::vector<int> quadrature_orders{32};
  Json field_models = Json::array({Json{{"kind", "random_constant"}, {"name", "constant"}},
                                   Json{{"kind", "random_linear"}, {"name", "linear"}},
                                   Json{{"kind", "random_plane_wave"}, {"name", "plane_wave"}}});
  std::vector<TestFunctionTag> tags{default_tag()};
  int poincare_samples = 50;
  double max_rapidity = 2.0;
  double simplex_scale = 1.0;
  double mock_coupling = 4.0;
  std::optional<std::vector<std::string>> checks;
  std::map<std::string, double> tolerances;
  std::map<std::string, int> samples;

  static ScenarioConfig from_json(const Json& j);
  Json to_json() const;
  void validate() const;

  /// Field models with random kinds drawn from the seed.
  std::vector<ModelEntry> models() const {
    std::vector<ModelEntry> out;
    Rng rng(derive_seed(seed, "field_models"));
    std::size_t index = 0;
    for (const auto& entry : field_models) {
      const auto kind = entry.value("kind", std::string());
      const auto name = entry.value("name", kind + "_" + std::to_string(index++));
      const double scale = entry.value("scale", 1.0);
      if (kind == "random_constant") {
        out.push_back({name, FieldModel::constant_field(random_antisymmetric(rng, scale))});
      } else if (kind == "random_linear") {
        out.push_back({name, random_linear_field(rng, scale)});
      } else if (kind == "random_plane_wave") {
        FieldModel m = random_plane_wave(rng, entry.value("k_scale", 2.0));
        m.amplitude *= scale;
        out.push_back({name, m});
      } else {
        try {
          out.push_back({name, io::decode_model(entry)});
        } catch (const io::FormatError& e) {
          throw ConfigError(e.what());
        }
      }
    }
    return out;
  }
};

/// Per-check view of the config with its own random stream.
struct Context {
  const ScenarioConfig& cfg;
  std::string check;
  Rng rng;

  int samples(int fallback) const {
    const auto it = cfg.samples.find(check);
    return it == cfg.samples.end() ? fallback : it->second;
  }
  double tolerance(double fallback) const {
    const auto it = cfg.tolerances.find(check);
    return it == cfg.tolerances.end() ? fallback : it->second;
  }
  /// First Gaussian tag of the config (plane waves need one).
  TestFunctionTag field_tag() const {
    for (const auto& t : cfg.tags)
      if (t.kind == TestFunctionKind::Gaussian) return t;
    return default_tag();
  }
  Record record(Json params, std::size_t n, double residual, double fallback_tol) const {
    return make_record(check, std::move(params), n, residual, tolerance(fallback_tol));
  }
};

using CheckFn = std::function<std::vector<Record>(Context&)>;

struct CheckInfo {
  std::string name;
  std::string suite;
  std::string description;
  CheckFn run;
};

namespace detail {

inline bool compatible(const FieldModel& m, const TestFunctionTag& t) {
  try {
    SmearedField field(m, t);
    return true;
  } catch (const FieldError&) {
    return false;
  }
}

inline bool has_wave(const FieldModel& m) {
  if (m.kind == FieldKind::PlaneWave) return true;
  for (const auto& p : m.parts)
    if (has_wave(p)) return true;
  return false;
}

/// Default field tolerance: closed-form models are tighter than quadrature ones.
inline double field_tolerance(const FieldModel& m) { return has_wave(m) ? 1e-8 : 1e-10; }

inline double max_vertex_gap(const Simplex& a, const Simplex& b) {
  if (a.vertices.size() != b.vertices.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.vertices.size(); ++i) worst = std::max(worst, euclidean_norm(a[i] - b[i]));
  return worst;
}

/// Each (model, compatible tag, order) combination with its params.
template <class F>
void for_each_field_case(Context& ctx, F&& f) {
  for (const auto& entry : ctx.cfg.models())
    for (const auto& tag : ctx.cfg.tags) {
      if (!compatible(entry.model, tag)) continue;
      for (const int order : ctx.cfg.quadrature_orders) {
        const Json params{{"model", entry.name}, {"tag", tag.id}, {"order", order}};
        f(entry, tag, QuadratureConfig{order}, params);
      }
    }
}

/// Superposition of every configured model that the tag can smear.
inline FieldModel combined_model(const Context& ctx, const TestFunctionTag& tag) {
  std::vector<FieldModel> parts;
  for (const auto& entry : ctx.cfg.models())
    if (compatible(entry.model, tag)) parts.push_back(entry.model);
  return FieldModel::superposition(std::move(parts));
}

struct Cochains {
  std::string name;
  Cochain w;
};

inline std::vector<Cochains> test_cochains(const Context& ctx) {
  const QuadratureConfig q{ctx.cfg.quadrature_orders.front()};
  return {{"em", em_cochain(combined_model(ctx, ctx.field_tag()), q)},
          {"mock", mock_lattice_cochain(DoubleCone(FourVector{}, 1.0), 1.0, 2, {ctx.cfg.mock_coupling})}};
}

inline Path sample_loop(Context& ctx, const TestFunctionTag& tag) {
  const int len = static_cast<int>(uniform_int(ctx.rng, 1, 5));
  const FourVector base = random_point(ctx.rng, ctx.cfg.simplex_scale);
  if (len == 1) return Path(base, base, tag, Word{{Letter(make_segment(base, base, tag))}});
  return random_loop(ctx.rng, base, tag, len, ctx.cfg.simplex_scale);
}

inline FourVector random_offset(Context& ctx) { return random_point(ctx.rng, 0.5 * ctx.cfg.simplex_scale); }

/// Sound sufficient test that every point of the eps-inflated hull of a is
/// spacelike to every point of that of b: the spatial gap between bounding
/// boxes exceeds the largest time difference.
inline bool hulls_causally_disjoint(const Simplex& a, const Simplex& b) {
  auto box = [](const Simplex& s) {
    std::array<double, 4> lo{}, hi{};
    const double e = s.tag.effective_radius();
    for (int mu = 0; mu < 4; ++mu) {
      lo[mu] = hi[mu] = s[0][mu];
      for (const auto& v : s.vertices) {
        lo[mu] = std::min(lo[mu], v[mu]);
        hi[mu] = std::max(hi[mu], v[mu]);
      }
      lo[mu] -= e;
      hi[mu] += e;
    }
    return std::pair{lo, hi};
  };
  const auto [alo, ahi] = box(a);
  const auto [blo, bhi] = box(b);
  double gap2 = 0.0;
  for (int i = 1; i < 4; ++i) {
    const double g = std::max({0.0, blo[i] - ahi[i], alo[i] - bhi[i]});
    gap2 += g * g;
  }
  const double dt = std::max(bhi[0] - alo[0], ahi[0] - blo[0]);
  return std::sqrt(gap2) > dt;
}

/// Small triangles in two different cells of the 2x2x2 mock lattice on
/// [-1,1]^3, short in time, so their supports are causally disjoint.
inline std::pair<Simplex, Simplex> causal_mock_pair(Context& ctx, const MockLattice& lattice) {
  const TestFunctionTag tag = default_tag(TestFunctionKind::Gaussian, 0.01);
  for (;;) {
    std::array<FourVector, 2> centers;
    for (auto& c : centers) {
      c = {0.0, 0.0, 0.0, 0.0};
      for (int i = 1; i < 4; ++i) c[i] = uniform_int(ctx.rng, 0, 1) == 0 ? -0.5 : 0.5;
    }
    if (centers[0] == centers[1]) continue;
    auto make = [&](const FourVector& c) {
      std::vector<FourVector> v;
      for (int k = 0; k < 3; ++k) {
        FourVector x = c;
        x[0] = uniform(ctx.rng, -0.05, 0.05);
        for (int i = 1; i < 4; ++i) x[i] += uniform(ctx.rng, -0.25, 0.25);
        v.push_back(x);
      }
      return Simplex(std::move(v), tag);
    };
    Simplex a = make(centers[0]);
    Simplex b = make(centers[1]);
    const auto ca = lattice.covered_cells(a);
    const auto cb = lattice.covered_cells(b);
    bool shared = false;
    for (auto x : ca) shared = shared || std::find(cb.begin(), cb.end(), x) != cb.end();
    if (!shared && hulls_causally_disjoint(a, b)) return {a, b};
  }
}

/// Triangles in the x^0-x^1 and x^2-x^3 planes inside one cell: they load the
/// X and Z generators of that cell and cannot commute.
inline std::pair<Simplex, Simplex> overlapping_mock_pair(Context& ctx) {
  const TestFunctionTag tag = default_tag(TestFunctionKind::Gaussian, 0.01);
  FourVector c{uniform(ctx.rng, -0.5, 0.5), 0.0, 0.0, 0.0};
  for (int i = 1; i < 4; ++i) c[i] = (uniform_int(ctx.rng, 0, 1) == 0 ? -0.5 : 0.5) + uniform(ctx.rng, -0.1, 0.1);
  const double side = uniform(ctx.rng, 0.35, 0.4);
  const FourVector p = c - FourVector{0.0, 0.2, 0.2, 0.2};
  const Simplex tx = make_triangle(p, p + FourVector{side, 0, 0, 0}, p + FourVector{0, side, 0, 0}, tag);
  const Simplex yz = make_triangle(p, p + FourVector{0, 0, side, 0}, p + FourVector{0, 0, 0, side}, tag);
  return {tx, yz};
}

// ---------------------------------------------------------------- simplex

inline std::vector<Record> boundary_squared(Context& ctx) {
  const int n = ctx.samples(1000);
  std::size_t failures = 0;
  for (int i = 0; i < n; ++i) {
    const auto chain = random_exact_chain(ctx.rng, static_cast<int>(uniform_int(ctx.rng, 2, 3)),
                                          static_cast<int>(uniform_int(ctx.rng, 1, 6)));
    if (!boundary(boundary(chain)).empty()) ++failures;
  }
  return {ctx.record({{"arithmetic", "rational"}}, n, static_cast<double>(failures), kCountTolerance)};
}

inline std::vector<Record> homotopy_identity(Context& ctx) {
  const int n = ctx.samples(1000);
  std::size_t failures = 0, tried = 0;
  for (int i = 0; i < n; ++i) {
    const auto chain = random_exact_chain(ctx.rng, static_cast<int>(uniform_int(ctx.rng, 1, 2)),
                                          static_cast<int>(uniform_int(ctx.rng, 1, 6)));
    const auto z = random_exact_point(ctx.rng);
    if (chain.empty()) continue;
    ++tried;
    if (!homotopy_identity_check(z, chain)) ++failures;
  }
  return {ctx.record({{"arithmetic", "rational"}}, tried, static_cast<double>(failures), kCountTolerance)};
}

inline std::vector<Record> opposite_boundary(Context& ctx) {
  const int n = ctx.samples(200);
  std::size_t failures = 0;
  for (int i = 0; i < n; ++i) {
    const int dim = static_cast<int>(uniform_int(ctx.rng, 1, 2));
    const auto chain = random_exact_chain(ctx.rng, dim, 1);
    if (chain.empty()) continue;
    const auto& s = chain.terms().begin()->first;
    if (!oriented(boundary(opposite(s)) + boundary(s)).empty()) ++failures;
  }
  return {ctx.record({{"arithmetic", "rational"}}, n, static_cast<double>(failures), kCountTolerance)};
}

inline std::vector<Record> poincare_equivariance(Context& ctx) {
  const int n = ctx.samples(100);
  const TestFunctionTag tag = ctx.field_tag();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Simplex s = random_simplex(ctx.rng, 2, tag, ctx.cfg.simplex_scale);
    const FourVector z = random_point(ctx.rng, ctx.cfg.simplex_scale);
    const PoincareElement p = random_poincare(ctx.rng, ctx.cfg.max_rapidity);
    const Simplex ps = poincare_act(p, s);
    for (int k = 0; k <= 2; ++k) worst = std::max(worst, max_vertex_gap(face(ps, k), poincare_act(p, face(s, k))));
    worst = std::max(worst, max_vertex_gap(cone(p.apply(z), ps), poincare_act(p, cone(z, s))));
    if (!(face(ps, 0).tag == poincare_act(p, face(s, 0)).tag)) worst = std::numeric_limits<double>::infinity();
    const SupportBall moved = support_ball(ps);
    const SupportBall orig = support_ball(s);
    for (std::size_t k = 0; k < orig.hull.size(); ++k)
      worst = std::max(worst, euclidean_norm(moved.hull[k] - p.apply(orig.hull[k])));
  }
  return {ctx.record(Json::object(), n, worst, 1e-12)};
}

inline std::vector<Record> degenerate_form(Context& ctx) {
  const int n = ctx.samples(100);
  const TestFunctionTag tag = ctx.field_tag();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const FourVector a = random_point(ctx.rng, ctx.cfg.simplex_scale);
    const FourVector b = random_point(ctx.rng, ctx.cfg.simplex_scale);
    const SimplexForm form = simplex_form(make_triangle(a, b, b, tag), 8);
    const int idx[2] = {static_cast<int>(uniform_int(ctx.rng, 0, 3)), static_cast<int>(uniform_int(ctx.rng, 0, 3))};
    worst = std::max(worst, std::abs(form(a + random_point(ctx.rng, 0.1), idx)));
  }
  return {ctx.record(Json::object(), n, worst, 1e-300)};
}

// ---------------------------------------------------------------- loopgroup

inline std::vector<Record> word_reduction(Context& ctx) {
  const int n = ctx.samples(10000);
  const TestFunctionTag tag = ctx.field_tag();
  std::vector<Letter> alphabet;
  for (int i = 0; i < 3; ++i) alphabet.emplace_back(random_simplex(ctx.rng, 1, tag));
  const FourVector p = random_point(ctx.rng);
  const Letter degenerate(make_segment(p, p, tag));
  std::size_t failures = 0;
  for (int i = 0; i < n; ++i) {
    Word w;
    const auto len = uniform_int(ctx.rng, 0, 8);
    for (std::int64_t k = 0; k < len; ++k) {
      const auto pick = uniform_int(ctx.rng, 0, 6);
      w.letters.push_back(pick == 6 ? degenerate : (pick < 3 ? alphabet[pick] : alphabet[pick - 3].inverse()));
    }
    const Word r = reduce(w);
    bool ok = reduce(w * w.inverse()).empty() && reduce(r) == r && reduce(r * r.inverse()).empty();
    for (std::size_t k = 0; k < r.size(); ++k) {
      ok = ok && !r.letters[k].degenerate();
      if (k + 1 < r.size()) ok = ok && !cancels(r.letters[k], r.letters[k + 1]);
    }
    if (!ok) ++failures;
  }
  return {ctx.record({{"alphabet", 7}}, n, static_cast<double>(failures), kCountTolerance)};
}

inline std::vector<Record> path_boundary_orientation(Context& ctx) {
  const int n = ctx.samples(200);
  const TestFunctionTag tag = ctx.field_tag();
  std::size_t failures = 0;
  for (int i = 0; i < n; ++i) {
    const Simplex c = random_simplex(ctx.rng, 2, tag, ctx.cfg.simplex_scale);
    const Word lhs = reduce(path_boundary(opposite(c)).word());
    const Word rhs = reduce(path_boundary(c).word().inverse());
    if (!(lhs == rhs)) ++failures;
  }
  return {ctx.record(Json::object(), n, static_cast<double>(failures), kCountTolerance)};
}

inline std::vector<Record> frame_covariance(Context& ctx) {
  const int n = ctx.samples(20);
  const TestFunctionTag tag = ctx.field_tag();
  std::vector<std::pair<Simplex, Simplex>> pairs;
  for (int i = 0; i < n; ++i)
    pairs.emplace_back(make_point(random_point(ctx.rng), tag), make_point(random_point(ctx.rng), tag));
  std::vector<PoincareElement> group;
  for (int i = 0; i < ctx.cfg.poincare_samples; ++i) group.push_back(random_poincare(ctx.rng, ctx.cfg.max_rapidity));
  std::vector<Record> out;
  for (const auto& frames : {PathFrameSystem::euclidean(), PathFrameSystem::detour(random_offset(ctx)),
                             PathFrameSystem::overshoot(0.5)}) {
    out.push_back(ctx.record({{"frame", frames.name}}, pairs.size() * group.size(),
                             frame_covariance_defect(frames, pairs, group), 1e-10));
  }
  return out;
}

inline std::vector<Record> locality_covariance(Context& ctx) {
  const int n = ctx.samples(200);
  std::size_t mismatches = 0;
  for (int i = 0; i < n; ++i) {
    const DoubleCone o(random_point(ctx.rng), uniform(ctx.rng, 1.0, 2.0),
                       random_poincare(ctx.rng, ctx.cfg.max_rapidity));
    TestFunctionTag tag = default_tag(TestFunctionKind::Bump, uniform(ctx.rng, 0.01, 0.2));
    tag.lorentz = random_lorentz(ctx.rng, 1.0);
    const FourVector base = o.frame.apply(o.center + random_point(ctx.rng, 0.3 * o.radius));
    const Word w = random_loop(ctx.rng, base, tag, 3, 0.3 * o.radius).word();
    const PoincareElement p = random_poincare(ctx.rng, ctx.cfg.max_rapidity);
    const Tristate before = is_local(w, o);
    const Tristate after = is_local(poincare_act_word(p, w), o.transformed(p));
    if (before != after) ++mismatches;
  }
  return {ctx.record(Json::object(), n, static_cast<double>(mismatches), kCountTolerance)};
}

// ---------------------------------------------------------------- holonomy

inline std::vector<Record> cochain_round_trip(Context& ctx) {
  const int n = ctx.samples(200);
  const TestFunctionTag tag = ctx.field_tag();
  std::vector<Record> out;
  for (const auto& [name, w] : test_cochains(ctx)) {
    const Cochain back = cochain_from_rep(rep_from_cochain(w));
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const Simplex c = random_simplex(ctx.rng, 2, tag, ctx.cfg.simplex_scale);
      worst = std::max(worst, distance(back(c), w(c)));
    }
    out.push_back(ctx.record({{"cochain", name}, {"value_dim", w.value_dim}}, n, worst, 1e-12));
  }
  return out;
}

inline std::vector<Record> rep_round_trip(Context& ctx) {
  const int n = ctx.samples(200);
  const TestFunctionTag tag = ctx.field_tag();
  std::vector<Record> out;
  for (const auto& [name, w] : test_cochains(ctx)) {
    const LoopRepresentation lambda = rep_from_cochain(w);
    const LoopRepresentation back = rep_from_cochain(cochain_from_rep(lambda));
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const Path p = sample_loop(ctx, tag);
      worst = std::max(worst, distance(back(p), lambda(p)));
      worst = std::max(worst, distance(lambda(p.reduced()), lambda(p)));
    }
    out.push_back(ctx.record({{"cochain", name}, {"value_dim", w.value_dim}}, n, worst, 1e-12));
  }
  return out;
}

inline std::vector<Record> connection_loop_restore(Context& ctx) {
  const int n = ctx.samples(100);
  const TestFunctionTag tag = ctx.field_tag();
  std::vector<Record> out;
  for (const auto& [name, w] : test_cochains(ctx)) {
    const LoopRepresentation lambda = rep_from_cochain(w);
    for (const auto& frames : {PathFrameSystem::euclidean(), PathFrameSystem::detour(random_offset(ctx))}) {
      const Connection u = connection_from_rep(lambda, frames);
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        const Path p = sample_loop(ctx, tag);
        worst = std::max(worst, distance(u(p.source_point(), p), lambda(p)));
      }
      out.push_back(ctx.record({{"cochain", name}, {"frame", frames.name}}, n, worst, 1e-12));
    }
  }
  return out;
}

inline std::vector<Record> frame_change(Context& ctx) {
  const int n = ctx.samples(100);
  const TestFunctionTag tag = ctx.field_tag();
  std::vector<Record> out;
  for (const auto& [name, w] : test_cochains(ctx)) {
    const LoopRepresentation lambda = rep_from_cochain(w);
    const PathFrameSystem p_frames = PathFrameSystem::euclidean();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const PathFrameSystem q_frames = PathFrameSystem::detour(random_offset(ctx));
      const GaugeFamily g = frame_change_gauge(lambda, p_frames, q_frames);
      const Connection gauged = apply_gauge(connection_from_rep(lambda, p_frames), g);
      const Connection target = connection_from_rep(lambda, q_frames);
      const Simplex pole = make_point(random_point(ctx.rng, ctx.cfg.simplex_scale), tag);
      const Simplex b = random_simplex(ctx.rng, 1, tag, ctx.cfg.simplex_scale);
      worst = std::max(worst, distance(gauged(pole, b), target(pole, b)));
      worst = std::max(worst, distance(g(pole, pole), UnitaryValue::identity()));
    }
    out.push_back(ctx.record({{"cochain", name}, {"from", "euclidean"}, {"to", "detour"}}, n, worst, 1e-12));
  }
  return out;
}

inline std::vector<Record> gauge_axioms(Context& ctx) {
  const int n = ctx.samples(100);
  const TestFunctionTag tag = ctx.field_tag();
  std::vector<std::pair<Simplex, Simplex>> samples;
  std::vector<Path> loops;
  for (int i = 0; i < n; ++i) {
    samples.emplace_back(make_point(random_point(ctx.rng, ctx.cfg.simplex_scale), tag),
                         random_simplex(ctx.rng, 1, tag, ctx.cfg.simplex_scale));
    loops.push_back(sample_loop(ctx, tag));
  }
  std::vector<Record> out;
  auto measure = [&](const Json& params, const Connection& u, const GaugeFamily& g) {
    const Connection ug = apply_gauge(u, g);
    double worst = connection_axiom_defect(ug, samples);
    for (const auto& p : loops) {
      const Simplex a = p.source_point();
      worst = std::max(worst, distance(ug(a, p), g(a, a) * u(a, p) * g(a, a).adjoint()));
    }
    out.push_back(ctx.record(params, samples.size() + loops.size(), worst, 1e-12));
  };
  for (const auto& [name, w] : test_cochains(ctx)) {
    const LoopRepresentation lambda = rep_from_cochain(w);
    const PathFrameSystem e = PathFrameSystem::euclidean();
    const PathFrameSystem d = PathFrameSystem::detour(random_offset(ctx));
    measure({{"cochain", name}, {"gauge", "frame_change"}}, connection_from_rep(lambda, e),
            frame_change_gauge(lambda, e, d));
  }
  const QuadratureConfig q{ctx.cfg.quadrature_orders.front()};
  measure({{"cochain", "pot"}, {"gauge", "lift"}}, pot_connection(combined_model(ctx, tag), q),
          gauge_lift(GaugeFunctionFamily::polynomial({0.3, -0.5, 0.25})));
  return out;
}

inline std::vector<Record> mock_causality(Context& ctx) {
  const int n = ctx.samples(100);
  const MockLattice lattice(DoubleCone(FourVector{}, 1.0), 1.0, 2, {ctx.cfg.mock_coupling});
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = causal_mock_pair(ctx, lattice);
    worst = std::max(worst, commutator_norm(lattice.value(a), lattice.value(b)));
  }
  return {ctx.record({{"cells", lattice.cell_count()}}, n, worst, 1e-14)};
}

/// Negative control: residual 0.1 / min ||[w(c), w(c′)]||, so passing means
/// every engineered pair fails to commute by at least 0.1.
inline std::vector<Record> mock_noncommutativity(Context& ctx) {
  const int n = ctx.samples(10);
  const MockLattice lattice(DoubleCone(FourVector{}, 1.0), 1.0, 2, {ctx.cfg.mock_coupling});
  double smallest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = overlapping_mock_pair(ctx);
    smallest = std::min(smallest, commutator_norm(lattice.value(a), lattice.value(b)));
  }
  return {ctx.record({{"threshold", 0.1}, {"min_commutator", smallest}}, n, 0.1 / smallest, 1.0)};
}

inline std::vector<Record> cochain_properties(Context& ctx) {
  const int n = ctx.samples(50);
  const TestFunctionTag tag = ctx.field_tag();
  const MockLattice lattice(DoubleCone(FourVector{}, 1.0), 1.0, 2, {ctx.cfg.mock_coupling});
  std::vector<Record> out;
  for (const auto& [name, w] : test_cochains(ctx)) {
    CochainSamples s;
    for (int i = 0; i < n; ++i) s.simplices.push_back(random_simplex(ctx.rng, 2, tag, ctx.cfg.simplex_scale));
    for (int i = 0; i < std::min(n, 20); ++i) s.causal_pairs.push_back(causal_mock_pair(ctx, lattice));
    for (int i = 0; i < 5; ++i) {
      if (name == "mock") {
        FourVector shift{uniform(ctx.rng, -1.0, 1.0), 0.0, 0.0, 0.0};
        for (int k = 1; k < 4; ++k) shift[k] = static_cast<double>(uniform_int(ctx.rng, -2, 2));
        s.group.push_back(PoincareElement::translation_by(shift));
      } else {
        s.group.push_back(random_poincare(ctx.rng, ctx.cfg.max_rapidity));
      }
    }
    const CochainVerification v = verify_cochain(w, s);
    out.push_back(ctx.record({{"cochain", name},
                              {"group", w.covariance.group},
                              {"adjoint", v.adjoint_violation},
                              {"degeneracy", v.degeneracy_violation},
                              {"causality", v.causality_violation},
                              {"covariance", v.covariance_violation}},
                             s.simplices.size(), v.max_violation(), name == "mock" ? 1e-12 : 1e-10));
  }
  return out;
}

// ---------------------------------------------------------------- emfield

inline std::vector<Record> stokes(Context& ctx) {
  const int n = ctx.samples(100);
  std::vector<Record> out;
  for_each_field_case(ctx, [&](const ModelEntry& e, const TestFunctionTag& tag, const QuadratureConfig& q, Json params) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const Simplex s = random_simplex(ctx.rng, 2, tag, ctx.cfg.simplex_scale);
      worst = std::max(worst, stokes_check(e.model, random_point(ctx.rng, ctx.cfg.simplex_scale), s, q));
    }
    out.push_back(ctx.record(std::move(params), n, worst, field_tolerance(e.model)));
  });
  return out;
}

inline std::vector<Record> cone_equivalence(Context& ctx) {
  const int n = ctx.samples(100);
  std::vector<Record> out;
  for_each_field_case(ctx, [&](const ModelEntry& e, const TestFunctionTag& tag, const QuadratureConfig& q, Json params) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const Simplex g = random_simplex(ctx.rng, 1, tag, ctx.cfg.simplex_scale);
      worst = std::max(worst, cone_check(e.model, random_point(ctx.rng, ctx.cfg.simplex_scale), g, q));
    }
    out.push_back(ctx.record(std::move(params), n, worst, field_tolerance(e.model)));
  });
  return out;
}

inline std::vector<Record> boundary_independence(Context& ctx) {
  const int n = ctx.samples(50);
  std::vector<Record> out;
  for_each_field_case(ctx, [&](const ModelEntry& e, const TestFunctionTag& tag, const QuadratureConfig& q, Json params) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const Simplex s = random_simplex(ctx.rng, 2, tag, ctx.cfg.simplex_scale);
      const FourVector z = random_point(ctx.rng, ctx.cfg.simplex_scale);
      worst = std::max(worst, boundary_independence_check(e.model, Chain<double>(s), cone(z, boundary(s)), q));
    }
    out.push_back(ctx.record(std::move(params), n, worst, field_tolerance(e.model)));
  });
  return out;
}

inline std::vector<Record> primitivity(Context& ctx) {
  const int n = ctx.samples(100);
  std::vector<Record> out;
  for_each_field_case(ctx, [&](const ModelEntry& e, const TestFunctionTag& tag, const QuadratureConfig& q, Json params) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const FourVector z = random_point(ctx.rng, ctx.cfg.simplex_scale);
      const FourVector y = random_point(ctx.rng, ctx.cfg.simplex_scale);
      worst = std::max(worst, primitivity_defect(e.model, tag, z, y, q));
    }
    params["step"] = 1e-4;
    out.push_back(ctx.record(std::move(params), n, worst, 1e-6));
  });
  return out;
}

inline std::vector<Record> closedness(Context& ctx) {
  const int n = ctx.samples(100);
  std::vector<Record> out;
  for (const auto& e : ctx.cfg.models())
    for (const auto& tag : ctx.cfg.tags) {
      if (!compatible(e.model, tag)) continue;
      double worst = 0.0;
      for (int i = 0; i < n; ++i) worst = std::max(worst, closedness_defect(e.model, tag, random_point(ctx.rng, ctx.cfg.simplex_scale)));
      out.push_back(ctx.record({{"model", e.name}, {"tag", tag.id}, {"step", 1e-4}}, n, worst, 1e-6));
    }
  return out;
}

inline std::vector<Record> covariance(Context& ctx) {
  const int n = ctx.samples(ctx.cfg.poincare_samples);
  std::vector<Record> out;
  for_each_field_case(ctx, [&](const ModelEntry& e, const TestFunctionTag& tag, const QuadratureConfig& q, Json params) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const PoincareElement p = random_poincare(ctx.rng, ctx.cfg.max_rapidity);
      const FourVector z = random_point(ctx.rng, ctx.cfg.simplex_scale);
      const FourVector y = random_point(ctx.rng, ctx.cfg.simplex_scale);
      worst = std::max(worst, covariance_check(e.model, tag, z, y, p, q));
    }
    params["max_rapidity"] = ctx.cfg.max_rapidity;
    out.push_back(ctx.record(std::move(params), n, worst, 1e-8));
  });
  return out;
}

inline std::vector<GaugeFunctionFamily> gauge_families() {
  return {GaugeFunctionFamily::polynomial({0.0, 1.0}, "linear"),
          GaugeFunctionFamily::polynomial({0.2, -0.4, 0.3}, "quadratic"), GaugeFunctionFamily::sine(0.7)};
}

inline Curve random_curve(Context& ctx, bool closed) {
  Curve c;
  const auto n = uniform_int(ctx.rng, 2, 4);
  for (std::int64_t i = 0; i < n; ++i) c.points.push_back(random_point(ctx.rng, ctx.cfg.simplex_scale));
  if (closed) c.points.push_back(c.points.front());
  return c;
}

inline std::vector<Record> gauge_closed(Context& ctx) {
  const int n = ctx.samples(100);
  const TestFunctionTag tag = ctx.field_tag();
  const FieldModel model = combined_model(ctx, tag);
  const QuadratureConfig q{ctx.cfg.quadrature_orders.front()};
  std::vector<Record> out;
  for (const auto& g : gauge_families()) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const GaugeShift s = gauge_shift(model, tag, g, random_point(ctx.rng, ctx.cfg.simplex_scale), random_curve(ctx, true), q);
      worst = std::max(worst, std::abs(s.shifted - s.unshifted));
    }
    out.push_back(ctx.record({{"gauge", g.name}, {"order", q.order}}, n, worst, 1e-9));
  }
  return out;
}

inline std::vector<Record> gauge_open(Context& ctx) {
  const int n = ctx.samples(100);
  const TestFunctionTag tag = ctx.field_tag();
  const FieldModel model = combined_model(ctx, tag);
  const QuadratureConfig q{ctx.cfg.quadrature_orders.front()};
  std::vector<Record> out;
  for (const auto& g : gauge_families()) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const GaugeShift s = gauge_shift(model, tag, g, random_point(ctx.rng, ctx.cfg.simplex_scale), random_curve(ctx, false), q);
      worst = std::max(worst, std::abs(s.shifted - s.unshifted - s.boundary_term));
    }
    out.push_back(ctx.record({{"gauge", g.name}, {"order", q.order}}, n, worst, 1e-9));
  }
  return out;
}

inline std::vector<Record> headline(Context& ctx) {
  const int n = ctx.samples(200);
  std::vector<Record> out;
  for_each_field_case(ctx, [&](const ModelEntry& e, const TestFunctionTag& tag, const QuadratureConfig& q, Json params) {
    const Connection u_em = connection_from_rep(rep_from_cochain(em_cochain(e.model, q)), PathFrameSystem::euclidean());
    const Connection u_pot = pot_connection(e.model, q);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const Simplex a = make_point(random_point(ctx.rng, ctx.cfg.simplex_scale), tag);
      const Simplex b = random_simplex(ctx.rng, 1, tag, ctx.cfg.simplex_scale);
      worst = std::max(worst, distance(u_em(a, b), u_pot(a, b)));
    }
    out.push_back(ctx.record(std::move(params), n, worst, 1e-9));
  });
  return out;
}

/// u^em_P is carried onto u^pot by the frame-change gauge of a detour frame.
inline std::vector<Record> headline_frame_equivalence(Context& ctx) {
  const int n = ctx.samples(50);
  std::vector<Record> out;
  const FourVector offset = random_offset(ctx);
  for_each_field_case(ctx, [&](const ModelEntry& e, const TestFunctionTag& tag, const QuadratureConfig& q, Json params) {
    const LoopRepresentation lambda = rep_from_cochain(em_cochain(e.model, q));
    const PathFrameSystem p_frames = PathFrameSystem::detour(offset);
    const Connection u_p = connection_from_rep(lambda, p_frames);
    const GaugeFamily g = frame_change_gauge(lambda, p_frames, PathFrameSystem::euclidean());
    std::vector<std::pair<Simplex, Simplex>> samples;
    for (int i = 0; i < n; ++i)
      samples.emplace_back(make_point(random_point(ctx.rng, ctx.cfg.simplex_scale), tag),
                           random_simplex(ctx.rng, 1, tag, ctx.cfg.simplex_scale));
    params["frame"] = p_frames.name;
    out.push_back(ctx.record(std::move(params), n, equivalence_defect(u_p, pot_connection(e.model, q), g, samples), 1e-9));
  });
  return out;
}

/// Largest increase of the Stokes residual from one order to the next over
/// orders 4, 8, 16, 32.
inline std::vector<Record> quadrature_convergence(Context& ctx) {
  const int n = ctx.samples(20);
  const std::array<int, 4> orders{4, 8, 16, 32};
  std::vector<Record> out;
  for (const auto& e : ctx.cfg.models())
    for (const auto& tag : ctx.cfg.tags) {
      if (!compatible(e.model, tag)) continue;
      double worst_increase = 0.0;
      Json residuals = Json::array();
      std::array<double, 4> max_per_order{};
      for (int i = 0; i < n; ++i) {
        const Simplex s = random_simplex(ctx.rng, 2, tag, ctx.cfg.simplex_scale);
        const FourVector z = random_point(ctx.rng, ctx.cfg.simplex_scale);
        std::array<double, 4> r{};
        for (std::size_t k = 0; k < orders.size(); ++k) {
          r[k] = stokes_check(e.model, z, s, QuadratureConfig{orders[k]});
          max_per_order[k] = std::max(max_per_order[k], r[k]);
        }
        for (std::size_t k = 0; k + 1 < orders.size(); ++k) worst_increase = std::max(worst_increase, r[k + 1] - r[k]);
      }
      for (double m : max_per_order) residuals.push_back(m);
      out.push_back(ctx.record({{"model", e.name}, {"tag", tag.id}, {"orders", orders}, {"max_residual_per_order", residuals}},
                               n, worst_increase, 1e-12));
    }
  return out;
}

}  // namespace detail

inline const std::vector<CheckInfo>& registry() {
  static const std::vector<CheckInfo> checks{
      {"boundary_squared", "simplex", "boundary of a boundary vanishes on random rational chains", detail::boundary_squared},
      {"homotopy_identity", "simplex", "cone construction is a chain homotopy to the identity", detail::homotopy_identity},
      {"opposite_boundary", "simplex", "opposite simplices have negated boundaries", detail::opposite_boundary},
      {"poincare_equivariance", "simplex", "faces, cones and supports commute with Poincare maps", detail::poincare_equivariance},
      {"degenerate_form", "simplex", "forms of degenerate simplices vanish", detail::degenerate_form},
      {"word_reduction", "loopgroup", "reduction is idempotent, fully reduced and cancels inverses", detail::word_reduction},
      {"path_boundary_orientation", "loopgroup", "path-boundary of the opposite is the inverse loop", detail::path_boundary_orientation},
      {"frame_covariance", "loopgroup", "path-frame systems commute with Poincare maps", detail::frame_covariance},
      {"locality_covariance", "loopgroup", "locality in a double cone is Poincare covariant", detail::locality_covariance},
      {"cochain_round_trip", "holonomy", "cochain -> representation -> cochain is the identity", detail::cochain_round_trip},
      {"rep_round_trip", "holonomy", "representation -> cochain -> representation is the identity", detail::rep_round_trip},
      {"connection_loop_restore", "holonomy", "framed connections restore the representation on loops", detail::connection_loop_restore},
      {"frame_change_gauge", "holonomy", "frame-change gauge carries one framed connection to another", detail::frame_change},
      {"gauge_axioms", "holonomy", "gauged connections keep the connection axioms and conjugate loops", detail::gauge_axioms},
      {"mock_causality", "holonomy", "mock cochain values commute on causally disjoint cell-disjoint pairs", detail::mock_causality},
      {"mock_noncommutativity", "holonomy", "mock cochain values fail to commute on overlapping pairs", detail::mock_noncommutativity},
      {"cochain_properties", "holonomy", "adjoint, degeneracy, causality and covariance of cochains", detail::cochain_properties},
      {"stokes", "emfield", "line integral over a triangle boundary equals the surface integral", detail::stokes},
      {"cone_equivalence", "emfield", "line integral equals the surface integral over the cone", detail::cone_equivalence},
      {"boundary_independence", "emfield", "surface integrals depend only on the boundary", detail::boundary_independence},
      {"primitivity", "emfield", "finite-difference curl of the potential gives the smeared field", detail::primitivity},
      {"closedness", "emfield", "finite-difference cyclic derivative sum of the smeared field vanishes", detail::closedness},
      {"covariance", "emfield", "potential transforms covariantly with a moving pole", detail::covariance},
      {"gauge_closed", "emfield", "gauge families leave closed-curve integrals unchanged", detail::gauge_closed},
      {"gauge_open", "emfield", "gauge shift of open-curve integrals is the boundary term", detail::gauge_open},
      {"headline", "emfield", "Euclidean-framed electromagnetic connection equals the potential connection", detail::headline},
      {"headline_frame_equivalence", "emfield", "frame-change gauge maps a detour-framed connection to the potential connection", detail::headline_frame_equivalence},
      {"quadrature_convergence", "emfield", "Stokes residual decreases with quadrature order", detail::quadrature_convergence},
  };
  return checks;
}

inline const CheckInfo* find_check(const std::string& name) {
  for (const auto& c : registry())
    if (c.name == name) return &c;
  return nullptr;
}

inline std::vector<std::string> suites() { return {"all", "simplex", "loopgroup", "holonomy", "emfield"}; }

inline void ScenarioConfig::validate() const {
  if (quadrature_orders.empty()) throw ConfigError("quadrature_orders must not be empty");
  for (int o : quadrature_orders)
    if (o < 2) throw ConfigError("quadrature orders must be >= 2");
  if (tags.empty()) throw ConfigError("tags must not be empty");
  if (poincare_samples < 1) throw ConfigError("poincare.samples must be >= 1");
  if (!(max_rapidity >= 0.0) || !std::isfinite(max_rapidity)) throw ConfigError("poincare.max_rapidity must be finite and >= 0");
  if (!(simplex_scale > 0.0)) throw ConfigError("simplex_scale must be positive");
  if (!(mock_coupling > 0.0)) throw ConfigError("mock.coupling must be positive");
  if (checks)
    for (const auto& c : *checks)
      if (!find_check(c)) throw ConfigError("unknown check '" + c + "'");
  for (const auto& [name, tol] : tolerances) {
    if (!find_check(name)) throw ConfigError("tolerance for unknown check '" + name + "'");
    if (!(tol > 0.0)) throw ConfigError("tolerance for '" + name + "' must be positive");
  }
  for (const auto& [name, n] : samples) {
    if (!find_check(name)) throw ConfigError("sample count for unknown check '" + name + "'");
    if (n < 1) throw ConfigError("sample count for '" + name + "' must be >= 1");
  }
  (void)models();
}

inline ScenarioConfig ScenarioConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{"seed",      "quadrature_orders", "field_models", "tags",       "poincare",
                                              "simplex_scale", "mock",           "checks",       "tolerances", "samples"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
  }
  ScenarioConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("quadrature_orders")) cfg.quadrature_orders = j.at("quadrature_orders").get<std::vector<int>>();
    if (j.contains("field_models")) {
      if (!j.at("field_models").is_array()) throw ConfigError("field_models must be an array");
      cfg.field_models = j.at("field_models");
    }
    if (j.contains("tags")) {
      cfg.tags.clear();
      for (const auto& t : j.at("tags")) cfg.tags.push_back(io::decode_tag(t));
    }
    if (j.contains("poincare")) {
      const auto& p = j.at("poincare");
      cfg.poincare_samples = p.value("samples", cfg.poincare_samples);
      cfg.max_rapidity = p.value("max_rapidity", cfg.max_rapidity);
    }
    if (j.contains("simplex_scale")) cfg.simplex_scale = j.at("simplex_scale").get<double>();
    if (j.contains("mock")) cfg.mock_coupling = j.at("mock").value("coupling", cfg.mock_coupling);
    if (j.contains("checks")) cfg.checks = j.at("checks").get<std::vector<std::string>>();
    if (j.contains("tolerances")) cfg.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    if (j.contains("samples")) cfg.samples = j.at("samples").get<std::map<std::string, int>>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const io::FormatError& e) {
    throw ConfigError(e.what());
  }
  cfg.validate();
  return cfg;
}

inline Json ScenarioConfig::to_json() const {
  Json j;
  j["seed"] = seed;
  j["quadrature_orders"] = quadrature_orders;
  j["field_models"] = field_models;
  Json ts = Json::array();
  for (const auto& t : tags) ts.push_back(io::encode(t));
  j["tags"] = std::move(ts);
  j["poincare"] = Json{{"samples", poincare_samples}, {"max_rapidity", max_rapidity}};
  j["simplex_scale"] = simplex_scale;
  j["mock"] = Json{{"coupling", mock_coupling}};
  if (checks) j["checks"] = *checks;
  j["tolerances"] = tolerances;
  j["samples"] = samples;
  return j;
}

/// Checks a suite selects under a config: the config's list when present
/// (each entry must belong to the suite), else every check of the suite.
inline std::vector<const CheckInfo*> select(const std::string& suite, const ScenarioConfig& cfg) {
  const auto all = suites();
  if (std::find(all.begin(), all.end(), suite) == all.end()) throw ConfigError("unknown suite '" + suite + "'");
  std::vector<const CheckInfo*> out;
  if (cfg.checks) {
    for (const auto& name : *cfg.checks) {
      const CheckInfo* c = find_check(name);
      if (!c) throw ConfigError("unknown check '" + name + "'");
      if (suite != "all" && c->suite != suite)
        throw ConfigError("check '" + name + "' belongs to suite '" + c->suite + "', not '" + suite + "'");
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  } else {
    for (const auto& c : registry())
      if (suite == "all" || c.suite == suite) out.push_back(&c);
  }
  return out;
}

/// Runs one check; exceptions inside become failing records.
inline std::vector<Record> run_check(const CheckInfo& info, const ScenarioConfig& cfg) {
  Context ctx{cfg, info.name, Rng(derive_seed(cfg.seed, info.name))};
  try {
    return info.run(ctx);
  } catch (const std::exception& e) {
    return {make_record(info.name, Json{{"error", e.what()}}, 0, std::numeric_limits<double>::infinity(),
                        ctx.tolerance(1.0))};
  }
}

/// Deterministic report: records sorted by check name, then params.
inline Report run(const std::string& suite, const ScenarioConfig& cfg) {
  cfg.validate();
  Report report;
  std::vector<std::future<std::vector<Record>>> pending;
  for (const CheckInfo* c : select(suite, cfg))
    pending.push_back(std::async(std::launch::async, [c, &cfg] { return run_check(*c, cfg); }));
  for (auto& f : pending) {
    auto recs = f.get();
    report.records.insert(report.records.end(), recs.begin(), recs.end());
  }
  std::stable_sort(report.records.begin(), report.records.end(), [](const Record& a, const Record& b) {
    if (a.check != b.check) return a.check < b.check;
    return a.params.dump() < b.params.dump();
  });
  return report;
}

inline Report run(const ScenarioConfig& cfg) { return run("all", cfg); }

}  // namespace loopnet::checks
