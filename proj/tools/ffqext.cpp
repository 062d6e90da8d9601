// Command-line front end. Every subcommand writes its table to stdout (or
// --output) and a short PASS/FAIL summary to stderr.
//
// Exit status: 0 when every assertion passes, 1 when one fails, 2 on a bad
// configuration.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffqext/extension.hpp"
#include "ffqext/geometry.hpp"
#include "ffqext/incidence.hpp"
#include "ffqext/parallel.hpp"
#include "ffqext/verify.hpp"

namespace {

using namespace ffq;
using nlohmann::json;

struct Common {
  std::string output;
  std::string format = "csv";
  double tolerance = 1e-9;
  bool no_header_meta = false;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Sink {
 public:
  Sink(const Common& c, const std::string& command) : common_(c) {
    if (!c.output.empty()) {
      file_.open(c.output, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file '" + c.output + "'");
    }
    os().precision(std::numeric_limits<double>::max_digits10);
    if (csv() && !c.no_header_meta) os() << "# ffqext " << command << ' ' << timestamp() << '\n';
  }

  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
  bool csv() const { return common_.format == "csv"; }

 private:
  static std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
  }

  const Common& common_;
  std::ofstream file_;
};

int verdict(bool ok) {
  std::cerr << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

Elem radius(const Field& f, std::uint32_t j) {
  if (j == 0 || j >= f.q()) throw ConfigError("--j must be a nonzero element index below q");
  return Elem{j};
}

std::vector<std::uint32_t> radii(const Field& f, const std::vector<std::uint32_t>& js) {
  std::vector<std::uint32_t> out = js;
  if (out.empty()) {
    for (std::uint32_t j = 1; j < f.q(); ++j) out.push_back(j);
  }
  for (auto j : out) radius(f, j);
  return out;
}

std::string opt(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream ss;
  ss.precision(std::numeric_limits<double>::max_digits10);
  ss << *v;
  return ss.str();
}

// ---------------------------------------------------------------------------

int verify_characters(const Common& c, const std::vector<std::string>& qs) {
  std::vector<CheckRecord> rows;
  for (const auto& spec : qs) {
    const auto recs = character_sum_checks(Field::parse(spec), c.tolerance);
    rows.insert(rows.end(), recs.begin(), recs.end());
  }
  Sink out(c, "verify-characters");
  bool ok = true;
  if (out.csv()) out.os() << "check,q,value,limit,pass,a,b\n";
  json arr = json::array();
  for (const auto& r : rows) {
    ok &= r.pass;
    if (out.csv()) {
      out.os() << r.check << ',' << r.q << ',' << r.value << ',' << r.limit << ','
               << (r.pass ? 1 : 0) << ',' << r.a << ',' << r.b << '\n';
    } else {
      arr.push_back({{"check", r.check}, {"q", r.q}, {"value", r.value}, {"limit", r.limit},
                     {"pass", r.pass}, {"a", r.a}, {"b", r.b}});
    }
  }
  if (!out.csv()) out.os() << arr.dump(2) << '\n';
  std::cerr << "verify-characters: " << rows.size() << " checks ";
  return verdict(ok);
}

int check_lemma1(const Common& c, const std::vector<std::string>& qs, const std::vector<int>& ds,
                 const std::vector<std::uint32_t>& js) {
  struct Job {
    Field f;
    int d;
    std::uint32_t j;
  };
  std::vector<Job> jobs;
  for (const auto& spec : qs) {
    const Field f = Field::parse(spec);
    for (int d : ds) {
      if (d < 1) throw ConfigError("--d must be positive");
      for (auto j : radii(f, js)) jobs.push_back({f, d, j});
    }
  }
  const auto results = parallel_map(jobs.size(), [&](std::size_t i) {
    return check_sphere_transform(sphere(jobs[i].f, jobs[i].d, Elem{jobs[i].j}));
  });

  Sink out(c, "check-lemma1");
  bool ok = true;
  double worst = 0;
  if (out.csv()) out.os() << "q,d,j,points,max_error,decay_ratio,k_modulus,even_form_error,pass\n";
  json arr = json::array();
  for (const auto& r : results) {
    const bool pass = r.max_error < c.tolerance && r.decay_ratio <= 3 &&
                      (!r.k_modulus || *r.k_modulus <= 1 + c.tolerance) &&
                      (!r.even_form_error || *r.even_form_error < c.tolerance);
    ok &= pass;
    worst = std::max(worst, r.max_error);
    if (out.csv()) {
      out.os() << r.q << ',' << r.d << ',' << r.j << ',' << r.points << ',' << r.max_error << ','
               << r.decay_ratio << ',' << opt(r.k_modulus) << ',' << opt(r.even_form_error) << ','
               << (pass ? 1 : 0) << '\n';
    } else {
      json row = {{"q", r.q}, {"d", r.d}, {"j", r.j}, {"points", r.points},
                  {"max_error", r.max_error}, {"decay_ratio", r.decay_ratio}, {"pass", pass}};
      if (r.k_modulus) row["k_modulus"] = *r.k_modulus;
      if (r.even_form_error) row["even_form_error"] = *r.even_form_error;
      arr.push_back(row);
    }
  }
  if (!out.csv()) out.os() << arr.dump(2) << '\n';
  std::cerr << "check-lemma1: " << results.size() << " spheres, max error " << worst << ' ';
  return verdict(ok);
}

struct ScanArgs {
  std::string q = "3";
  int d = 4;
  std::uint32_t j = 1;
  std::size_t samples = 200;
  std::string sampler = "all";
  std::uint64_t seed = 0;
  double ceiling = 16;
  bool points = false;
};

int scan(const Common& c, const ScanArgs& a) {
  const Field f = Field::parse(a.q);
  if (a.d < 2) throw ConfigError("--d must be at least 2");
  const SphereSet s(Space(f, a.d), radius(f, a.j));
  const bool theorem = a.d >= 4 && a.d % 2 == 0;
  const auto samples = sample_sets(s, a.sampler, a.samples, a.seed);
  const auto per_sample = parallel_map(samples.size(), [&](std::size_t i) {
    auto reps = bound_reports_for(s, samples[i], a.points);
    if (theorem) reps.push_back(easyform_check(samples[i].set, reps.front().witness));
    return reps;
  });
  std::vector<BoundReport> reports;
  for (const auto& r : per_sample) reports.insert(reports.end(), r.begin(), r.end());

  Sink out(c, "scan");
  if (out.csv()) {
    write_bound_csv_header(out.os());
    for (const auto& r : reports) write_bound_csv_row(out.os(), r);
  } else {
    write_bound_json(out.os(), reports);
  }

  bool ok = true;
  for (const auto& best : max_ratio_per_quantity(reports)) {
    const double limit = best.quantity == "lambda4_piecewise" ? 3 * a.ceiling : a.ceiling;
    const bool pass = !best.in_hypotheses || best.ratio <= limit;
    ok &= pass;
    std::cerr << best.quantity << ": max ratio " << best.ratio << " (|E| = "
              << best.witness.set_size << ", " << best.witness.sampler << " sample "
              << best.witness.sample << ")"
              << (best.in_hypotheses ? (pass ? " ok" : " exceeds " + std::to_string(limit))
                                     : " out of hypotheses, not asserted")
              << '\n';
  }
  std::cerr << "scan: " << samples.size() << " samples ";
  return verdict(ok);
}

struct RStarArgs {
  std::string q = "3";
  int d = 4;
  std::uint32_t j = 1;
  std::string p = "5/3";
  std::string r = "4";
  std::string strategy = "all";
  std::uint64_t seed = 0;
  std::uint64_t budget = 64;
  double ceiling = 16;
};

int rstar(const Common& c, const RStarArgs& a) {
  const Field f = Field::parse(a.q);
  if (a.d < 2) throw ConfigError("--d must be at least 2");
  const ExponentPair e{Exponent::parse(a.p), Exponent::parse(a.r)};
  const auto strategy = parse_strategy(a.strategy);
  auto s = std::make_shared<const SphereSet>(Space(f, a.d), radius(f, a.j));
  const auto rep = rstar_lower_bound(s, e, strategy, a.seed, a.budget);

  Sink out(c, "rstar");
  if (out.csv()) {
    write_ratio_csv_header(out.os());
    write_ratio_csv_row(out.os(), rep);
  } else {
    write_ratio_json(out.os(), rep);
  }

  // The ratio only decreases as p or r grows, so the improved exponent
  // covers every p >= p0, r >= 4.
  bool asserted = false;
  if (a.d >= 4 && a.d % 2 == 0) {
    const Exponent p0 = main_theorem_exponent(a.d).p;
    asserted = e.p.reciprocal() <= p0.reciprocal() && e.r.reciprocal() <= Rational(1, 4);
  }
  const bool ok = !asserted || rep.ratio <= a.ceiling;
  std::cerr << "rstar: best ratio " << rep.ratio << " from " << rep.descriptor
            << (asserted ? "" : " (out of hypotheses, not asserted)") << ' ';
  return verdict(ok);
}

struct SubspaceArgs {
  std::string q = "3";
  int d = 4;
  std::vector<std::uint32_t> j;
  std::uint64_t budget = 64;
  std::uint64_t seed = 0;
  std::size_t random = 1000;
};

int subspace(const Common& c, const SubspaceArgs& a) {
  const Field f = Field::parse(a.q);
  if (a.d < 1) throw ConfigError("--d must be positive");
  const Space space(f, a.d);
  const auto js = radii(f, a.j);
  struct Row {
    SphereSet s;
    SubspaceSearchResult found;
    double max_ratio = 0;
  };
  const auto rows = parallel_map(js.size(), [&](std::size_t i) {
    SphereSet s(space, Elem{js[i]});
    auto found = max_affine_in_sphere(s, a.budget, a.seed);
    auto rng = sample_rng(a.seed, js[i]);
    std::uniform_int_distribution<int> kd(0, a.d);
    double worst = 0;
    for (std::size_t t = 0; t < a.random; ++t) {
      const auto h = AffineSubspace::random(space, kd(rng), rng);
      worst = std::max(worst, sphere_subspace_intersection(h, s).ratio);
    }
    return std::make_shared<Row>(Row{std::move(s), std::move(found), worst});
  });

  Sink out(c, "subspace");
  bool ok = true;
  if (out.csv()) out.os() << "q,d,j,best_k,exhaustive,k_cap,max_intersection_ratio,pass\n";
  json arr = json::array();
  for (const auto& row : rows) {
    const bool even = a.d % 2 == 0;
    const int cap = (a.d - 2) / 2;
    const bool pass = (!even || row->found.best_k <= cap) && row->max_ratio <= 4;
    ok &= pass;
    if (out.csv()) {
      out.os() << f.q() << ',' << a.d << ',' << row->s.radius().v << ',' << row->found.best_k
               << ',' << (row->found.exhaustive ? 1 : 0) << ','
               << (even ? std::to_string(cap) : "") << ',' << row->max_ratio << ','
               << (pass ? 1 : 0) << '\n';
    } else {
      json witness = json::array();
      if (row->found.witness) {
        for (const auto& p : row->found.witness->points()) witness.push_back(format_point(f, p));
      }
      json r = {{"q", f.q()}, {"d", a.d}, {"j", row->s.radius().v},
                {"best_k", row->found.best_k}, {"exhaustive", row->found.exhaustive},
                {"max_intersection_ratio", row->max_ratio}, {"pass", pass},
                {"witness", witness}};
      if (even) r["k_cap"] = cap;
      arr.push_back(r);
    }
  }
  if (!out.csv()) out.os() << arr.dump(2) << '\n';
  std::cerr << "subspace: " << rows.size() << " spheres ";
  return verdict(ok);
}

int figures(const Common& c, int d) {
  const auto rows = figure_data(d);
  Sink out(c, "figures");
  if (out.csv()) {
    write_figure_csv(out.os(), rows);
  } else {
    json arr = json::array();
    for (const auto& v : rows) {
      arr.push_back({{"series", v.series}, {"vertex", v.vertex}, {"inv_p", to_string(v.inv_p)},
                     {"inv_r", to_string(v.inv_r)}});
    }
    out.os() << arr.dump(2) << '\n';
  }
  std::cerr << "figures: " << rows.size() << " vertices ";
  return verdict(true);
}

int bench(const Common& c, const std::string& q, int d, int runs, double min_speedup,
          std::uint64_t seed) {
  const auto r = bench_transforms(Space(Field::parse(q), d), runs, seed);
  const bool ok = r.speedup >= min_speedup && r.max_difference < 1e-9;
  Sink out(c, "bench");
  if (out.csv()) {
    out.os() << "q,d,runs,naive_median_s,fast_median_s,speedup,max_difference,pass\n"
             << r.q << ',' << r.d << ',' << r.runs << ',' << r.naive_seconds << ','
             << r.fast_seconds << ',' << r.speedup << ',' << r.max_difference << ','
             << (ok ? 1 : 0) << '\n';
  } else {
    out.os() << json{{"q", r.q}, {"d", r.d}, {"runs", r.runs},
                     {"naive_median_s", r.naive_seconds}, {"fast_median_s", r.fast_seconds},
                     {"speedup", r.speedup}, {"max_difference", r.max_difference},
                     {"pass", ok}}.dump(2)
             << '\n';
  }
  std::cerr << "bench: speedup " << r.speedup << "x ";
  return verdict(ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier analysis and extension estimates on spheres over finite fields"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output,-o", common.output, "Write the table here instead of stdout");
    sub->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--tolerance", common.tolerance, "Tolerance for exact identities")
        ->capture_default_str();
    sub->add_flag("--no-header-meta", common.no_header_meta,
                  "Omit the timestamped '#' line at the top of CSV output");
  };
  std::function<int()> run;

  auto* vc = app.add_subcommand("verify-characters", "Gauss, Kloosterman and Salie sum checks");
  add_common(vc);
  std::vector<std::string> vc_q = {"3", "5", "7", "9"};
  vc->add_option("--q", vc_q, "Field orders (q, p^n or p^n:c0,...,cn)")->capture_default_str();
  vc->callback([&] { run = [&] { return verify_characters(common, vc_q); }; });

  auto* lm = app.add_subcommand("check-lemma1", "Closed-form sphere transform against the definition");
  add_common(lm);
  std::vector<std::string> lm_q = {"3", "5", "7", "9"};
  std::vector<int> lm_d = {2, 3, 4};
  std::vector<std::uint32_t> lm_j;
  auto* lm_qo = lm->add_option("--q", lm_q, "Field orders [3 5 7 9]; the flag alone means none")
                   ->expected(0, CLI::detail::expected_max_vector_size);
  auto* lm_do = lm->add_option("--d", lm_d, "Dimensions [2 3 4]; the flag alone means none")
                   ->expected(0, CLI::detail::expected_max_vector_size);
  lm->add_option("--j", lm_j, "Radii as element indices (default: all nonzero)");
  lm->callback([&] {
    // A bare flag arrives as one empty result.
    auto bare = [](const CLI::Option* o) {
      return o->count() == 1 && o->results().front().empty();
    };
    if (bare(lm_qo)) lm_q.clear();
    if (bare(lm_do)) lm_d.clear();
    run = [&] { return check_lemma1(common, lm_q, lm_d, lm_j); };
  });

  auto* sc = app.add_subcommand("scan", "Incidence counts against their bounds over sampled sets");
  add_common(sc);
  ScanArgs sa;
  sc->add_option("--q", sa.q, "Field order")->capture_default_str();
  sc->add_option("--d", sa.d, "Dimension")->capture_default_str();
  sc->add_option("--j", sa.j, "Sphere radius (element index)")->capture_default_str();
  sc->add_option("--samples", sa.samples, "Number of sampled sets")->capture_default_str();
  sc->add_option("--sampler", sa.sampler, "all, or a comma list of full,singleton,cap,slices,random")
      ->capture_default_str();
  sc->add_option("--seed", sa.seed, "Seed")->capture_default_str();
  sc->add_option("--ceiling", sa.ceiling, "Asserted ratio ceiling (3x for the piecewise bound)")
      ->capture_default_str();
  sc->add_flag("--points", sa.points, "Include witness point lists in JSON output");
  sc->callback([&] { run = [&] { return scan(common, sa); }; });

  auto* rs = app.add_subcommand("rstar", "Lower-bound search for the extension constant");
  add_common(rs);
  RStarArgs ra;
  rs->add_option("--q", ra.q, "Field order")->capture_default_str();
  rs->add_option("--d", ra.d, "Dimension")->capture_default_str();
  rs->add_option("--j", ra.j, "Sphere radius (element index)")->capture_default_str();
  rs->add_option("--p", ra.p, "Exponent p as a/b")->capture_default_str();
  rs->add_option("--r", ra.r, "Exponent r as a/b or inf")->capture_default_str();
  rs->add_option("--strategy", ra.strategy,
                 "singletons, full, caps, subspaces, random, ascent or all")
      ->capture_default_str();
  rs->add_option("--seed", ra.seed, "Seed")->capture_default_str();
  rs->add_option("--budget", ra.budget, "Random candidates / ascent steps")->capture_default_str();
  rs->add_option("--ceiling", ra.ceiling, "Asserted ratio ceiling")->capture_default_str();
  rs->callback([&] { run = [&] { return rstar(common, ra); }; });

  auto* ss = app.add_subcommand("subspace", "Affine subspaces inside and across spheres");
  add_common(ss);
  SubspaceArgs sba;
  ss->add_option("--q", sba.q, "Field order")->capture_default_str();
  ss->add_option("--d", sba.d, "Dimension")->capture_default_str();
  ss->add_option("--j", sba.j, "Radii (default: all nonzero)");
  ss->add_option("--budget", sba.budget, "Greedy restarts above the exhaustive limit")
      ->capture_default_str();
  ss->add_option("--seed", sba.seed, "Seed")->capture_default_str();
  ss->add_option("--random", sba.random, "Random subspaces intersected with each sphere")
      ->capture_default_str();
  ss->callback([&] { run = [&] { return subspace(common, sba); }; });

  auto* fg = app.add_subcommand("figures", "Boundary polylines in the (1/p, 1/r) plane");
  add_common(fg);
  int fg_d = 4;
  fg->add_option("--d", fg_d, "Dimension")->capture_default_str();
  fg->callback([&] { run = [&] { return figures(common, fg_d); }; });

  auto* bn = app.add_subcommand("bench", "Naive against axis-wise transform timing");
  add_common(bn);
  std::string bn_q = "5";
  int bn_d = 4, bn_runs = 5;
  double bn_min = 5;
  std::uint64_t bn_seed = 0;
  bn->add_option("--q", bn_q, "Field order")->capture_default_str();
  bn->add_option("--d", bn_d, "Dimension")->capture_default_str();
  bn->add_option("--runs", bn_runs, "Timed runs; medians are reported")->capture_default_str();
  bn->add_option("--min-speedup", bn_min, "Required speedup")->capture_default_str();
  bn->add_option("--seed", bn_seed, "Seed for the input grid")->capture_default_str();
  bn->callback([&] { run = [&] { return bench(common, bn_q, bn_d, bn_runs, bn_min, bn_seed); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
