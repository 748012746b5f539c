#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "output.hpp"
#include "rsp/rsp.hpp"

namespace rsp::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  // global
  std::string threads = "auto";
  std::string cache_dir;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "csv";
  std::string out;
  // shared by subcommands
  std::string k = "10";
  std::string arc = "0:2pi";
  std::string q;
  std::size_t count = 0;
  std::string component = "P";
  // per subcommand
  std::string out_dir;
  bool coeffs_flag = false;
  bool lattice = false;
  std::string dump;
  bool limit = false;
  double exclusion_radius = 0.0;
  bool jensen = false;
  double tol = 1e-12;
  std::size_t max_iter = 1000;
  std::string coeffs;
  double eps = 1e-6;
  bool exact = false;
  std::string check = "all";
  std::size_t arcs = 8;
  bool arc_given = false;
  std::size_t bins = 20;
  std::vector<std::string> rects;
  std::vector<std::string> intervals;
  std::size_t random = 0;
  std::size_t degree = 64;
  bool odd_mode = false;
  std::size_t falsify = 0;
};

// ---- parsing -------------------------------------------------------------

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

// ---- output --------------------------------------------------------------

class Sink {
 public:
  Sink(std::ostream& fallback, const std::string& path) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw UsageError("cannot open output file " + path);
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

void emit(const Settings& s, std::ostream& out, const ConfigHeader& cfg, const Table& t) {
  Sink sink(out, s.out);
  if (s.format == "json") write_jsonl(sink.stream(), cfg, t);
  else write_csv(sink.stream(), cfg, t);
}

ConfigHeader base_config(const std::string& command, const Settings& s) {
  ConfigHeader cfg;
  cfg.add("tool", "rsp");
  cfg.add("command", command);
  cfg.add("seed", std::to_string(s.seed));
  cfg.add("format", s.format);
  cfg.add("cache_dir", s.cache_dir.empty() ? "none" : s.cache_dir);
  return cfg;
}

std::string count_text(std::size_t count) { return count == 0 ? "auto" : std::to_string(count); }

Cell opt_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::string();
}

// ---- shared helpers ------------------------------------------------------

std::optional<PairCache> cache_for(const Settings& s) {
  if (!s.cache_dir.empty()) return PairCache(s.cache_dir);
  return PairCache::from_environment();
}

RudinShapiroPair pair_for(unsigned k, const Settings& s) {
  if (auto cache = cache_for(s)) return cache->get_or_generate(k);
  return generate_pair(k);
}

Component parse_component(const std::string& c) {
  if (c == "P" || c == "p") return Component::P;
  if (c == "Q" || c == "q") return Component::Q;
  throw UsageError("component must be P or Q, got '" + c + "'");
}

unsigned single_k(const Settings& s) {
  auto ks = parse_k_range(s.k);
  if (ks.size() != 1) throw UsageError("this subcommand takes a single --k");
  return ks.front();
}

std::vector<Rectangle> default_rectangles() {
  return {{0.0, 0.3, 0.0, 0.3},
          {-0.6, -0.2, 0.1, 0.5},
          {0.2, 0.6, -0.6, -0.2},
          {-0.3, 0.3, -0.3, 0.3},
          {-0.5, -0.1, -0.5, -0.1}};
}

std::mt19937_64 rng_for_k(std::uint64_t seed, unsigned k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), k};
  return std::mt19937_64(seq);
}

// ---- subcommands ---------------------------------------------------------

int cmd_generate(const Settings& s, std::ostream& out, std::ostream&) {
  const auto ks = parse_k_range(s.k);
  std::optional<PairCache> cache;
  if (!s.out_dir.empty()) cache.emplace(s.out_dir);
  else cache = cache_for(s);
  auto cfg = base_config("generate", s);
  cfg.add("k", s.k);
  cfg.add("out_dir", s.out_dir.empty() ? "none" : s.out_dir);
  Table t;
  if (s.coeffs_flag) {
    t.columns = {"k", "j", "p", "q"};
    for (unsigned k : ks) {
      const auto pair = cache ? cache->get_or_generate(k) : generate_pair(k);
      for (std::size_t j = 0; j < pair.n; ++j)
        t.add({static_cast<long long>(k), static_cast<long long>(j), static_cast<long long>(pair.p[j]),
               static_cast<long long>(pair.q[j])});
    }
  } else {
    t.columns = {"k", "n", "p_at_1", "q_at_1", "p_at_minus_1", "q_at_minus_1", "special_values_ok", "file"};
    for (unsigned k : ks) {
      const auto pair = cache ? cache->get_or_generate(k) : generate_pair(k);
      const bool ok = special_values(pair).matches();
      t.add({static_cast<long long>(k), static_cast<long long>(pair.n), static_cast<long long>(pair.p.value_at_one()),
             static_cast<long long>(pair.q.value_at_one()), static_cast<long long>(pair.p.value_at_minus_one()),
             static_cast<long long>(pair.q.value_at_minus_one()), ok,
             cache ? cache->path_for(k).filename().string() : std::string()});
    }
  }
  emit(s, out, cfg, t);
  return kPass;
}

int cmd_eval(const Settings& s, std::ostream& out, std::ostream&) {
  const unsigned k = single_k(s);
  const Arc arc = parse_arc(s.arc);
  const auto pair = pair_for(k, s);
  const std::size_t count = s.count ? s.count : default_sample_count(pair.n - 1, arc);
  const GridSamples g = eval_grid(pair, arc, count, !s.lattice);
  if (!s.dump.empty()) {
    std::ofstream f(s.dump, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot open dump file " + s.dump);
    write_grid_dump(f, g);
  }
  auto cfg = base_config("eval", s);
  cfg.add("k", std::to_string(k));
  cfg.add("arc", s.arc);
  cfg.add("count", std::to_string(count));
  cfg.add("grid", s.lattice ? "lattice" : "half_offset");
  Table t;
  t.columns = {"j", "theta", "p_re", "p_im", "q_re", "q_im"};
  for (std::size_t j = 0; j < count; ++j)
    t.add({static_cast<long long>(j), g.spec.theta(j), g.values_p[j].real(), g.values_p[j].imag(),
           g.values_q[j].real(), g.values_q[j].imag()});
  emit(s, out, cfg, t);
  return kPass;
}

int cmd_norm(const Settings& s, std::ostream& out, std::ostream&) {
  const auto ks = parse_k_range(s.k);
  const Arc arc = parse_arc(s.arc);
  const auto qs = parse_real_list(s.q.empty() ? "2" : s.q);
  const Component c = parse_component(s.component);
  auto cfg = base_config("norm", s);
  cfg.add("k", s.k);
  cfg.add("arc", s.arc);
  cfg.add("q", s.q.empty() ? "2" : s.q);
  cfg.add("count", count_text(s.count));
  cfg.add("component", std::string(1, component_name(c)));
  cfg.add("limit", s.limit ? "true" : "false");
  Table t;
  t.columns = {"k", "alpha", "beta", "q", "value", "count", "rel_step", "flagged"};
  for (unsigned k : ks) {
    const PairComponentFn f{k, c};
    std::vector<NormEstimate> est = s.limit ? mq_limit_diagnostic(f, arc, qs, s.count) : mq_arc_multi(f, arc, qs, s.count);
    for (const auto& e : est)
      t.add({static_cast<long long>(k), arc.alpha(), arc.beta(), e.q, e.value, static_cast<long long>(e.count),
             e.rel_step, e.flagged});
  }
  emit(s, out, cfg, t);
  return kPass;
}

int cmd_mahler(const Settings& s, std::ostream& out, std::ostream&) {
  const auto ks = parse_k_range(s.k);
  const Arc arc = parse_arc(s.arc);
  const Component c = parse_component(s.component);
  if (s.jensen && !arc.is_full_circle()) throw UsageError("--jensen compares against the full circle; drop --arc");
  auto cfg = base_config("mahler", s);
  cfg.add("k", s.k);
  cfg.add("arc", s.arc);
  cfg.add("count", count_text(s.count));
  cfg.add("component", std::string(1, component_name(c)));
  cfg.add("exclusion_radius", format_double(s.exclusion_radius));
  cfg.add("jensen", s.jensen ? "true" : "false");
  Table t;
  t.columns = {"k", "alpha", "beta", "value", "ratio_sqrt_n", "count", "rel_step", "excluded_fraction", "flagged"};
  if (s.jensen) {
    t.columns.push_back("jensen");
    t.columns.push_back("jensen_rel_diff");
  }
  for (unsigned k : ks) {
    const NormEstimate e = mahler_arc(PairComponentFn{k, c}, arc, s.count, s.exclusion_radius);
    const double root_n = std::sqrt(static_cast<double>(std::size_t{1} << k));
    std::vector<Cell> row{static_cast<long long>(k), arc.alpha(), arc.beta(), e.value, e.value / root_n,
                          static_cast<long long>(e.count), e.rel_step, e.excluded_fraction, e.flagged};
    if (s.jensen) {
      const auto pair = pair_for(k, s);
      if (pair.n < 2) {
        row.emplace_back(1.0);
        row.emplace_back(std::abs(e.value - 1.0));
      } else {
        RootOptions opt;
        opt.seed = s.seed;
        const RootSet roots = find_roots(select(pair, c), opt);
        if (roots.flagged_count() > 0) {
          row.emplace_back(std::string("flagged"));
          row.emplace_back(std::string());
        } else {
          const double j = jensen_mahler(roots);
          row.emplace_back(j);
          row.emplace_back(std::abs(j - e.value) / j);
        }
      }
    }
    t.add(std::move(row));
  }
  emit(s, out, cfg, t);
  return kPass;
}

std::vector<double> coefficient_doubles(const std::string& list) {
  std::vector<double> c;
  for (long long v : parse_integer_list(list)) c.push_back(static_cast<double>(v));
  return c;
}

int cmd_roots(const Settings& s, std::ostream& out, std::ostream&) {
  RootOptions opt;
  opt.tol = s.tol;
  opt.max_iter = s.max_iter;
  opt.seed = s.seed;
  auto cfg = base_config("roots", s);
  RootSet roots;
  if (!s.coeffs.empty()) {
    const auto c = coefficient_doubles(s.coeffs);
    roots = find_roots(std::span<const double>(c), opt);
    cfg.add("coeffs", s.coeffs);
  } else {
    const unsigned k = single_k(s);
    const Component c = parse_component(s.component);
    roots = find_roots(select(pair_for(k, s), c), opt);
    cfg.add("k", std::to_string(k));
    cfg.add("component", std::string(1, component_name(c)));
  }
  cfg.add("tol", format_double(s.tol));
  cfg.add("max_iter", std::to_string(s.max_iter));
  Table t;
  t.columns = {"re", "im", "residual", "flag"};
  for (std::size_t i = 0; i < roots.roots.size(); ++i)
    t.add({roots.roots[i].real(), roots.roots[i].imag(), roots.residuals[i], roots.flagged[i] != 0});
  emit(s, out, cfg, t);
  return kPass;
}

int cmd_census(const Settings& s, std::ostream& out, std::ostream&) {
  const auto ks = parse_k_range(s.k);
  if (!(s.eps > 0.0)) throw UsageError("--eps must be positive");
  std::vector<Component> comps;
  if (s.component == "PQ" || s.component == "pq") comps = {Component::P, Component::Q};
  else comps = {parse_component(s.component)};
  RootOptions opt;
  opt.tol = s.tol;
  opt.max_iter = s.max_iter;
  opt.seed = s.seed;
  auto cfg = base_config("census", s);
  cfg.add("k", s.k);
  cfg.add("component", s.component);
  cfg.add("eps", format_double(s.eps));
  cfg.add("tol", format_double(s.tol));
  cfg.add("exact", s.exact ? "true" : "false");
  Table t;
  t.columns = {"k", "component", "degree", "inside_open_disk", "on_circle_within_eps", "outside", "real_zeros",
               "eps", "seed", "min_circle_distance", "flagged_roots"};
  if (s.exact) t.columns.push_back("exact_real_zeros");
  for (unsigned k : ks) {
    if (k == 0) throw UsageError("census needs k >= 1 (P_0 is constant)");
    const auto pair = pair_for(k, s);
    RootSet pooled;
    long long exact_total = 0;
    for (Component c : comps) {
      RootSet r = find_roots(select(pair, c), opt);
      pooled.roots.insert(pooled.roots.end(), r.roots.begin(), r.roots.end());
      pooled.flagged.insert(pooled.flagged.end(), r.flagged.begin(), r.flagged.end());
      if (s.exact) exact_total += static_cast<long long>(real_zero_count_exact(select(pair, c)));
    }
    const ZeroCensus z = zero_census(pooled, s.eps);
    std::string label;
    for (Component c : comps) label += component_name(c);
    std::vector<Cell> row{static_cast<long long>(k), label, static_cast<long long>(pooled.roots.size()),
                          static_cast<long long>(z.inside_open_disk), static_cast<long long>(z.on_circle_within_eps),
                          static_cast<long long>(z.outside), static_cast<long long>(z.real_zeros), z.eps,
                          static_cast<long long>(s.seed), z.min_circle_distance,
                          static_cast<long long>(pooled.flagged_count())};
    if (s.exact) row.emplace_back(exact_total);
    t.add(std::move(row));
  }
  emit(s, out, cfg, t);
  return kPass;
}

Json report_json(const InequalityReport& r) {
  Json o = Json::object();
  o["name"] = r.name;
  o["k"] = r.k;
  o["alpha"] = r.arc ? Json(r.arc->alpha()) : Json(nullptr);
  o["beta"] = r.arc ? Json(r.arc->beta()) : Json(nullptr);
  o["q"] = r.q ? Json(*r.q) : Json(nullptr);
  o["lhs"] = r.lhs;
  o["rhs"] = r.rhs;
  o["margin"] = r.margin;
  o["passed"] = r.passed;
  o["gated"] = r.gated;
  for (const auto& [key, v] : r.extras) o[key] = v;
  o["note"] = r.note;
  return o;
}

Table summary_table(const std::vector<InequalityReport>& reports) {
  Table t;
  t.columns = {"name", "k", "alpha", "beta", "q", "lhs", "rhs", "margin", "passed", "gated"};
  for (const auto& r : reports)
    t.add({r.name, static_cast<long long>(r.k), opt_cell(r.arc ? std::optional(r.arc->alpha()) : std::nullopt),
           opt_cell(r.arc ? std::optional(r.arc->beta()) : std::nullopt), opt_cell(r.q), r.lhs, r.rhs, r.margin,
           r.passed, r.gated});
  return t;
}

const std::vector<std::string>& verify_names() {
  static const std::vector<std::string> names{"lemma_3_1",   "lemma_3_2",   "bernstein", "theorem_2_1",
                                              "theorem_2_2", "theorem_1_3", "all"};
  return names;
}

int cmd_verify(const Settings& s, std::ostream& out, std::ostream& err) {
  const auto& names = verify_names();
  if (std::find(names.begin(), names.end(), s.check) == names.end())
    throw UsageError("unknown check '" + s.check + "'");
  const auto ks = parse_k_range(s.k);
  const auto qs = parse_real_list(s.q.empty() ? "0.25,1,2,4" : s.q);
  auto wants = [&](const std::string& name) {
    return s.check == name || (s.check == "all" && name != "theorem_1_3");
  };
  std::optional<Arc> fixed_arc;
  if (s.arc_given) fixed_arc = parse_arc(s.arc);

  std::vector<InequalityReport> reports;
  for (unsigned k : ks) {
    if (k >= 1 && wants("lemma_3_1")) reports.push_back(check_lemma_3_1(k));
    if (k >= 1 && wants("lemma_3_2")) reports.push_back(check_lemma_3_2(k));
    if (wants("bernstein")) reports.push_back(bernstein_ratio(k, s.count));
    if (!(wants("theorem_2_1") || wants("theorem_2_2") || wants("theorem_1_3"))) continue;
    std::vector<Arc> arcs;
    if (fixed_arc) {
      arcs.push_back(*fixed_arc);
    } else {
      auto rng = rng_for_k(s.seed, k);
      arcs = random_long_arcs(k, s.arcs, rng);
    }
    for (const Arc& arc : arcs) {
      if (wants("theorem_2_1")) reports.push_back(check_theorem_2_1(k, arc));
      if (wants("theorem_2_2"))
        for (auto& r : check_theorem_2_2(k, arc, qs)) reports.push_back(std::move(r));
      if (wants("theorem_1_3")) reports.push_back(theorem_1_3_experiment(k, arc));
    }
  }

  auto cfg = base_config("verify", s);
  cfg.add("check", s.check);
  cfg.add("k", s.k);
  cfg.add("arc", fixed_arc ? s.arc : "random");
  cfg.add("arcs", std::to_string(s.arcs));
  cfg.add("q", s.q.empty() ? "0.25,1,2,4" : s.q);
  cfg.add("count", count_text(s.count));

  const Table summary = summary_table(reports);
  auto write_reports = [&](std::ostream& os) {
    os << config_json(cfg).dump() << '\n';
    for (const auto& r : reports) os << report_json(r).dump() << '\n';
  };
  {
    Sink sink(out, s.out);
    if (s.format == "json") write_reports(sink.stream());
    else write_csv(sink.stream(), cfg, summary);
  }
  if (!s.out_dir.empty()) {
    std::filesystem::create_directories(s.out_dir);
    std::ofstream jf(std::filesystem::path(s.out_dir) / "reports.jsonl", std::ios::binary | std::ios::trunc);
    write_reports(jf);
    std::ofstream cf(std::filesystem::path(s.out_dir) / "summary.csv", std::ios::binary | std::ios::trunc);
    write_csv(cf, cfg, summary);
  }
  std::size_t failures = 0;
  for (const auto& r : reports)
    if (r.gated && !r.passed) {
      ++failures;
      err << "FAILED " << r.name << " k=" << r.k << (r.arc ? " arc=" + r.arc->to_string() : "")
          << (r.q ? " q=" + format_double(*r.q) : "") << " lhs=" << format_double(r.lhs)
          << " rhs=" << format_double(r.rhs) << '\n';
    }
  err << reports.size() << " checks, " << failures << " gated failures\n";
  return failures == 0 ? kPass : kGatedFailure;
}

int cmd_saffari(const Settings& s, std::ostream& out, std::ostream&) {
  const auto ks = parse_k_range(s.k);
  const auto qs = parse_real_list(s.q.empty() ? "1,2,4,6" : s.q);
  auto cfg = base_config("saffari", s);
  cfg.add("k", s.k);
  cfg.add("q", s.q.empty() ? "1,2,4,6" : s.q);
  cfg.add("count", count_text(s.count));
  Table t;
  t.columns = {"k", "q", "ratio", "ratio_q", "pq_discrepancy", "rel_step", "count", "flagged"};
  for (unsigned k : ks)
    for (double q : qs) {
      const auto r = saffari_ratio(k, q, s.count);
      t.add({static_cast<long long>(k), q, r.lhs, *r.extra("ratio_q"), *r.extra("pq_discrepancy"),
             *r.extra("rel_step"), static_cast<long long>(*r.extra("count")), !r.passed});
    }
  emit(s, out, cfg, t);
  return kPass;
}

int cmd_distribution(const Settings& s, std::ostream& out, std::ostream&) {
  const auto ks = parse_k_range(s.k);
  std::vector<Rectangle> rects;
  for (const auto& text : s.rects) {
    const auto p = split(text, ':');
    if (p.size() != 4) throw UsageError("rectangle must be x0:x1:y0:y1, got '" + text + "'");
    rects.push_back({parse_real(p[0]), parse_real(p[1]), parse_real(p[2]), parse_real(p[3])});
  }
  if (s.rects.empty()) rects = default_rectangles();
  std::vector<std::pair<double, double>> intervals;
  for (const auto& text : s.intervals) {
    const auto p = split(text, ':');
    if (p.size() != 2) throw UsageError("interval must be lo:hi, got '" + text + "'");
    intervals.emplace_back(parse_real(p[0]), parse_real(p[1]));
  }
  if (s.intervals.empty()) intervals.emplace_back(0.0, 0.5);
  auto cfg = base_config("distribution", s);
  cfg.add("k", s.k);
  cfg.add("bins", std::to_string(s.bins));
  cfg.add("count", count_text(s.count));
  Table t;
  t.columns = {"k", "kind", "index", "x0", "x1", "y0", "y1", "empirical", "expected"};
  const Cell none = std::string();
  for (unsigned k : ks) {
    const auto d = value_distribution(k, s.bins, rects, intervals, s.count);
    const auto kk = static_cast<long long>(k);
    t.add({kk, std::string("sup"), 0LL, none, none, none, none, d.sup_distance_to_uniform, 0.0});
    for (std::size_t b = 0; b < d.empirical_cdf.size(); ++b) {
      const double edge = static_cast<double>(b + 1) / static_cast<double>(d.bins);
      t.add({kk, std::string("cdf"), static_cast<long long>(b), 0.0, edge, none, none, d.empirical_cdf[b], edge});
    }
    for (std::size_t i = 0; i < d.rectangle_tests.size(); ++i) {
      const auto& r = d.rectangle_tests[i];
      t.add({kk, std::string("rect"), static_cast<long long>(i), r.rect.x0, r.rect.x1, r.rect.y0, r.rect.y1,
             r.empirical_measure, r.expected});
    }
    for (std::size_t i = 0; i < d.interval_tests.size(); ++i) {
      const auto& r = d.interval_tests[i];
      t.add({kk, std::string("interval"), static_cast<long long>(i), r.lo, r.hi, none, none, r.empirical_measure,
             r.expected});
    }
  }
  emit(s, out, cfg, t);
  return kPass;
}

int cmd_mercer(const Settings& s, std::ostream& out, std::ostream& err) {
  const CoefficientMode mode = s.odd_mode ? CoefficientMode::AllOdd : CoefficientMode::Littlewood;
  auto cfg = base_config("mercer", s);
  cfg.add("mode", s.odd_mode ? "all_odd" : "littlewood");
  Table t;
  t.columns = {"index", "degree", "m", "parity_case", "gcd_bits", "certified", "reason"};
  if (s.falsify > 0) {
    t.columns.push_back("min_circle_modulus");
    t.columns.push_back("roots_near_circle");
  }
  std::size_t failures = 0;
  auto add_row = [&](std::size_t index, const std::vector<long long>& a, bool gated, bool falsify) {
    const auto c = mercer_certificate(a, mode);
    std::vector<Cell> row{static_cast<long long>(index), static_cast<long long>(c.input_degree),
                          static_cast<long long>(c.m), c.parity_case, c.gcd.to_hex(),
                          c.certified_zero_free_on_circle, c.reason};
    bool ok = c.certified_zero_free_on_circle;
    if (s.falsify > 0) {
      if (falsify && a.size() >= 2) {
        const double minmod = circle_min_modulus(a);
        std::vector<double> d(a.begin(), a.end());
        RootOptions opt;
        opt.seed = s.seed;
        const RootSet roots = find_roots(std::span<const double>(d), opt);
        long long near = 0;
        for (const auto& z : roots.roots) near += std::abs(std::abs(z) - 1.0) < 1e-7 ? 1 : 0;
        row.emplace_back(minmod);
        row.emplace_back(near);
        ok = ok && minmod > 1e-6 && near == 0;
      } else {
        row.emplace_back(std::string());
        row.emplace_back(std::string());
      }
    }
    if (gated && !ok) {
      ++failures;
      err << "FAILED certificate for sample " << index << '\n';
    }
    t.add(std::move(row));
  };
  if (!s.coeffs.empty()) {
    cfg.add("coeffs", s.coeffs);
    add_row(0, parse_integer_list(s.coeffs), false, s.falsify > 0);
  } else {
    if (s.random == 0) throw UsageError("mercer needs --coeffs or --random N");
    if (s.degree < 2 || s.degree % 2 != 0) throw UsageError("--degree must be an even integer >= 2");
    if (s.odd_mode) throw UsageError("--random draws Littlewood polynomials; drop --odd");
    cfg.add("random", std::to_string(s.random));
    cfg.add("max_degree", std::to_string(s.degree));
    cfg.add("falsify", std::to_string(s.falsify));
    std::mt19937_64 rng(s.seed);
    const std::size_t max_m = s.degree / 2;
    std::size_t certified = 0;
    for (std::size_t i = 0; i < s.random; ++i) {
      const std::size_t m = 1 + static_cast<std::size_t>(rng() % max_m);
      const auto a = random_skew_reciprocal(m, rng);
      add_row(i, a, true, i < s.falsify);
      certified += std::get<bool>(t.rows.back()[5]) ? 1 : 0;
    }
    err << certified << "/" << s.random << " certified\n";
  }
  emit(s, out, cfg, t);
  return failures == 0 ? kPass : kGatedFailure;
}

int cmd_problem55(const Settings& s, std::ostream& out, std::ostream&) {
  const auto ks = parse_k_range(s.k);
  auto cfg = base_config("problem55", s);
  cfg.add("k", s.k);
  cfg.add("count", count_text(s.count));
  Table t;
  t.columns = {"k", "value", "ratio_sqrt_n", "count", "rel_step", "excluded_fraction", "flagged", "flag_reason"};
  for (unsigned k : ks) {
    const auto r = problem_5_5_quantity(k, s.count);
    t.add({static_cast<long long>(k), r.estimate.value, r.ratio, static_cast<long long>(r.estimate.count),
           r.estimate.rel_step, r.estimate.excluded_fraction, r.estimate.flagged, r.estimate.flag_reason});
  }
  emit(s, out, cfg, t);
  return kPass;
}

int cmd_bench(const Settings& s, std::ostream& out, std::ostream& err) {
  const unsigned k = single_k(s);
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a) { return std::chrono::duration<double>(clock::now() - a).count(); };
  std::uint64_t hash = 1469598103934665603ULL;
  auto mix = [&](const std::string& text) {
    for (unsigned char ch : text) hash = (hash ^ ch) * 1099511628211ULL;
  };

  auto t0 = clock::now();
  const auto pair = generate_pair(k);
  err << "generate " << format_double(seconds(t0)) << " s\n";
  for (std::size_t j = 0; j < pair.n; ++j) mix(std::to_string(pair.p[j]) + std::to_string(pair.q[j]));

  t0 = clock::now();
  const std::size_t count = s.count ? s.count : 16 * pair.n;
  const auto grid = eval_grid(pair, Arc::full(), count);
  err << "eval_grid " << format_double(seconds(t0)) << " s\n";
  for (std::size_t j = 0; j < count; j += std::max<std::size_t>(1, count / 256))
    mix(format_double(grid.values_p[j].real()) + format_double(grid.values_q[j].imag()));

  t0 = clock::now();
  const auto m2 = mq_arc(PairComponentFn{k, Component::P}, Arc::full(), 2.0, s.count);
  err << "mq_arc q=2 " << format_double(seconds(t0)) << " s\n";
  mix(format_double(m2.value));

  t0 = clock::now();
  const auto m0 = mahler_arc(PairComponentFn{k, Component::P}, Arc::full(), s.count);
  err << "mahler_arc " << format_double(seconds(t0)) << " s\n";
  mix(format_double(m0.value));

  auto cfg = base_config("bench", s);
  cfg.add("k", std::to_string(k));
  cfg.add("count", count_text(s.count));
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  Table t;
  t.columns = {"k", "m2", "m0", "checksum"};
  t.add({static_cast<long long>(k), m2.value, m0.value, std::string(hex)});
  emit(s, out, cfg, t);
  return kPass;
}

}  // namespace

// ---- public parsers ------------------------------------------------------

std::vector<unsigned> parse_k_range(const std::string& text) {
  auto parse_one = [&](const std::string& part) -> unsigned {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("bad k value '" + part + "' in '" + text + "'");
    const unsigned long v = std::stoul(part);
    if (v > kDefaultMaxOrder) throw ResourceLimitError("k = " + part + " exceeds the limit " + std::to_string(kDefaultMaxOrder));
    return static_cast<unsigned>(v);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_one(text)};
  const unsigned a = parse_one(text.substr(0, dots)), b = parse_one(text.substr(dots + 2));
  if (a > b) throw UsageError("empty k range '" + text + "'");
  std::vector<unsigned> ks;
  for (unsigned k = a; k <= b; ++k) ks.push_back(k);
  return ks;
}

double parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([+-]?)\s*(?:(\d+(?:\.\d*)?|\.\d+)\s*\*?\s*)?pi\s*(?:/\s*(\d+(?:\.\d*)?|\.\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double v = std::numbers::pi;
    if (m[2].matched) v *= std::stod(m[2].str());
    if (m[3].matched) {
      const double d = std::stod(m[3].str());
      if (d == 0.0) throw UsageError("division by zero in angle '" + text + "'");
      v /= d;
    }
    if (m[1].str() == "-") v = -v;
    return v;
  }
  return parse_real(text);
}

Arc parse_arc(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError("arc must be alpha:beta, got '" + text + "'");
  const double a = parse_angle(parts[0]), b = parse_angle(parts[1]);
  try {
    return Arc(a, b);
  } catch (const ContractError& e) {
    throw UsageError(std::string("invalid arc '") + text + "': " + e.what());
  }
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_real(p));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<long long> parse_integer_list(const std::string& text) {
  std::vector<long long> out;
  for (const auto& p : split(text, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(p, &used);
    } catch (const std::exception&) {
      throw UsageError("not an integer: '" + p + "'");
    }
    if (used != p.size()) throw UsageError("not an integer: '" + p + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

unsigned parse_threads(const std::string& text) {
  if (text == "auto") return 0;
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos || text.size() > 4)
    throw UsageError("--threads must be a positive integer or 'auto'");
  const unsigned v = static_cast<unsigned>(std::stoul(text));
  if (v == 0) throw UsageError("--threads must be a positive integer or 'auto'");
  return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Rudin-Shapiro polynomial experiments", "rsp"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", s.threads, "worker threads (N or auto)");
  app.add_option("--cache-dir", s.cache_dir, "coefficient cache directory (overrides RSP_CACHE_DIR)");
  app.add_option("--seed", s.seed, "random seed");
  app.add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", s.out, "output file (default stdout)");

  auto add_k = [&](CLI::App* sub, const char* help) { sub->add_option("--k", s.k, help); };
  auto add_arc = [&](CLI::App* sub) { sub->add_option("--arc", s.arc, "alpha:beta in radians, e.g. 0:pi/2"); };
  auto add_count = [&](CLI::App* sub) { sub->add_option("--count", s.count, "samples (0 = default)"); };

  auto* gen = app.add_subcommand("generate", "generate and cache P_k, Q_k");
  add_k(gen, "order or range a..b");
  gen->add_option("--out-dir", s.out_dir, "directory for coefficient files");
  gen->add_flag("--coeffs", s.coeffs_flag, "print coefficients");

  auto* ev = app.add_subcommand("eval", "evaluate P_k, Q_k on a grid");
  add_k(ev, "order");
  add_arc(ev);
  add_count(ev);
  ev->add_flag("--lattice", s.lattice, "grid without the half-step offset");
  ev->add_option("--dump", s.dump, "binary sample dump file");

  auto* nm = app.add_subcommand("norm", "M_q on an arc");
  add_k(nm, "order or range a..b");
  add_arc(nm);
  nm->add_option("--q", s.q, "comma-separated exponents");
  add_count(nm);
  nm->add_option("--component", s.component, "P or Q");
  nm->add_flag("--limit", s.limit, "treat --q as decreasing and append M_0");

  auto* mh = app.add_subcommand("mahler", "M_0 on an arc");
  add_k(mh, "order or range a..b");
  add_arc(mh);
  add_count(mh);
  mh->add_option("--component", s.component, "P or Q");
  mh->add_option("--exclusion-radius", s.exclusion_radius, "drop samples this close to near-zeros");
  mh->add_flag("--jensen", s.jensen, "compare against the root-based value");

  auto* rt = app.add_subcommand("roots", "all complex roots");
  add_k(rt, "order");
  rt->add_option("--component", s.component, "P or Q");
  rt->add_option("--coeffs", s.coeffs, "comma-separated integer coefficients instead of P_k/Q_k");
  rt->add_option("--tol", s.tol, "residual tolerance");
  rt->add_option("--max-iter", s.max_iter, "iteration limit");

  auto* cs = app.add_subcommand("census", "zero census");
  add_k(cs, "order or range a..b");
  cs->add_option("--component", s.component, "P, Q or PQ (pooled)");
  cs->add_option("--eps", s.eps, "band half-width around |z| = 1");
  cs->add_option("--tol", s.tol, "residual tolerance");
  cs->add_option("--max-iter", s.max_iter, "iteration limit");
  cs->add_flag("--exact", s.exact, "add the exact real-zero count");

  auto* vf = app.add_subcommand("verify", "proved inequalities");
  vf->add_option("check", s.check, "lemma_3_1, lemma_3_2, bernstein, theorem_2_1, theorem_2_2, theorem_1_3 or all");
  add_k(vf, "order or range a..b");
  auto* vf_arc = vf->add_option("--arc", s.arc, "fixed arc instead of random arcs");
  vf->add_option("--arcs", s.arcs, "random arcs per k");
  vf->add_option("--q", s.q, "comma-separated exponents");
  add_count(vf);
  vf->add_option("--out-dir", s.out_dir, "also write reports.jsonl and summary.csv here");

  auto* ds = app.add_subcommand("distribution", "value distribution of P_k / sqrt(2n)");
  add_k(ds, "order or range a..b");
  ds->add_option("--bins", s.bins, "CDF bins");
  ds->add_option("--rect", s.rects, "x0:x1:y0:y1 (repeatable)");
  ds->add_option("--interval", s.intervals, "lo:hi range of |P|^2/(2n) (repeatable)");
  add_count(ds);

  auto* sf = app.add_subcommand("saffari", "M_q ratio against the asymptotic constant");
  add_k(sf, "order or range a..b");
  sf->add_option("--q", s.q, "comma-separated exponents");
  add_count(sf);

  auto* mc = app.add_subcommand("mercer", "zero-freeness certificate for skew-reciprocal polynomials");
  mc->add_option("--coeffs", s.coeffs, "comma-separated integer coefficients");
  mc->add_option("--random", s.random, "number of random skew-reciprocal Littlewood polynomials");
  mc->add_option("--degree", s.degree, "maximum even degree for --random");
  mc->add_flag("--odd", s.odd_mode, "accept any odd coefficients");
  mc->add_option("--falsify", s.falsify, "numerically check the first N certificates");

  auto* p55 = app.add_subcommand("problem55", "log-measure of | |P_k|^2 - n |");
  add_k(p55, "order or range a..b");
  add_count(p55);

  auto* bn = app.add_subcommand("bench", "timings (stderr) and checksum (stdout)");
  add_k(bn, "order");
  add_count(bn);

  std::vector<std::string> storage{"rsp"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    set_thread_count(parse_threads(s.threads));
    s.arc_given = vf_arc->count() > 0;
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "generate") return cmd_generate(s, out, err);
    if (name == "eval") return cmd_eval(s, out, err);
    if (name == "norm") return cmd_norm(s, out, err);
    if (name == "mahler") return cmd_mahler(s, out, err);
    if (name == "roots") return cmd_roots(s, out, err);
    if (name == "census") return cmd_census(s, out, err);
    if (name == "verify") return cmd_verify(s, out, err);
    if (name == "distribution") return cmd_distribution(s, out, err);
    if (name == "saffari") return cmd_saffari(s, out, err);
    if (name == "mercer") return cmd_mercer(s, out, err);
    if (name == "problem55") return cmd_problem55(s, out, err);
    if (name == "bench") return cmd_bench(s, out, err);
    err << "usage error: unknown subcommand " << name << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const ContractError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const io::FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace rsp::cli
