#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "tentative.hpp"

namespace tentative::cli {

namespace {

constexpr std::string_view kPLabel = "p value (probability of data this extreme under the baseline hypothesis)";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) { return fmt::format("{:.6g}", v); }
std::string pct(double v) { return fmt::format("{:.2f}%", 100 * v); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest(std::string_view bytes) { return fmt::format("fnv1a64:{:016x}", fnv1a64(bytes)); }

// Ordered key/value report with an optional histogram. Text output prints
// "label: value" lines, csv output prints "key,value" lines.
struct Report {
  struct Field {
    std::string key;
    std::string label;
    std::string value;
  };
  std::vector<Field> fields;
  std::vector<std::string> notes;
  std::optional<Histogram> histogram;
  std::string text_block;  // printed verbatim in text mode only
  std::string csv_block;   // printed verbatim after a blank line in csv mode

  void add(std::string key, std::string label, std::string value) {
    fields.push_back({std::move(key), std::move(label), std::move(value)});
  }
  void add(std::string key, std::string value) {
    std::string label = key;
    add(std::move(key), std::move(label), std::move(value));
  }
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

struct Common {
  std::uint64_t seed = 0;
  std::size_t replicates = 1000;
  unsigned threads = 1;
  std::string format = "text";
  std::string out_file;
};

void add_common(CLI::App* app, Common& c, bool replicates = true) {
  app->add_option("--seed", c.seed, "base seed (default 0, or $RESAMPLE_SEED)");
  if (replicates) app->add_option("--n", c.replicates, "number of replicates (default 1000)")->check(CLI::PositiveNumber);
  app->add_option("--threads", c.threads, "worker threads, 0 = all cores (results do not depend on it)");
  app->add_option("--format", c.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  app->add_option("--out", c.out_file, "write the histogram as CSV to this file");
}

struct Manifest {
  std::string subcommand;
  std::string flags;
  std::uint64_t seed = 0;
  std::string seed_source;
  std::optional<std::size_t> replicates;
  std::string input = "none";
};

void write_report(const Manifest& m, const Report& r, const Common& c, std::ostream& out) {
  std::vector<Report::Field> fields = {
      {"manifest.subcommand", "command", m.subcommand},
      {"manifest.flags", "flags", m.flags},
      {"manifest.seed", "seed", fmt::format("{} ({})", m.seed, m.seed_source)},
      {"manifest.replicates", "replicates", m.replicates ? std::to_string(*m.replicates) : "n/a"},
      {"manifest.version", "version", std::string(kVersion)},
      {"manifest.input", "input", m.input},
  };
  fields.insert(fields.end(), r.fields.begin(), r.fields.end());

  std::string histogram_csv;
  if (r.histogram) {
    std::ostringstream h;
    r.histogram->write_csv(h);
    histogram_csv = h.str();
    if (!c.out_file.empty()) {
      std::ofstream f(c.out_file, std::ios::binary);
      if (!f) throw Error("cannot write '" + c.out_file + "'");
      f << histogram_csv;
      fields.push_back({"histogram.file", "histogram written to", c.out_file});
    }
  }

  if (c.format == "csv") {
    out << "key,value\n";
    for (const auto& f : fields) out << csv_field(f.key) << ',' << csv_field(f.value) << '\n';
    for (const auto& n : r.notes) out << "note," << csv_field(n) << '\n';
    if (!r.csv_block.empty()) out << '\n' << r.csv_block;
    if (r.histogram && c.out_file.empty()) out << '\n' << histogram_csv;
    return;
  }

  std::size_t width = 0;
  for (const auto& f : fields)
    if (f.label.size() <= 32) width = std::max(width, f.label.size());
  for (const auto& f : fields)
    out << f.label << ':' << std::string(f.label.size() < width ? width - f.label.size() + 1 : 1, ' ') << f.value << '\n';
  for (const auto& n : r.notes) out << "note: " << n << '\n';
  if (!r.text_block.empty()) out << '\n' << r.text_block;
  if (r.histogram && c.out_file.empty()) {
    out << "\nhistogram (bin width " << num(r.histogram->bin_width()) << ", bar centers):\n";
    r.histogram->write_ascii(out);
  }
}

std::string join_flags(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (!s.empty()) s += ' ';
    const std::string& a = args[i];
    if (a.empty() || a.find_first_of(" \t\"'") != std::string::npos) {
      s += '"';
      for (char ch : a) {
        if (ch == '"' || ch == '\\') s += '\\';
        s += ch;
      }
      s += '"';
    } else {
      s += a;
    }
  }
  return s;
}

std::pair<double, double> parse_pair(const std::string& text, std::string_view what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError(std::string(what) + " expects two comma-separated numbers");
  const auto a = csv::parse_number(std::string_view(text).substr(0, comma));
  const auto b = csv::parse_number(std::string_view(text).substr(comma + 1));
  if (!a || !b) throw UsageError("cannot parse '" + text + "' for " + std::string(what));
  return {*a, *b};
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::string_view rest = text;
  for (;;) {
    const auto comma = rest.find(',');
    out.push_back(Rational::parse(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Data sources

struct DataSource {
  std::string fixture;
  std::string csv_path;
  std::string value_col = "value";
  std::string group_col;
  std::string x_col;
  std::string y_col;

  void add_to(CLI::App* app) {
    app->add_option("--fixture", fixture, "built-in dataset (see the fixtures command)");
    app->add_option("--csv", csv_path, "CSV file with a header row");
    app->add_option("--value-col", value_col, "value column name (default 'value')");
    app->add_option("--group-col", group_col, "group column name (two distinct labels)");
    app->add_option("--x-col", x_col, "first column of paired data");
    app->add_option("--y-col", y_col, "second column of paired data");
  }
};

using Loaded = std::variant<Sample, GroupedSample, PairedSample, PopulationVector>;

Loaded load(const DataSource& src, std::string& input_desc) {
  if (src.fixture.empty() == src.csv_path.empty()) throw UsageError("give exactly one of --fixture or --csv");
  if (!src.fixture.empty()) {
    const Fixture& f = find_fixture(src.fixture);
    input_desc = "fixture:" + f.name + " " + digest(fixture_csv(f));
    return std::visit([](const auto& p) -> Loaded { return p; }, f.payload);
  }
  std::ifstream in(src.csv_path, std::ios::binary);
  if (!in) throw Error("cannot open '" + src.csv_path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  input_desc = "file:" + src.csv_path + " " + digest(bytes);
  std::istringstream s(bytes);
  if (!src.x_col.empty() || !src.y_col.empty()) {
    if (src.x_col.empty() || src.y_col.empty()) throw UsageError("paired data needs both --x-col and --y-col");
    const csv::Table t = csv::parse(s);
    return PairedSample(t.numbers(t.column(src.x_col)), t.numbers(t.column(src.y_col)));
  }
  auto data = load_csv(s, src.value_col,
                       src.group_col.empty() ? std::nullopt : std::optional<std::string_view>(src.group_col));
  return std::visit([](auto& d) -> Loaded { return std::move(d); }, data);
}

StatisticKind parse_stat(const std::string& s) {
  if (s == "mean") return StatisticKind::mean;
  if (s == "mean-diff") return StatisticKind::mean_difference;
  if (s == "prop-diff") return StatisticKind::proportion_difference;
  if (s == "pearson") return StatisticKind::pearson_correlation;
  throw UsageError("unknown statistic '" + s + "'");
}

void describe_groups(Report& r, const GroupedSample& g) {
  for (std::size_t i = 0; i < 2; ++i)
    r.add(fmt::format("group.{}", i + 1), fmt::format("group {}", i + 1),
          fmt::format("{} (n={}, mean={})", g.names()[i], g.count(i), num(g.mean(i))));
  r.add("direction", "difference", g.names()[0] + " minus " + g.names()[1]);
}

// ---------------------------------------------------------------------------
// Commands

struct ShuffleArgs {
  DataSource src;
  std::string stat = "mean-diff";
  std::string sides = "two-sided";
  bool exact = false;
  double bin_width = 0;
};

Report cmd_shuffle(const ShuffleArgs& a, const Common& c, Manifest& m) {
  const Loaded data = load(a.src, m.input);
  const StatisticKind stat = parse_stat(a.stat);
  const Sidedness sides = a.sides == "greater" ? Sidedness::greater
                          : a.sides == "less"  ? Sidedness::less
                                               : Sidedness::two_sided;
  const ReplicatePlan plan{c.replicates, c.seed, c.threads};
  Report r;
  r.add("statistic", std::string(to_string(stat)));
  r.add("sidedness", std::string(to_string(sides)));

  auto finish_exact = [&](const ExactTestResult& ex, std::string_view what) {
    m.replicates.reset();
    r.add("observed", num(ex.observed));
    r.add("method", fmt::format("exact enumeration of all {} {}", ex.assignments, what));
    r.add("p_value", std::string(kPLabel), fmt::format("{}/{} = {}", ex.extreme_count, ex.assignments, num(ex.p_value())));
  };
  auto finish = [&](const TestReport& t) {
    r.add("observed", num(t.observed()));
    r.add("method", fmt::format("{} shuffles", t.replicates()));
    r.add("extreme_count", "replicates at least as extreme", std::to_string(t.extreme_count));
    r.add("p_value", std::string(kPLabel), num(t.p_value));
    r.histogram = t.distribution.histogram(a.bin_width > 0 ? a.bin_width
                                           : stat == StatisticKind::pearson_correlation ? 0.1
                                                                                        : 2.0);
  };

  if (const auto* g = std::get_if<GroupedSample>(&data)) {
    if (stat == StatisticKind::pearson_correlation || stat == StatisticKind::mean)
      throw Error("statistic '" + a.stat + "' does not apply to grouped data");
    describe_groups(r, *g);
    if (a.exact)
      finish_exact(enumerate_exact(*g, stat, sides), "group assignments");
    else
      finish(shuffle_test(*g, stat, plan, sides));
  } else if (const auto* p = std::get_if<PairedSample>(&data)) {
    if (stat != StatisticKind::pearson_correlation) throw Error("paired data needs --stat pearson");
    r.add("pairs", std::to_string(p->size()));
    if (a.exact)
      finish_exact(enumerate_exact_paired(*p, sides), "orderings");
    else
      finish(shuffle_test_paired(*p, plan, sides));
  } else {
    throw Error("the shuffle test needs grouped data (--group-col) or paired data (--x-col/--y-col)");
  }
  r.notes.push_back("the seed is part of the result: rerunning with other seeds until a p value looks better is "
                    "cherry-picking");
  return r;
}

struct BootstrapArgs {
  DataSource src;
  std::string stat;
  double level = 0.95;
  std::vector<double> tails;
  bool strict = false;
  std::string bounds;
  double bin_width = 0;
};

Report cmd_bootstrap(const BootstrapArgs& a, const Common& c, Manifest& m) {
  const Loaded data = load(a.src, m.input);
  const ReplicatePlan plan{c.replicates, c.seed, c.threads};
  Report r;
  ResampleDistribution dist = std::visit(
      [&](const auto& d) -> ResampleDistribution {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Sample>) {
          return bootstrap(d, a.stat.empty() ? StatisticKind::mean : parse_stat(a.stat), plan);
        } else if constexpr (std::is_same_v<T, GroupedSample>) {
          describe_groups(r, d);
          return bootstrap(d, a.stat.empty() ? StatisticKind::mean_difference : parse_stat(a.stat), plan);
        } else if constexpr (std::is_same_v<T, PairedSample>) {
          return bootstrap(d, a.stat.empty() ? StatisticKind::pearson_correlation : parse_stat(a.stat), plan);
        } else {
          throw Error("the bootstrap needs a sample, grouped sample or paired sample");
        }
      },
      data);

  SummaryOptions opt;
  opt.level = a.level;
  for (double t : a.tails) opt.tails.push_back({t, a.strict ? TailDirection::greater : TailDirection::at_least});
  if (!a.bounds.empty()) {
    const auto [lo, hi] = parse_pair(a.bounds, "--bounds");
    if (!(lo < hi)) throw UsageError("--bounds needs MIN < MAX");
    opt.bounds = ScaleBounds{lo, hi};
  }
  opt.bin_width = a.bin_width > 0 ? a.bin_width : dist.statistic == StatisticKind::pearson_correlation ? 0.1 : 2.0;
  const BootstrapReport rep = summarize(std::move(dist), opt);
  const auto& d = rep.diagnostics;

  r.add("statistic", std::string(to_string(rep.distribution.statistic)));
  r.add("sample_size", "sample size", std::to_string(rep.distribution.sample_size));
  r.add("observed", num(rep.distribution.observed));
  r.add("interval", fmt::format("{:g}% percentile interval", 100 * rep.interval.level),
        fmt::format("{} to {}", num(rep.interval.low), num(rep.interval.high)));
  for (const auto& t : rep.tails)
    r.add(fmt::format("tail.{}{}", t.query.direction == TailDirection::at_least ? "ge" : "gt", num(t.query.threshold)),
          fmt::format("P(value {} {})", t.query.direction == TailDirection::at_least ? ">=" : ">", num(t.query.threshold)),
          num(t.probability));
  r.add("redraws", "redrawn degenerate replicates", std::to_string(rep.distribution.redraws));
  r.add("diag.mean", "resample mean", num(d.mean));
  r.add("diag.median", "resample median", num(d.median));
  r.add("diag.stdev", "resample stdev", num(d.stdev));
  r.add("diag.mean_median_gap", "|mean - median| / stdev", num(d.mean_median_gap));
  r.add("diag.skewness", "skewness", num(d.skewness));
  r.add("diag.asymmetric", "asymmetry flag", d.asymmetric ? "yes" : "no");
  if (d.bounds) {
    r.add("diag.reflected_out_of_bounds", "reflected mass outside scale", num(d.reflected_out_of_bounds));
    r.add("diag.bound_violation", "scale violation flag", d.bound_violation ? "yes" : "no");
  }
  if (d.asymmetric)
    r.notes.push_back(fmt::format("resample distribution is skewed (|skewness| > {}); reading it as a confidence "
                                  "distribution is doubtful",
                                  num(d.skewness_threshold)));
  if (d.bound_violation)
    r.notes.push_back("the mirrored distribution puts probability on parameter values outside the scale");
  if (d.small_sample)
    r.notes.push_back(fmt::format("sample of {} is small for a guessed population", d.sample_size));
  r.histogram = rep.histogram;
  return r;
}

struct ClipArgs {
  std::string ci;
  double p = -1;
  double estimate = 0;
  double null_value = 0;
  double level = 0.95;
  std::string family = "normal";
  int df = 0;
  bool log_scale = false;
  std::vector<std::string> queries;
  double asymmetry_threshold = kAsymmetryThreshold;
  std::string table;
};

Report cmd_clip(const ClipArgs& a, const CLI::App& app) {
  Report r;
  if (!a.table.empty()) {
    std::vector<double> cells;
    std::string_view rest = a.table;
    for (;;) {
      const auto comma = rest.find(',');
      const auto v = csv::parse_number(rest.substr(0, comma));
      if (!v) throw UsageError("--table expects A,B,C,D counts");
      cells.push_back(*v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 4) throw UsageError("--table expects exactly four counts A,B,C,D");
    const TwoByTwo t(cells[0], cells[1], cells[2], cells[3]);
    r.add("odds_ratio", "odds ratio (A/B)/(C/D)", num(odds_ratio(t)));
    r.add("risk_ratio", "risk ratio (A/(A+B))/(C/(C+D))", num(risk_ratio(t)));
  }

  const bool have_ci = !a.ci.empty();
  const bool have_p = app.count("--p") > 0;
  const bool have_estimate = app.count("--estimate") > 0;
  if (!have_ci && !have_p) {
    if (a.table.empty()) throw UsageError("clip needs --ci LOW,HIGH or --p P --estimate E (or --table)");
    return r;
  }
  if (have_p && !have_estimate) throw UsageError("--p needs --estimate");

  DistributionFamily family = DistributionFamily::normal();
  if (a.family == "t") {
    if (app.count("--df") == 0) throw UsageError("--family t needs --df");
    family = DistributionFamily::student_t(a.df);
  } else if (app.count("--df") > 0) {
    throw UsageError("--df only applies to --family t");
  }
  const Scale scale = a.log_scale ? Scale::log : Scale::raw;

  std::vector<Event> events;
  for (const auto& q : a.queries) events.push_back(Event::parse(q));
  if (events.empty()) {
    events.push_back(Event::greater_than(a.null_value));
    events.push_back(Event::less_than(a.null_value));
  }

  std::vector<std::pair<std::string, CalibratedDistribution>> routes;
  if (have_ci) {
    const auto [lo, hi] = parse_pair(a.ci, "--ci");
    routes.emplace_back("ci", calibrate_from_interval(lo, hi, a.level, family, scale));
  }
  if (have_p) routes.emplace_back("p", calibrate_from_p(a.estimate, a.p, a.null_value, family, scale));

  r.add("family", family.name());
  r.add("scale", a.log_scale ? "log" : "raw");
  for (const auto& [name, dist] : routes) {
    const std::string route = name == "ci" ? "from interval" : "from p value";
    r.add(name + ".center", route + ": center", num(dist.center()));
    r.add(name + ".se", route + ": standard error", num(dist.se()));
    for (const auto& e : events)
      r.add(name + ".P(" + e.describe() + ")", route + ": P(" + e.describe() + ")", pct(probability(dist, e)));
  }
  if (have_ci && have_estimate)
    if (auto w = asymmetry_warning(routes.front().second, a.estimate, a.asymmetry_threshold)) r.notes.push_back(*w);
  r.notes.push_back("tentative probabilities: they assume a symmetric sampling distribution and flat priors");
  return r;
}

struct BayesArgs {
  std::vector<std::string> hypotheses;
  std::vector<std::string> updates;
  bool worlds = false;
  bool full = false;
};

Hypothesis parse_hypothesis(const std::string& text) {
  const auto last = text.rfind(':');
  const auto mid = last == std::string::npos || last == 0 ? std::string::npos : text.rfind(':', last - 1);
  if (mid == std::string::npos || mid == 0) throw UsageError("--hypothesis expects NAME:PRIOR:LIKELIHOOD");
  return {text.substr(0, mid), Rational::parse(std::string_view(text).substr(mid + 1, last - mid - 1)),
          Rational::parse(std::string_view(text).substr(last + 1))};
}

Report cmd_bayes(const BayesArgs& a, const Common& c) {
  std::vector<Hypothesis> hs;
  for (const auto& h : a.hypotheses) hs.push_back(parse_hypothesis(h));
  HypothesisSet set(std::move(hs));
  Report r;

  auto emit_round = [&](const HypothesisSet& h, std::size_t round) {
    const std::string prefix = fmt::format("round{}.", round);
    r.add(prefix + "evidence", fmt::format("round {} P(data)", round), h.evidence().str());
    for (const auto& p : posterior(h))
      r.add(prefix + "posterior." + p.name, fmt::format("round {} posterior {}", round, p.name),
            fmt::format("{} ({})", p.probability.str(), pct(p.probability.to_double())));
    if (a.worlds) {
      const WorldTableau t = render_worlds(h, !a.full);
      r.add(prefix + "worlds.total", fmt::format("round {} worlds", round), t.total_worlds.str());
      for (const auto& row : t.rows)
        r.add(prefix + "worlds." + row.name, fmt::format("round {} {} worlds/survivors", round, row.name),
              row.worlds.str() + "/" + row.survivors.str());
      if (c.format == "text") {
        std::ostringstream grid;
        grid << "round " << round << ":\n";
        write_world_grid(grid, t);
        r.text_block += grid.str();
      }
    }
  };

  emit_round(set, 1);
  std::size_t round = 1;
  for (const auto& u : a.updates) {
    const auto lik = parse_rational_list(u);
    set = sequential_update(set, lik);
    emit_round(set, ++round);
  }
  return r;
}

struct MonteCarloArgs {
  unsigned trials = 8;
  std::string p = "1/2";
  std::string event = "exactly";
  unsigned k = 4;
};

Report cmd_montecarlo(const MonteCarloArgs& a, const Common& c) {
  BernoulliExperiment e;
  e.trials = a.trials;
  e.success_probability = Rational::parse(a.p);
  e.event = a.event == "at-least" ? CountEvent::at_least : a.event == "at-most" ? CountEvent::at_most : CountEvent::exactly;
  e.k = a.k;
  if (e.k > e.trials) throw Error("--k exceeds --trials");
  const Rational exact = e.exact();
  const BernoulliEstimate est = simulate_bernoulli(e, {c.replicates, c.seed, c.threads});
  const double pe = exact.to_double();
  Report r;
  r.add("experiment", fmt::format("{} trials with success probability {}, event: {} {}", e.trials,
                                  e.success_probability.str(), to_string(e.event), e.k));
  r.add("exact", "exact probability", fmt::format("{} ({})", exact.str(), pct(pe)));
  r.add("hits", "runs with the event", std::to_string(est.hits));
  r.add("estimate", "simulated probability", num(est.estimate()));
  r.add("standard_error", "Monte Carlo standard error", num(std::sqrt(pe * (1 - pe) / static_cast<double>(est.runs))));
  return r;
}

struct PollArgs {
  std::string fixture;
  std::size_t ones = 0;
  std::size_t zeros = 0;
  std::size_t k = 20;
  std::string mode = "without";
  double level = 0.95;
  double bin_width = 0.05;
};

Report cmd_poll(const PollArgs& a, const Common& c, const CLI::App& app, Manifest& m) {
  const bool counts = app.count("--ones") > 0 || app.count("--zeros") > 0;
  if (counts && !a.fixture.empty()) throw UsageError("give --fixture or --ones/--zeros, not both");
  PopulationVector pop = PopulationVector::from_counts(1, 0);
  if (counts) {
    pop = PopulationVector::from_counts(a.ones, a.zeros);
    m.input = fmt::format("population:{} ones,{} zeros", a.ones, a.zeros);
  } else {
    const Fixture& f = find_fixture(a.fixture.empty() ? "poll500" : a.fixture);
    const auto* p = std::get_if<PopulationVector>(&f.payload);
    if (!p) throw Error("fixture '" + f.name + "' is not a population");
    pop = *p;
    m.input = "fixture:" + f.name + " " + digest(fixture_csv(f));
  }
  const ResampleMode mode = a.mode == "with" ? ResampleMode::with_replacement : ResampleMode::without_replacement;
  const PollResult res = simulate_poll(pop, a.k, mode, {c.replicates, c.seed, c.threads}, a.level);
  Report r;
  r.add("population", fmt::format("{} electors, true proportion {}", pop.size(), num(pop.proportion())));
  r.add("poll_size", "poll size", std::to_string(a.k));
  r.add("mode", std::string(to_string(mode)));
  r.add("range", "range of poll results", fmt::format("{} to {}", num(res.min), num(res.max)));
  r.add("interval", fmt::format("{:g}% interval (percentiles)", 100 * res.interval.level),
        fmt::format("{} to {}", num(res.interval.low), num(res.interval.high)));
  r.histogram = Histogram(res.proportions, a.bin_width);
  return r;
}

Report cmd_fixtures(const std::string& name) {
  Report r;
  if (!name.empty()) {
    const Fixture& f = find_fixture(name);
    r.add("name", f.name);
    r.add("description", f.description);
    r.text_block = fixture_csv(f);
    r.csv_block = r.text_block;
    return r;
  }
  for (const auto& f : fixtures()) r.add(f.name, f.description);
  return r;
}

}  // namespace

Environment Environment::from_process() {
  Environment env;
  if (const char* s = std::getenv("RESAMPLE_SEED")) env.resample_seed = s;
  return env;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
  CLI::App app{"Resampling inference, bootstrap confidence distributions and tentative probabilities"};
  app.name("tentative");
  app.require_subcommand(1);

  Common common;
  ShuffleArgs shuffle_args;
  BootstrapArgs boot_args;
  ClipArgs clip_args;
  BayesArgs bayes_args;
  MonteCarloArgs mc_args;
  PollArgs poll_args;
  std::string fixture_name;

  auto* shuffle_cmd = app.add_subcommand("shuffle-test", "shuffle (permutation) test of a group difference or correlation");
  shuffle_args.src.add_to(shuffle_cmd);
  shuffle_cmd->add_option("--stat", shuffle_args.stat, "mean-diff, prop-diff or pearson")
      ->check(CLI::IsMember({"mean-diff", "prop-diff", "pearson"}));
  shuffle_cmd->add_option("--sides", shuffle_args.sides, "two-sided, greater or less")
      ->check(CLI::IsMember({"two-sided", "greater", "less"}));
  shuffle_cmd->add_flag("--exact", shuffle_args.exact, "enumerate every assignment instead of sampling");
  shuffle_cmd->add_option("--bin-width", shuffle_args.bin_width, "histogram bin width")->check(CLI::PositiveNumber);
  add_common(shuffle_cmd, common);

  auto* boot_cmd = app.add_subcommand("bootstrap", "bootstrap confidence distribution");
  boot_args.src.add_to(boot_cmd);
  boot_cmd->add_option("--stat", boot_args.stat, "mean, mean-diff, prop-diff or pearson")
      ->check(CLI::IsMember({"mean", "mean-diff", "prop-diff", "pearson"}));
  boot_cmd->add_option("--level", boot_args.level, "interval level (default 0.95)");
  boot_cmd->add_option("--tail", boot_args.tails, "report P(value >= X); repeatable");
  boot_cmd->add_flag("--strict", boot_args.strict, "tail probabilities use > instead of >=");
  boot_cmd->add_option("--bounds", boot_args.bounds, "MIN,MAX of the measurement scale");
  boot_cmd->add_option("--bin-width", boot_args.bin_width, "histogram bin width")->check(CLI::PositiveNumber);
  add_common(boot_cmd, common);

  auto* clip_cmd = app.add_subcommand("clip", "tentative probabilities from a confidence interval or p value");
  clip_cmd->add_option("--ci", clip_args.ci, "LOW,HIGH of the reported interval");
  clip_cmd->add_option("--p", clip_args.p, "two-sided p value");
  clip_cmd->add_option("--estimate", clip_args.estimate, "point estimate");
  clip_cmd->add_option("--null", clip_args.null_value, "baseline value (0 for differences, 1 for ratios)");
  clip_cmd->add_option("--level", clip_args.level, "interval level (default 0.95)");
  clip_cmd->add_option("--family", clip_args.family, "normal or t")->check(CLI::IsMember({"normal", "t"}));
  clip_cmd->add_option("--df", clip_args.df, "degrees of freedom for --family t");
  clip_cmd->add_flag("--log-scale", clip_args.log_scale, "calibrate ratios on the log scale");
  clip_cmd->add_option("--query", clip_args.queries, "'gt X', 'lt X', 'between X1,X2' or 'outside X1,X2'; repeatable");
  clip_cmd->add_option("--asymmetry-threshold", clip_args.asymmetry_threshold,
                       "warn when |midpoint - estimate| exceeds this many standard errors");
  clip_cmd->add_option("--table", clip_args.table, "A,B,C,D counts for odds and risk ratios");
  add_common(clip_cmd, common, false);

  auto* bayes_cmd = app.add_subcommand("bayes", "exact Bayes' theorem over discrete hypotheses");
  bayes_cmd->add_option("--hypothesis", bayes_args.hypotheses, "NAME:PRIOR:LIKELIHOOD; repeatable")->required();
  bayes_cmd->add_option("--update", bayes_args.updates, "L1,L2,... likelihoods for another round; repeatable");
  bayes_cmd->add_flag("--worlds", bayes_args.worlds, "show the possible-worlds tableau");
  bayes_cmd->add_flag("--full-tableau", bayes_args.full, "use lcm(priors) * lcm(likelihoods) worlds");
  add_common(bayes_cmd, common, false);

  auto* mc_cmd = app.add_subcommand("montecarlo", "simulate runs of yes/no trials");
  mc_cmd->add_option("--trials", mc_args.trials, "trials per run (default 8)")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--p", mc_args.p, "success probability as a fraction or decimal (default 1/2)");
  mc_cmd->add_option("--event", mc_args.event, "exactly, at-least or at-most")
      ->check(CLI::IsMember({"exactly", "at-least", "at-most"}));
  mc_cmd->add_option("--k", mc_args.k, "success count of the event (default 4)");
  add_common(mc_cmd, common);

  auto* poll_cmd = app.add_subcommand("poll", "simulate opinion polls from a finite electorate");
  poll_cmd->add_option("--fixture", poll_args.fixture, "population fixture (default poll500)");
  poll_cmd->add_option("--ones", poll_args.ones, "electors coded 1");
  poll_cmd->add_option("--zeros", poll_args.zeros, "electors coded 0");
  poll_cmd->add_option("--k", poll_args.k, "electors per poll (default 20)")->check(CLI::PositiveNumber);
  poll_cmd->add_option("--mode", poll_args.mode, "with or without replacement")->check(CLI::IsMember({"with", "without"}));
  poll_cmd->add_option("--level", poll_args.level, "interval level (default 0.95)");
  poll_cmd->add_option("--bin-width", poll_args.bin_width, "histogram bin width")->check(CLI::PositiveNumber);
  add_common(poll_cmd, common);

  auto* fixtures_cmd = app.add_subcommand("fixtures", "list the built-in datasets");
  fixtures_cmd->add_option("--name", fixture_name, "print one fixture as CSV");
  add_common(fixtures_cmd, common, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    Manifest m;
    m.subcommand = sub->get_name();
    m.flags = join_flags(args);
    if (sub->count("--seed") > 0) {
      m.seed_source = "flag";
    } else if (env.resample_seed) {
      const auto parsed = CLI::detail::lexical_cast(*env.resample_seed, common.seed);
      if (!parsed) throw UsageError("RESAMPLE_SEED is not an unsigned integer");
      m.seed_source = "RESAMPLE_SEED";
    } else {
      m.seed_source = "default";
    }
    m.seed = common.seed;
    if (sub == shuffle_cmd || sub == boot_cmd || sub == mc_cmd || sub == poll_cmd) m.replicates = common.replicates;

    Report report;
    if (sub == shuffle_cmd) report = cmd_shuffle(shuffle_args, common, m);
    else if (sub == boot_cmd) report = cmd_bootstrap(boot_args, common, m);
    else if (sub == clip_cmd) report = cmd_clip(clip_args, *clip_cmd);
    else if (sub == bayes_cmd) report = cmd_bayes(bayes_args, common);
    else if (sub == mc_cmd) report = cmd_montecarlo(mc_args, common);
    else if (sub == poll_cmd) report = cmd_poll(poll_args, common, *poll_cmd, m);
    else report = cmd_fixtures(fixture_name);

    std::ostringstream buffer;
    write_report(m, report, common, buffer);
    out << buffer.str();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace tentative::cli
