#include "boundpop/cli.hpp"

#include "boundpop/bootstrap.hpp"
#include "boundpop/error.hpp"
#include "boundpop/estimator.hpp"
#include "boundpop/histogram.hpp"
#include "boundpop/parallel.hpp"
#include "boundpop/random.hpp"
#include "boundpop/report.hpp"
#include "boundpop/simulate.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>

namespace boundpop::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct RunConfig {
  std::string hist_path;
  std::string counts_path;
  int max_order = max_order_cap;
  double point_floor = 1e-8;
  int replicates = 1000;
  double ci_level = 0.95;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string format = "tsv";

  // simulate / bench
  std::string model = "mixture";
  std::string spec_path;
  std::vector<double> lambdas;
  std::vector<double> weights;
  double classes = 1e4;
  double alpha = 1.0;
  std::optional<double> total;
  std::size_t cells = 200;
  std::size_t genes = 2000;
  std::string out_path;

  std::string family;
  int which = 1;
  int bench_bootstrap = 0;
};

ReportFormat format_of(const RunConfig &cfg) {
  return cfg.format == "json" ? ReportFormat::json : ReportFormat::tsv;
}

EstimatorOptions estimator_options(const RunConfig &cfg) {
  return {.max_order = cfg.max_order, .point_floor = cfg.point_floor};
}

std::uint64_t resolve_seed(const RunConfig &cfg) {
  return cfg.seed ? *cfg.seed : entropy_seed();
}

std::uint64_t to_count(double x, const char *what) {
  if (!(x >= 0.0) || x > 1e12 || x != std::floor(x))
    throw Error(Errc::invalid_argument, std::string(what) + " must be a whole number");
  return static_cast<std::uint64_t>(x);
}

CountHistogram load_input(const RunConfig &cfg) {
  const bool counts = !cfg.counts_path.empty();
  const std::string &path = counts ? cfg.counts_path : cfg.hist_path;
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::malformed_input, "cannot open " + path);
  try {
    return counts ? parse_counts(in) : parse_histogram(in);
  } catch (const Error &e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

int cmd_estimate(const RunConfig &cfg, std::ostream &out) {
  const CountHistogram h = load_input(cfg);
  out << render(estimate_report(h, estimate(h, estimator_options(cfg))),
                format_of(cfg));
  return 0;
}

int cmd_bootstrap(const RunConfig &cfg, std::ostream &out) {
  const CountHistogram h = load_input(cfg);
  Report r = estimate_report(h, estimate(h, estimator_options(cfg)));
  BootstrapOptions opts;
  opts.replicates = cfg.replicates;
  opts.estimator = estimator_options(cfg);
  opts.seed = resolve_seed(cfg);
  opts.ci_level = cfg.ci_level;
  opts.threads = cfg.threads;
  add_bootstrap(r, bagged_estimate(h, opts));
  out << render(r, format_of(cfg));
  return 0;
}

// Fills model parameters from a JSON spec file; inline flags are the
// defaults it overrides.
void apply_spec_file(RunConfig &cfg) {
  if (cfg.spec_path.empty())
    return;
  std::ifstream in(cfg.spec_path);
  if (!in)
    throw Error(Errc::malformed_input, "cannot open " + cfg.spec_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    cfg.model = j.value("model", cfg.model);
    cfg.lambdas = j.value("lambdas", cfg.lambdas);
    cfg.weights = j.value("weights", cfg.weights);
    cfg.classes = j.value("classes", cfg.classes);
    cfg.alpha = j.value("alpha", cfg.alpha);
    if (j.contains("total"))
      cfg.total = j["total"].get<double>();
    cfg.cells = j.value("cells", cfg.cells);
    cfg.genes = j.value("genes", cfg.genes);
  } catch (const nlohmann::json::exception &e) {
    throw Error(Errc::malformed_input, cfg.spec_path + ": " + e.what());
  }
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream f(path);
  if (!f || !(f << text))
    throw Error(Errc::malformed_input, "cannot write " + path);
}

int cmd_simulate(RunConfig cfg, std::ostream &out) {
  apply_spec_file(cfg);
  const std::uint64_t seed = resolve_seed(cfg);
  Report r;
  r["model"] = cfg.model;
  r["seed"] = seed;

  if (cfg.model == "scrna") {
    if (cfg.out_path.empty())
      throw Error(Errc::invalid_argument, "scrna simulation needs --out PREFIX");
    ScrnaSpec spec;
    spec.cells = cfg.cells;
    spec.genes = cfg.genes;
    const ScrnaSample s = sample_scrna(spec, seed, cfg.threads);
    std::ostringstream triplets, truth;
    triplets << "cell\tgene\tcount\n";
    for (std::size_t c = 0; c < s.cells; ++c)
      for (std::size_t g = 0; g < s.genes; ++g)
        if (const auto y = s.counts[c * s.genes + g])
          triplets << c << '\t' << g << '\t' << y << '\n';
    truth << "cell\tsubpop\tbatch\tsize_factor\ttrue_dropout\tobserved_dropout\n";
    for (std::size_t c = 0; c < s.cells; ++c)
      truth << c << '\t' << int(s.subpop[c]) << '\t' << int(s.batch[c]) << '\t'
            << Report(s.size_factor[c]).dump() << '\t'
            << Report(s.true_dropout[c]).dump() << '\t'
            << Report(s.observed_dropout[c]).dump() << '\n';
    write_file(cfg.out_path + ".triplets.tsv", triplets.str());
    write_file(cfg.out_path + ".truth.tsv", truth.str());
    r["cells"] = s.cells;
    r["genes"] = s.genes;
    r["mean_expression"] = s.mean_expression;
    out << render(r, format_of(cfg));
    return 0;
  }

  SampleResult sample = [&] {
    const std::uint64_t classes = to_count(cfg.classes, "classes");
    if (cfg.model == "mixture")
      return sample_mixture({cfg.lambdas, cfg.weights, classes}, seed);
    if (cfg.model == "power-law")
      return sample_power_law(
          {classes, cfg.alpha, cfg.total.value_or(static_cast<double>(classes))},
          seed);
    throw Error(Errc::invalid_argument, "unknown model " + cfg.model);
  }();
  r["classes"] = sample.classes;
  r["n0_true"] = sample.n0_true;
  r["distinct"] = sample.histogram.distinct();
  r["individuals"] = sample.histogram.individuals();

  if (cfg.out_path.empty()) {
    // Truth rides along as comments so stdout stays a valid histogram.
    std::ostringstream text;
    for (const auto &[key, value] : r.items())
      text << "# " << key << '\t' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    render(text, sample.histogram);
    out << text.str();
  } else {
    write_file(cfg.out_path, render(sample.histogram));
    out << render(r, format_of(cfg));
  }
  return 0;
}

struct EstimatorStats {
  std::string name;
  std::vector<double> s_hat;
};

Report summarize(const EstimatorStats &stats, double truth) {
  std::vector<double> ok, err;
  double sq = 0.0;
  for (const double s : stats.s_hat)
    if (std::isfinite(s)) {
      ok.push_back(s);
      err.push_back(s - truth);
      sq += (s - truth) * (s - truth);
    }
  Report r;
  r["median"] = ok.empty() ? nan : median(ok);
  r["median_error"] = ok.empty() ? nan : median(err);
  r["rmse"] = ok.empty() ? nan : std::sqrt(sq / static_cast<double>(ok.size()));
  r["failed"] = stats.s_hat.size() - ok.size();
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

int bench_scrna(const RunConfig &cfg, std::uint64_t seed, std::ostream &out) {
  ScrnaSpec spec;
  spec.cells = cfg.cells;
  spec.genes = cfg.genes;
  const ScrnaSample s = sample_scrna(spec, seed, cfg.threads);
  const EstimatorOptions opts = estimator_options(cfg);
  std::vector<double> chao(s.cells), quad(s.cells);
  parallel_for(s.cells, cfg.threads, [&](std::size_t c) {
    chao[c] = dropout_correction(s.cell(c), [](const CountHistogram &h) {
      return chao_estimate(h);
    });
    quad[c] = dropout_correction(s.cell(c), [&](const CountHistogram &h) {
      return estimate(h, opts);
    });
  });
  Report r;
  r["family"] = "scrna";
  r["seed"] = seed;
  r["cells"] = s.cells;
  r["genes"] = s.genes;
  Report rows = Report::array();
  for (std::size_t c = 0; c < s.cells; ++c)
    rows.push_back({{"cell", c},
                    {"true", s.true_dropout[c]},
                    {"observed", s.observed_dropout[c]},
                    {"chao", chao[c]},
                    {"quadrature", quad[c]}});
  r["rows"] = rows;
  r["summary"]["correlation"] = {
      {"observed", pearson(s.observed_dropout, s.true_dropout)},
      {"chao", pearson(chao, s.true_dropout)},
      {"quadrature", pearson(quad, s.true_dropout)}};
  out << render(r, format_of(cfg));
  return 0;
}

int cmd_bench(const RunConfig &cfg, std::ostream &out) {
  const std::uint64_t seed = resolve_seed(cfg);
  if (cfg.family == "scrna")
    return bench_scrna(cfg, seed, out);

  const std::uint64_t classes = to_count(cfg.classes, "scale");
  std::function<SampleResult(std::uint64_t)> draw;
  if (cfg.family == "two-comp") {
    const MixtureSpec spec = two_component_case(cfg.which, classes);
    draw = [spec](std::uint64_t s) { return sample_mixture(spec, s); };
  } else if (cfg.family == "three-comp") {
    const MixtureSpec spec = three_component_case(cfg.which, classes);
    draw = [spec](std::uint64_t s) { return sample_mixture(spec, s); };
  } else if (cfg.family == "power-law") {
    const PowerLawSpec spec{classes, cfg.alpha,
                            cfg.total.value_or(static_cast<double>(classes))};
    spec.validate();
    draw = [spec](std::uint64_t s) { return sample_power_law(spec, s); };
  } else {
    throw Error(Errc::invalid_argument, "unknown bench family " + cfg.family);
  }

  const auto reps = static_cast<std::size_t>(std::max(cfg.replicates, 1));
  const EstimatorOptions opts = estimator_options(cfg);
  const bool bagging = cfg.bench_bootstrap >= 2;
  struct Row {
    bool sampled = false;
    std::uint64_t n0_true = 0;
    double chao = nan, quad = nan, bagged = nan;
    int order = 0;
  };
  std::vector<Row> rows(reps);

  std::optional<Error> failure;
  try {
    parallel_for(reps, cfg.threads, [&](std::size_t i) {
      const SampleResult sample = draw(derive_seed(seed, i));
      Row &row = rows[i];
      row.sampled = true;
      row.n0_true = sample.n0_true;
      const auto &h = sample.histogram;
      try {
        row.chao = chao_estimate(h).s_hat;
        const RichnessEstimate est = estimate(h, opts);
        row.quad = est.s_hat;
        row.order = est.order_used;
      } catch (const Error &) {
      }
      if (bagging) {
        BootstrapOptions b;
        b.replicates = cfg.bench_bootstrap;
        b.estimator = opts;
        b.seed = derive_seed(seed ^ 0xb0075742ULL, i);
        try {
          row.bagged = bagged_estimate(h, b).bagged_s_hat;
        } catch (const Error &) {
        }
      }
    });
  } catch (const Error &e) {
    failure = e;
  }

  Report r;
  r["family"] = cfg.family;
  if (cfg.family != "power-law")
    r["case"] = cfg.which;
  else
    r["alpha"] = cfg.alpha;
  r["classes"] = classes;
  r["replicates"] = reps;
  r["seed"] = seed;
  Report table = Report::array();
  EstimatorStats chao{"chao", {}}, quad{"quadrature", {}}, bagged{"bagged", {}};
  for (std::size_t i = 0; i < reps; ++i) {
    const Row &row = rows[i];
    if (!row.sampled)
      break;
    Report line = {{"rep", i},
                   {"truth", classes},
                   {"n0_true", row.n0_true},
                   {"chao", row.chao},
                   {"quadrature", row.quad},
                   {"order", row.order}};
    if (bagging)
      line["bagged"] = row.bagged;
    table.push_back(line);
    chao.s_hat.push_back(row.chao);
    quad.s_hat.push_back(row.quad);
    bagged.s_hat.push_back(row.bagged);
  }
  r["rows"] = table;
  const double truth = static_cast<double>(classes);
  r["summary"]["chao"] = summarize(chao, truth);
  r["summary"]["quadrature"] = summarize(quad, truth);
  if (bagging)
    r["summary"]["bagged"] = summarize(bagged, truth);
  out << render(r, format_of(cfg)) << std::flush;
  if (failure)
    throw *failure;
  return 0;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  RunConfig cfg;
  CLI::App app{"Lower-bound estimates of unobserved classes from count histograms"};
  app.name("boundpop");
  app.require_subcommand(1);

  const auto add_input = [&](CLI::App *sub) {
    auto *hist = sub->add_option("--hist", cfg.hist_path, "histogram file: \"j n_j\" per line")
                     ->check(CLI::ExistingFile);
    auto *counts = sub->add_option("--counts", cfg.counts_path, "raw counts file: one count per class")
                       ->check(CLI::ExistingFile);
    hist->excludes(counts);
    sub->callback([hist, counts] {
      if (hist->count() + counts->count() == 0)
        throw CLI::RequiredError("--hist or --counts");
    });
  };
  const auto add_estimator = [&](CLI::App *sub) {
    sub->add_option("--max-order", cfg.max_order, "largest quadrature order")
        ->check(CLI::Range(1, 1000));
    sub->add_option("--floor", cfg.point_floor, "smallest admissible quadrature point")
        ->check(CLI::PositiveNumber);
  };
  const auto add_common = [&](CLI::App *sub) {
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"tsv", "json"}));
  };
  const auto add_random = [&](CLI::App *sub) {
    sub->add_option("--seed", cfg.seed, "random seed (drawn and reported when absent)");
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  };

  auto *est = app.add_subcommand("estimate", "point estimate of unobserved classes");
  add_input(est);
  add_estimator(est);
  add_common(est);

  auto *boot = app.add_subcommand("bootstrap", "bagged estimate with variance and interval");
  add_input(boot);
  add_estimator(boot);
  add_common(boot);
  add_random(boot);
  boot->add_option("--reps", cfg.replicates, "bootstrap replicates")->check(CLI::Range(2, 100000000));
  boot->add_option("--ci", cfg.ci_level, "interval coverage")->check(CLI::Range(0.0, 1.0));

  auto *sim = app.add_subcommand("simulate", "draw a synthetic sample with known truth");
  add_common(sim);
  add_random(sim);
  sim->add_option("--model", cfg.model, "population model")
      ->check(CLI::IsMember({"mixture", "power-law", "scrna"}));
  sim->add_option("--spec", cfg.spec_path, "JSON model specification")->check(CLI::ExistingFile);
  sim->add_option("--lambdas", cfg.lambdas, "mixture Poisson rates")->delimiter(',');
  sim->add_option("--weights", cfg.weights, "mixture proportions")->delimiter(',');
  sim->add_option("--classes", cfg.classes, "number of classes S");
  sim->add_option("--alpha", cfg.alpha, "power-law exponent");
  sim->add_option("--total", cfg.total, "power-law expected sample size (default S)");
  sim->add_option("--cells", cfg.cells, "scRNA cells");
  sim->add_option("--genes", cfg.genes, "scRNA genes");
  sim->add_option("--out", cfg.out_path, "histogram path (scrna: output prefix)");

  auto *bench = app.add_subcommand("bench", "repeat an experiment family against known truth");
  add_estimator(bench);
  add_common(bench);
  add_random(bench);
  bench->add_option("family", cfg.family, "experiment family")
      ->required()
      ->check(CLI::IsMember({"two-comp", "three-comp", "power-law", "scrna"}));
  bench->add_option("--case", cfg.which, "mixture case")->check(CLI::Range(1, 3));
  bench->add_option("--scale", cfg.classes, "number of classes S");
  bench->add_option("--reps", cfg.replicates, "outer replicates");
  bench->add_option("--alpha", cfg.alpha, "power-law exponent");
  bench->add_option("--total", cfg.total, "power-law expected sample size (default S)");
  bench->add_option("--bootstrap", cfg.bench_bootstrap, "bootstrap replicates per bagged estimate");
  bench->add_option("--cells", cfg.cells, "scRNA cells");
  bench->add_option("--genes", cfg.genes, "scRNA genes");

  std::vector<std::string> argv_store{"boundpop"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char *> argv;
  for (auto &a : argv_store)
    argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "boundpop: " << e.what() << '\n';
    return 2;
  }

  try {
    if (est->parsed())
      return cmd_estimate(cfg, out);
    if (boot->parsed())
      return cmd_bootstrap(cfg, out);
    if (sim->parsed())
      return cmd_simulate(cfg, out);
    if (bench->parsed()) {
      if (bench->count("--reps") == 0)
        cfg.replicates = 100;
      return cmd_bench(cfg, out);
    }
  } catch (const Error &e) {
    err << "boundpop: error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

} // namespace boundpop::cli
