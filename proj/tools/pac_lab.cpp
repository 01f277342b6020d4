// pac-lab: config-driven command line for the triplet-comparison learning
// laboratory. Every experiment is seeded and emits replayable CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "paclab/adversary.hpp"
#include "paclab/binomial.hpp"
#include "paclab/bounds.hpp"
#include "paclab/claims.hpp"
#include "paclab/config.hpp"
#include "paclab/experiments.hpp"
#include "paclab/learners.hpp"
#include "paclab/rademacher.hpp"
#include "paclab/rng.hpp"
#include "paclab/shattering.hpp"

using namespace paclab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::string out_path;
};

FlatConfig load_config(const CommonOpts& opts) {
  FlatConfig config = opts.config_path.empty()
                          ? FlatConfig{}
                          : FlatConfig::from_file(opts.config_path);
  if (opts.seed_override)
    config.set("seed", std::to_string(*opts.seed_override));
  return config;
}

/// Output sink: --out path or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw config_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
  auto* c = cmd->add_option("--config", opts.config_path,
                            "flat key = value configuration file");
  if (config_required) c->required();
  cmd->add_option("--seed", opts.seed_override,
                  "override the config's master seed");
  cmd->add_option("--out", opts.out_path, "output path (default: stdout)");
}

int cmd_vcdim(const CommonOpts& opts) {
  const auto config = load_config(opts);
  const int n = static_cast<int>(config.require_int("n"));
  const auto budget = static_cast<std::uint64_t>(
      config.get_int("budget", 1LL << 22));
  const Dataset dataset(n);
  const auto report =
      brute_force_vcdim(dataset, metric_realizability_oracle(dataset), budget);
  Sink sink(opts.out_path);
  sink.stream() << "experiment,n,vc,universe,oracle_calls\n"
                << "vcdim," << n << ',' << report.vc << ','
                << report.universe_size << ',' << report.oracle_calls << "\n";
  std::cerr << "vcdim: N=" << n << " -> VC=" << report.vc << " ("
            << report.oracle_calls << " oracle calls); witness:";
  for (const auto& q : report.max_shattered_set)
    std::cerr << " (" << q.anchor << ',' << q.first << ',' << q.second << ')';
  std::cerr << "\n";
  return kExitPass;
}

int cmd_realizable(const CommonOpts& opts) {
  const auto config = load_config(opts);
  std::ifstream qf(config.require_string("queries"));
  if (!qf) throw config_error("cannot open queries file");
  const auto [n_points, samples] = read_labeled_queries(qf);
  const Dataset dataset(n_points);
  const auto result = is_realizable_metric(dataset, samples);
  Sink sink(opts.out_path);
  if (result.realizable) {
    sink.stream() << "realizable 1\n";
    write_metric(sink.stream(), *result.certificate);
  } else {
    sink.stream() << "realizable 0\n# comparison cycle over point pairs\n";
    for (const auto& [a, b] : result.cycle)
      sink.stream() << "pair " << a << ' ' << b << "\n";
  }
  std::cerr << "realizable: " << (result.realizable ? "yes" : "no") << " ("
            << samples.size() << " queries on " << n_points << " points)\n";
  return kExitPass;
}

int cmd_construct(const CommonOpts& opts) {
  const auto config = load_config(opts);
  const std::string kind = config.get_string("kind", "metric");
  const std::uint64_t seed = config.get_seed("seed", 1);
  Sink sink(opts.out_path);
  if (kind == "metric") {
    std::vector<LabeledSample> samples;
    int n_points;
    if (config.has("queries")) {
      std::ifstream qf(config.require_string("queries"));
      if (!qf) throw config_error("cannot open queries file");
      std::tie(n_points, samples) = read_labeled_queries(qf);
    } else {
      n_points = static_cast<int>(config.require_int("n"));
      CounterRng rng(seed, 0);
      for (const auto& q : consecutive_pair_family(n_points))
        samples.push_back(
            {q, rng.bernoulli(0.5) ? Label::CloserSecond : Label::CloserFirst,
             false});
    }
    const Dataset dataset(n_points);
    const auto table = construct_metric_for_labeling(dataset, samples);
    write_labeled_queries(sink.stream(), n_points, samples);
    write_metric(sink.stream(), table);
    return kExitPass;
  }
  if (kind == "embedding") {
    const int n = static_cast<int>(config.require_int("n"));
    const int d = static_cast<int>(config.require_int("d"));
    const double p = config.get_double("p", 2.0);
    CounterRng rng(seed, 0);
    std::vector<std::uint8_t> bits((n - d) * (d - 1));
    for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
    const auto queries = shattering_embedding_queries(n, d);
    std::vector<LabeledSample> samples;
    for (std::size_t i = 0; i < queries.size(); ++i)
      samples.push_back(
          {queries[i], bits[i] ? Label::CloserSecond : Label::CloserFirst, false});
    write_labeled_queries(sink.stream(), n, samples);
    write_embedding(sink.stream(), construct_shattering_embedding(n, d, p, bits));
    return kExitPass;
  }
  throw config_error("construct: kind must be metric or embedding");
}

int cmd_adversary_sim(const CommonOpts& opts) {
  const auto config = load_config(opts);
  const std::string mode = config.get_string("mode", "sample");
  Sink sink(opts.out_path);
  if (mode == "paired") {
    IndistinguishabilityParams params;
    params.eta = config.require_double("eta");
    params.n = config.require_int("n");
    params.seed = config.get_seed("seed", 1);
    const auto report = run_indistinguishability(params, &sink.stream());
    std::cerr << "paired histograms: max target gap " << report.max_diff_sigmas
              << " sigma, max deviation " << report.max_dev_sigmas
              << " sigma, applicable=" << report.applicable << "\n";
    return report.verdict ? kExitPass : kExitFail;
  }
  AdversaryConfig adv;
  adv.eta = config.require_double("eta");
  adv.gap = config.get_double("gap", 0.0);
  adv.n = static_cast<int>(config.require_int("n"));
  adv.seed = config.get_seed("seed", 1);
  const bool with_corrupted = config.get_int("with_corrupted", 0) != 0;
  const std::string strategy = config.get_string("strategy", "indistinguishable");
  const TwoPointTarget target =
      config.get_string("target", "h1") == "h2" ? TwoPointTarget::H2
                                                : TwoPointTarget::H1;
  SampleSet set;
  if (strategy == "indistinguishable") {
    set = indistinguishable_adversary(adv, target);
  } else if (strategy == "gap") {
    set = gap_adversary(adv, target);
  } else if (strategy == "vc") {
    const int d = static_cast<int>(config.require_int("d"));
    auto draw = vc_adversary(d, adv.eta, adv.gap, adv.n, adv.seed);
    set = std::move(draw.samples);
  } else {
    throw config_error("adversary-sim: unknown strategy " + strategy);
  }
  set.write_csv(sink.stream(), with_corrupted);
  return kExitPass;
}

int cmd_erm_curve(const CommonOpts& opts) {
  const auto config = load_config(opts);
  ErmCurveParams params;
  params.eta = config.require_double("eta");
  params.gap = config.require_double("gap");
  params.delta = config.require_double("delta");
  params.d = static_cast<int>(config.require_int("d"));
  params.trials = config.get_int("trials", 200);
  params.seed = config.get_seed("seed", 1);
  if (config.get_string("dist", "uniform") == "vc-mass")
    params.dist = ErmDistribution::VcMass;
  if (config.get_string("adversary", "flip-random") == "flip-concentrate")
    params.adversary = ErmAdversary::FlipConcentrate;
  Sink sink(opts.out_path);
  if (config.get_int("calibrate", 0) != 0) {
    auto grid = config.get_double_list("c_grid");
    if (grid.empty()) grid = {0.25, 0.5, 1.0, 2.0, 4.0};
    const auto c = calibrate_erm_constant(params, grid);
    if (!c) {
      std::cerr << "erm-curve: no constant on the grid reaches 1-delta\n";
      return kExitFail;
    }
    params.n_grid = {erm_sample_size(*c, params.gap, params.delta, params.d)};
    std::cerr << "erm-curve: calibrated c=" << *c
              << " -> n=" << params.n_grid[0] << "\n";
  } else if (config.has("n_grid")) {
    params.n_grid = config.get_int_list("n_grid");
  } else {
    const double c = config.get_double("c", 1.0);
    params.n_grid = {erm_sample_size(c, params.gap, params.delta, params.d)};
  }
  const auto curve = run_erm_curve(params, &sink.stream());
  for (const auto& point : curve)
    std::cerr << "erm-curve: n=" << point.n << " success=" << point.fraction
              << "\n";
  return kExitPass;
}

int cmd_bayes_lb(const CommonOpts& opts) {
  const auto config = load_config(opts);
  BayesLowerBoundParams params;
  params.eta = config.require_double("eta");
  params.gap = config.require_double("gap");
  params.delta = config.get_double("delta", 1e-3);
  params.trials = config.get_int("trials", 100000);
  params.n_scale = static_cast<int>(config.get_int("n_scale", 1));
  params.seed = config.get_seed("seed", 1);
  Sink sink(opts.out_path);
  const auto summary = run_bayes_lower_bound(params, &sink.stream());
  std::cerr << "bayes-lb: n=" << summary.n << " (threshold "
            << summary.threshold << "), wrong-choice " << summary.freq_wrong
            << ", in-regime failure " << summary.freq_in_regime << "\n";
  if (params.n_scale > 1) return kExitPass;  // informational outside n < threshold
  return summary.bound_holds ? kExitPass : kExitFail;
}

int cmd_vc_lb(const CommonOpts& opts) {
  const auto config = load_config(opts);
  VcLowerBoundParams params;
  params.d = static_cast<int>(config.require_int("d"));
  params.eta = config.require_double("eta");
  params.gap = config.require_double("gap");
  params.delta = config.get_double("delta", 0.05);
  params.trials = config.get_int("trials", 10000);
  params.n_scale = static_cast<int>(config.get_int("n_scale", 1));
  params.seed = config.get_seed("seed", 1);
  Sink sink(opts.out_path);
  const auto summary = run_vc_lower_bound(params, &sink.stream());
  std::cerr << "vc-lb: n=" << summary.n << ", failure " << summary.freq_failure
            << " (se " << summary.std_error << ")\n";
  if (params.n_scale > 1) return kExitPass;
  return summary.bound_holds ? kExitPass : kExitFail;
}

void write_claim_csv(std::ostream& os, const ClaimCheckReport& r, bool header) {
  if (header)
    os << "claim,estimate,exact,claimed_bound,trials,std_error,pass\n";
  os << r.claim_id << ',' << format_double(r.estimate) << ','
     << format_double(r.exact) << ',' << format_double(r.claimed_bound) << ','
     << r.trials << ',' << format_double(r.std_error) << ',' << (r.pass ? 1 : 0)
     << "\n";
}

int cmd_verify(const CommonOpts& opts) {
  const auto config = load_config(opts);
  const std::string claim = config.require_string("claim");
  const long long trials = config.get_int("trials", 200000);
  const std::uint64_t seed = config.get_seed("seed", 1);
  Sink sink(opts.out_path);
  std::vector<ClaimCheckReport> reports;
  if (claim == "central-tails") {
    reports = verify_binomial_central_tails(config.require_int("N"),
                                            config.require_double("p"), trials,
                                            seed);
  } else if (claim == "mean-tail") {
    BoundedDistribution dist;
    const std::string kind = config.get_string("dist", "binomial");
    dist.range = config.require_int("range");
    if (kind == "binomial") {
      dist.kind = BoundedDistribution::Kind::Binomial;
      dist.p = config.require_double("p");
    } else if (kind == "point") {
      dist.kind = BoundedDistribution::Kind::PointMass;
      dist.point = config.require_double("point");
    } else if (kind == "two-point") {
      dist.kind = BoundedDistribution::Kind::TwoPointEnds;
      dist.p = config.require_double("p");
    } else {
      throw config_error("verify: unknown dist " + kind);
    }
    reports.push_back(verify_mean_tail_bound(config.require_double("alpha"),
                                             config.require_double("beta"), dist,
                                             trials, seed));
  } else if (claim == "budget") {
    reports.push_back(verify_budget_concentration(
        config.require_int("n"), config.require_double("eta"),
        config.require_double("gap"), trials, seed));
  } else {
    throw config_error("verify: unknown claim " + claim);
  }
  bool all_pass = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    write_claim_csv(sink.stream(), reports[i], i == 0);
    all_pass = all_pass && reports[i].pass;
  }
  return all_pass ? kExitPass : kExitFail;
}

int cmd_bounds(const CommonOpts& opts) {
  const auto config = load_config(opts);
  Sink sink(opts.out_path);
  auto& os = sink.stream();
  os << "bound,value\n";
  if (config.has("alpha")) {
    os << "alpha_sample_size,"
       << alpha_sample_size(config.require_double("alpha"),
                            config.require_double("delta"),
                            static_cast<int>(config.require_int("vc")),
                            config.get_double("c", 1.0))
       << "\n";
  }
  if (config.has("gap") && config.has("vc")) {
    const auto upper = nasty_upper_bound(config.require_double("gap"),
                                         config.require_double("delta"),
                                         static_cast<int>(config.require_int("vc")),
                                         config.get_double("c", 1.0));
    os << "nasty_upper_n," << upper.n << "\n";
    os << "nasty_upper_hoeffding_floor," << upper.hoeffding_floor << "\n";
    if (config.has("eta")) {
      const auto lower =
          nasty_lower_bound(config.require_double("eta"),
                            config.require_double("gap"),
                            static_cast<int>(config.require_int("vc")));
      os << "nasty_lower_eta_term," << format_double(lower.eta_term) << "\n";
      os << "nasty_lower_vc_term," << format_double(lower.vc_term) << "\n";
    }
  }
  if (config.has("N") && config.has("eps")) {
    const std::string c = config.get_string("case", "arbitrary");
    DistanceCase dc = DistanceCase::Arbitrary;
    if (c == "even") dc = DistanceCase::EvenP;
    else if (c == "odd") dc = DistanceCase::OddP;
    else if (c == "const-d") dc = DistanceCase::ConstantD;
    else if (c != "arbitrary") throw config_error("bounds: unknown case " + c);
    const auto pac = pac_sample_bounds(static_cast<int>(config.require_int("N")),
                                       static_cast<int>(config.get_int("d", 1)),
                                       dc, config.require_double("eps"));
    os << "pac_lower_leading," << format_double(pac.lower_leading) << "\n";
    os << "pac_upper_leading," << format_double(pac.upper_leading) << "\n";
    os << "pac_lower_value," << format_double(pac.lower_value) << "\n";
    os << "pac_upper_value," << format_double(pac.upper_value) << "\n";
  }
  if (config.has("ndim")) {
    const auto nat = natarajan_sample_bounds(
        static_cast<int>(config.require_int("ndim")),
        config.require_double("log_s"), config.require_double("eps"));
    os << "natarajan_upper_value," << format_double(nat.upper_value) << "\n";
    os << "natarajan_lower_value," << format_double(nat.lower_value) << "\n";
  }
  if (config.has("m") && config.has("ell")) {
    const long long m = config.require_int("m");
    const long long ell = config.require_int("ell");
    const long long k = config.get_int("k", 1);
    os << "milnor_components," << format_double(milnor_component_bound(m, ell, k))
       << "\n";
    os << "milnor_components_log2,"
       << format_double(milnor_component_log2(m, ell, k)) << "\n";
  }
  if (config.has("variant")) {
    const std::string v = config.require_string("variant");
    UnshatterVariant variant = UnshatterVariant::EvenP;
    if (v == "odd") variant = UnshatterVariant::OddP;
    else if (v == "const-d") variant = UnshatterVariant::ConstantD;
    else if (v != "even") throw config_error("bounds: unknown variant " + v);
    const auto r = min_unshatterable_size(
        static_cast<int>(config.require_int("N")),
        static_cast<int>(config.require_int("d")), config.get_double("p", 2.0),
        variant, config.get_int("cap", 2000000000LL));
    os << "min_unshatterable_n," << r.n_star << "\n";
    os << "min_unshatterable_margin_log2," << format_double(r.margin_at) << "\n";
  }
  return kExitPass;
}

int cmd_rademacher(const CommonOpts& opts) {
  const auto config = load_config(opts);
  ContrastiveBatch batch;
  if (config.has("batch")) {
    std::ifstream bf(config.require_string("batch"));
    if (!bf) throw config_error("cannot open batch file");
    batch = ContrastiveBatch::read(bf);
  } else {
    // Synthetic unit-norm batch for demos.
    batch.n = static_cast<int>(config.get_int("n", 32));
    batch.k = static_cast<int>(config.get_int("k", 1));
    batch.input_dim = static_cast<int>(config.get_int("D", 8));
    CounterRng rng(config.get_seed("seed", 1), 12);
    const auto fill = [&](std::vector<double>& v, std::size_t rows) {
      v.resize(rows * batch.input_dim);
      for (std::size_t r = 0; r < rows; ++r) {
        double norm = 0.0;
        for (int c = 0; c < batch.input_dim; ++c) {
          const double x = rng.normal();
          v[r * batch.input_dim + c] = x;
          norm += x * x;
        }
        norm = std::sqrt(norm);
        for (int c = 0; c < batch.input_dim; ++c) v[r * batch.input_dim + c] /= norm;
      }
    };
    fill(batch.anchors, batch.n);
    fill(batch.comparisons, static_cast<std::size_t>(batch.n) * (batch.k + 1));
  }
  const LinearEmbeddingClass cls{batch.input_dim,
                                 static_cast<int>(config.get_int("d", 4)),
                                 config.get_double("R", 1.0)};
  const long long draws = config.get_int("draws", 1000);
  const std::uint64_t seed = config.get_seed("seed", 1);
  const auto est = rademacher_estimate(batch, cls, draws, seed);

  const LossSpec loss = config.get_string("loss", "pair-margin") == "identity-first"
                            ? identity_first_loss()
                            : pair_margin_loss();
  double risk = -1.0, bound = -1.0;
  if (loss.arity == batch.k + 1) {
    std::vector<double> w(static_cast<std::size_t>(cls.output_dim) * cls.input_dim);
    CounterRng wrng(seed, 13);
    double norm = 0.0;
    for (auto& x : w) {
      x = wrng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : w) x = x / norm * cls.norm_cap;
    risk = empirical_risk(batch, cls, w, loss);
    bound = generalization_bound(risk, est.value, loss.lipschitz, batch.n,
                                 config.get_double("delta", 0.05));
  }
  Sink sink(opts.out_path);
  sink.stream() << "n,k,D,d,R,draws,estimate,std_error,risk,bound\n"
                << batch.n << ',' << batch.k << ',' << batch.input_dim << ','
                << cls.output_dim << ',' << format_double(cls.norm_cap) << ','
                << draws << ',' << format_double(est.value) << ','
                << format_double(est.std_error) << ',' << format_double(risk)
                << ',' << format_double(bound) << "\n";
  return kExitPass;
}

void list_experiments() {
  std::cout <<
      "experiment map (subcommand: what it measures)\n"
      "  vcdim          exact VC dimension of the arbitrary-metric triplet class\n"
      "                 by exhaustive subset/labeling search\n"
      "  realizable     acyclicity test of the pair-comparison digraph, with a\n"
      "                 certificate metric or a forcing cycle\n"
      "  construct      explicit shattering witnesses: topological-sort metric\n"
      "                 or basis-vector embedding\n"
      "  adversary-sim  label-flip adversaries on two-point and d-query sample\n"
      "                 spaces (mode=paired compares the two targets)\n"
      "  erm-curve      success rate of exhaustive ERM under Bin(n,eta) label\n"
      "                 flips, vs sample size; optional constant calibration\n"
      "  bayes-lb       failure rate of the majority learner below the\n"
      "                 17*eta*(1-eta)/(37*gap^2) sample threshold\n"
      "  vc-lb          failure rate of ERM on the d-query mass construction at\n"
      "                 n=(d-2)/(32*gap)\n"
      "  verify         tail-claim verifiers: central-tails, mean-tail, budget\n"
      "  bounds         closed-form bound evaluators\n"
      "  rademacher     Monte Carlo Rademacher complexity of the norm-capped\n"
      "                 linear class, with the generalization bound\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pac-lab: triplet contrastive learning verification laboratory"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-experiments", list, "print the experiment map and exit");

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const CommonOpts&);
    bool config_required;
  };
  const Command commands[] = {
      {"vcdim", "exact VC dimension by exhaustive search (keys: n, budget)",
       cmd_vcdim, true},
      {"realizable",
       "realizability of a labeled query file (keys: queries)", cmd_realizable,
       true},
      {"construct",
       "shattering witnesses (keys: kind=metric|embedding, n, d, p, seed, queries)",
       cmd_construct, true},
      {"adversary-sim",
       "sample-set generation (keys: strategy, eta, gap, n, d, target, "
       "with_corrupted, mode=sample|paired)",
       cmd_adversary_sim, true},
      {"erm-curve",
       "ERM learning curve (keys: eta, gap, delta, d, trials, n_grid|c, "
       "calibrate, c_grid, dist, adversary)",
       cmd_erm_curve, true},
      {"bayes-lb",
       "majority-learner lower-bound regime (keys: eta, gap, delta, trials, "
       "n_scale)",
       cmd_bayes_lb, true},
      {"vc-lb",
       "ERM lower-bound regime (keys: d, eta, gap, delta, trials, n_scale)",
       cmd_vc_lb, true},
      {"verify",
       "tail-claim verifiers (keys: claim=central-tails|mean-tail|budget, ...)",
       cmd_verify, true},
      {"bounds", "closed-form bound evaluators (keys per bound; see README)",
       cmd_bounds, true},
      {"rademacher",
       "Monte Carlo Rademacher complexity (keys: batch|n,k,D, d, R, draws, "
       "loss, delta)",
       cmd_rademacher, false},
  };

  std::vector<CommonOpts> opts(std::size(commands));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].name, commands[i].help);
    add_common(sub, opts[i], commands[i].config_required);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit cleanly; anything else is a parameter error.
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  if (list) {
    list_experiments();
    return kExitPass;
  }
  try {
    for (std::size_t i = 0; i < std::size(commands); ++i)
      if (subs[i]->parsed()) return commands[i].run(opts[i]);
    std::cout << app.help();
    return kExitPass;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const parameter_gate_error& e) {
    std::cerr << "parameter gate: " << e.what() << "\n";
    return kExitError;
  } catch (const refusal_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
