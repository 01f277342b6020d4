#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "paclab/exec.hpp"

namespace paclab {

/// Raised when a scenario's parameters fall outside the regime its statement
/// requires; the experiment refuses before any sampling.
struct parameter_gate_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---- empirical learning curve for exhaustive ERM under nasty noise ----

enum class ErmDistribution { Uniform, VcMass };
enum class ErmAdversary { FlipRandom, FlipConcentrate };

struct ErmCurveParams {
  double eta = 0.05;
  double gap = 0.2;    // the Delta accuracy margin; target error is 2*eta+gap
  double delta = 0.05; // confidence, used for the success threshold 1-delta
  int d = 8;           // number of shattered queries; class is its power set
  std::vector<long long> n_grid;
  long long trials = 200;
  ErmDistribution dist = ErmDistribution::Uniform;
  ErmAdversary adversary = ErmAdversary::FlipRandom;
  std::uint64_t seed = 1;
};

struct ErmCurvePoint {
  long long n = 0;
  long long trials = 0;
  long long successes = 0;
  double fraction = 0.0;
  /// Trials where the per-trial recount broke the two-sided budget bound:
  /// empirical mistakes <= t and m <= t must give clean mistakes <= 2t.
  long long doubling_violations = 0;
};

/// For each n on the grid, runs adversary + exhaustive ERM rounds and counts
/// how often the true error (computed exactly from the finite distribution)
/// stays within 2*eta+gap.
std::vector<ErmCurvePoint> run_erm_curve(const ErmCurveParams& params,
                                         std::ostream* csv = nullptr,
                                         Exec exec = Exec::OpenMP);

/// ceil((c/gap^2) * (d + ln(2/delta))): the sample size the ERM argument
/// prescribes at constant c.
long long erm_sample_size(double c, double gap, double delta, int d);

/// Smallest c on the grid whose single-point curve at n = erm_sample_size(c)
/// reaches success fraction >= 1-delta; nullopt when none does.
std::optional<double> calibrate_erm_constant(const ErmCurveParams& base,
                                             std::span<const double> c_grid,
                                             Exec exec = Exec::OpenMP);

// ---- two-point lower-bound experiment (majority learner) ----

struct BayesLowerBoundParams {
  double eta = 0.12;
  double gap = 0.009;     // requires gap < eta/12
  double delta = 1e-3;    // context gate: requires delta < 1/342
  long long trials = 100000;
  int n_scale = 1;        // multiplies the just-below-threshold sample size
  std::uint64_t seed = 1;
};

struct BayesLowerBoundSummary {
  long long n = 0;             // samples per trial after scaling
  double threshold = 0.0;      // 17 eta (1-eta) / (37 gap^2)
  long long trials = 0;
  /// Frequency of the majority learner picking the wrong classifier
  /// (equivalently true error >= eps; per-trial error is 0 or eps exactly).
  double freq_wrong = 0.0;
  /// Frequency of the corrupted count reaching a strict majority.
  double freq_majority_corrupt = 0.0;
  /// Frequency of that event inside the regime window M <= 36 eta(eta+gap)
  /// / (37 gap^2); this is the event whose probability the bound tracks, and
  /// the one that collapses once n leaves the regime.
  double freq_in_regime = 0.0;
  double std_error = 0.0;  // MC error of freq_wrong
  bool bound_holds = false;  // freq_wrong > 1/342 - 3 se
};

BayesLowerBoundSummary run_bayes_lower_bound(const BayesLowerBoundParams& params,
                                             std::ostream* csv = nullptr,
                                             Exec exec = Exec::OpenMP);

// ---- VC-mass lower-bound experiment (exhaustive ERM) ----

struct VcLowerBoundParams {
  int d = 12;
  double eta = 0.05;
  double gap = 0.01;
  double delta = 0.05;  // context gate: requires delta < 1/12
  long long trials = 10000;
  int n_scale = 1;
  std::uint64_t seed = 1;
};

struct VcLowerBoundSummary {
  long long n = 0;
  long long trials = 0;
  double freq_failure = 0.0;  // true error >= eps = 2*eta+gap
  double std_error = 0.0;
  bool bound_holds = false;  // freq_failure > 1/12 - 3 se
};

VcLowerBoundSummary run_vc_lower_bound(const VcLowerBoundParams& params,
                                       std::ostream* csv = nullptr,
                                       Exec exec = Exec::OpenMP);

// ---- paired-target indistinguishability experiment ----

struct IndistinguishabilityParams {
  double eta = 0.1;
  long long n = 1000000;
  std::uint64_t seed = 1;
};

struct IndistinguishabilityReport {
  bool applicable = true;  // false at eta = 0 (the adversary never acts)
  long long n = 0;
  /// Outcome order: (s1, CloserFirst), (s2, CloserFirst), (s2, CloserSecond).
  double freq_h1[3] = {0, 0, 0};
  double freq_h2[3] = {0, 0, 0};
  double expected[3] = {0, 0, 0};  // (1-2eta, eta, eta)
  double max_diff_sigmas = 0.0;    // max |freq_h1-freq_h2| in paired-SE units
  double max_dev_sigmas = 0.0;     // max |freq - expected| in SE units
  bool verdict = false;            // both maxima below 4 sigma
};

IndistinguishabilityReport run_indistinguishability(
    const IndistinguishabilityParams& params, std::ostream* csv = nullptr);

}  // namespace paclab
