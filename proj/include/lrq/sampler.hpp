#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrq/spin_model.hpp"

namespace lrq {

enum class Algorithm { metropolis, heat_bath };
enum class InitialState { ground, random, checker };

Algorithm parse_algorithm(const std::string& s);
std::string to_string(Algorithm a);
InitialState parse_initial_state(const std::string& s);
std::string to_string(InitialState s);

struct ChainSpec {
  explicit ChainSpec(ModelInstance m) : model(std::move(m)) {}

  ModelInstance model;
  Color exterior = 0;
  int sweeps = 1000;  // including burn-in
  int burn_in = 100;
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::heat_bath;
  InitialState initial = InitialState::ground;
  Site observed;  // defaults to the origin
};

// Statistics past burn-in. One sample per sweep.
struct ChainStats {
  std::vector<double> occupancy;     // of the observed site, per color
  std::vector<double> occupancy_se;
  std::vector<Color> trace;          // observed spin per sample
  std::vector<double> magnetization; // (q n_r / N - 1) / (q - 1) per sample
  double acceptance = 0;             // accepted moves / attempted moves
  double ess = 0;                    // for the indicator of the exterior color
  std::size_t samples = 0;
  std::uint64_t final_fingerprint = 0;
};

// Sokal-windowed integrated autocorrelation time (c = 5).
double integrated_autocorrelation(const std::vector<double>& x);

ChainStats run_chain(const ChainSpec& spec);

// Replica r runs with a seed derived from (spec.seed, r); replicas run in parallel and
// are merged in replica order.
struct ReplicaStats {
  std::vector<ChainStats> replicas;
  std::vector<double> occupancy, occupancy_se;
  double ess = 0, acceptance = 0;
  std::size_t samples = 0;
};
ReplicaStats run_replicas(const ChainSpec& spec, int replicas);

std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica);

// Acceptance rule shared by the chain and the explicit matrix: probability of moving
// site i from its color to color + t, given energy deltas dE[t] (dE[0] = 0).
std::vector<double> move_probabilities(Algorithm a, const std::vector<double>& dE, double beta);

struct TransitionReport {
  std::size_t states = 0;
  double detailed_balance_error = 0;  // max |pi(s) P(s,s') - pi(s') P(s',s)|
  double row_sum_error = 0;
  double stationary_error = 0;        // power iteration vs Gibbs
  double conditional_error = 0;       // heat-bath rows vs Gibbs conditionals (0 for metropolis)
  bool irreducible = false;
  std::vector<double> gibbs;          // exact law by state index (site 0 least significant)
  std::vector<double> stationary;
};

// Explicit random-scan transition matrix on a window of at most 64 states.
TransitionReport transition_matrix_check(const ModelInstance& m, Algorithm a, Color exterior = 0);

struct SweepRow {
  double beta = 0;
  int L = 0;
  double alpha = 0;
  int q = 0;
  std::string field;
  std::uint64_t disorder_seed = 0;
  double mu_hat = 0, stderr_ = 0, ess = 0, acceptance = 0;
};

struct SweepOptions {
  int d = 2, L = 32, q = 3;
  double alpha = 3.0, J = 1.0;
  std::string interaction = "potts";
  FieldKind field = FieldKind::zero;
  FieldParams field_params;
  std::vector<std::uint64_t> disorder_seeds{0};
  std::vector<double> betas;
  int replicas = 8;
  int sweeps = 2000, burn_in = 200;
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::heat_bath;
  // Initial state for betas below / above the threshold.
  double ground_above = 0.0;
};

// mu_hat(s_0 = r) with r = 0 for every beta (and disorder seed, for random fields).
std::vector<SweepRow> phase_sweep(const SweepOptions& opt);

}  // namespace lrq
