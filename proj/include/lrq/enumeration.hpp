#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lrq/bounds.hpp"
#include "lrq/contour.hpp"
#include "lrq/spin_model.hpp"

namespace lrq {

inline constexpr double kEnumerationBudget = 2e7;

// Real function of the spins on a few sites, tabulated in mixed radix with the first
// support site least significant.
struct LocalFunction {
  std::string id;
  std::vector<Site> support;
  std::vector<double> table;

  double operator()(const std::vector<Color>& values) const;
  static LocalFunction indicator(std::string id, const Site& x, Color c, int q);
};

struct ExactResult {
  Region window;
  int q = 0;
  double log_Z = 0;
  std::vector<double> log_marginal;  // [site * q + color]
  std::map<std::string, double> expectations;

  double marginal(std::size_t i, Color c) const;
  double marginal(const Site& x, Color c) const;
  double log_marginal_at(const Site& x, Color c) const;
  // log mu(s_x != c)
  double log_prob_not(const Site& x, Color c) const;
};

// Exact Gibbs measure on the model window with exterior color r (phi form).
// OpenMP over blocks of leading digits; blocks merge in a fixed order, so the
// result does not depend on the thread count.
ExactResult exact_partition(const ModelInstance& m, Color exterior = 0,
                            const std::vector<LocalFunction>& functions = {},
                            double budget = kEnumerationBudget);

// log Z only; same summation order as exact_partition.
double log_partition(const ModelInstance& m, Color exterior = 0, double budget = kEnumerationBudget);

// One state at a time with the full Hamiltonian, optionally in a given state order.
ExactResult exact_partition_serial(const ModelInstance& m, Color exterior = 0,
                                   const std::vector<LocalFunction>& functions = {},
                                   const std::vector<std::uint64_t>* order = nullptr,
                                   double budget = kEnumerationBudget);

double expectation(const LocalFunction& f, const ModelInstance& m, Color exterior = 0);

// Throws std::length_error when q^sites exceeds the budget.
std::uint64_t state_count(std::size_t sites, int q, double budget = kEnumerationBudget);

// sum_k w_k Re chi_k over the support, with chi_k(s) = exp(2 pi i k.s / q).
LocalFunction character_function(std::string id, const std::vector<Site>& support, int q,
                                 const std::vector<std::vector<int>>& ks, const std::vector<double>& weights);

struct GriffithsOptions {
  InteractionSpec interaction = InteractionSpec::potts(3);
  double J = 1.0;
  double alpha = 3.0;
  std::vector<int> small_sides{2, 2};
  std::vector<int> large_sides{3, 2};
  int trials = 50;
  std::uint64_t seed = 1;
  double beta_max = 1.5;
  double field_max = 0.5;
  double tol = 1e-10;
};

struct GriffithsReport {
  bool skipped = false;
  std::string reason;
  int cases = 0;
  // first correlation, second correlation, field monotonicity, volume monotonicity
  int violations[4] = {0, 0, 0, 0};
  double worst[4] = {0, 0, 0, 0};  // most negative slack seen
  bool all_hold() const {
    return !skipped && violations[0] + violations[1] + violations[2] + violations[3] == 0;
  }
};

GriffithsReport griffiths_checks(const GriffithsOptions& opt);

struct PeierlsRow {
  double beta = 0;
  double exact = 0;      // mu(s_0 != 0)
  double log_exact = 0;
  double bound = 0;
  double log_bound = 0;
  bool holds = false;
};

// Exact mu^q(s_0 != q) against the Peierls tail; betas must lie in the convergent regime.
std::vector<PeierlsRow> peierls_comparison(const CouplingKernel& k, const InteractionSpec& spec,
                                           const BoundConstants& c, const std::vector<double>& betas);

struct CensusRow {
  int n = 0;
  std::uint64_t count = 0;
  double rate = 0;        // log(count) / n
  double bound_rate = 0;  // log q + c1
  bool within = true;
};

struct CensusResult {
  std::vector<CensusRow> rows;
  std::uint64_t configurations = 0;
  std::size_t classes = 0;   // distinct contours up to translation
  double c1_required = 0;    // max_n (rate_n - log q) over nonzero counts
  bool c1_adequate = true;
};

CensusResult contour_census(int d, int q, int n_max, int window_side, const MaParams& p, double c1 = 1.0,
                            double budget = kEnumerationBudget);

}  // namespace lrq
