#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lrq/contour.hpp"
#include "lrq/interactions.hpp"
#include "lrq/spin_model.hpp"

namespace lrq {

struct BoundConstants {
  int d = 0;
  double alpha = 0, J = 0;
  int q = 0;
  double m = 0;
  double a = 0;
  double c_alpha = 0;
  double kappa2 = 0;
  double M_min = 0;
  double c2 = 0;
  double c1 = 0;
  double beta0 = 0;
};

BoundConstants compute_constants(int d, double alpha, double J, int q, double m, double c1 = 1.0,
                                 Norm norm = Norm::l2);

struct LemmaReport {
  double lhs = 0, rhs = 0;
  bool holds = false;
};

// J_xy >= (1/((2d+1) 2^alpha)) sum_{x' in B_1(x)} J_{x'y}
LemmaReport check_lemma_geometric(const Site& x, const Site& y, const CouplingKernel& k);

// sum_{x in sp, x' in B_1(x), x != y} J_{x'y} psi(s_x - s_y) >= m sum_{z in sp} J_zy
LemmaReport check_lemma_incorrect(const SpinConfig& s, const Contour& g, const Site& y,
                                  const CouplingKernel& k, const InteractionSpec& spec);

enum class BoundMode { theorem, diagnostic };
std::string to_string(BoundMode m);

struct EnergyBoundReport {
  std::size_t gamma_size = 0;
  double lhs = 0, rhs = 0, margin = 0;
  bool holds = false;
  BoundMode mode = BoundMode::diagnostic;
};

inline constexpr double kBoundSlack = 1e-9;

// lhs = H_psi(s) - H_psi(tau_gamma s) at zero field;
// rhs = c2 (|gamma| + F_sp + sum_{n != 0} F_{I_n} + F_{I'}).
EnergyBoundReport verify_energy_bound(const SpinConfig& s, const ContourFamily& f, std::size_t index,
                                      const CouplingKernel& k, const InteractionSpec& spec,
                                      double M_used, const BoundConstants& c);

// e^{-E} / (1 - e^{-E}) with E = beta c2 - c1 - log q; throws std::domain_error when E <= 0.
double peierls_tail(double beta, const BoundConstants& c, int q);
double peierls_exponent(double beta, const BoundConstants& c, int q);

// Smallest integer R >= 1 with R^delta > 2 h* / c2.
double truncation_radius(double h_star, double delta, double c2);

struct DecayingReport {
  double surface = 0;    // c2 F_L
  double field_sum = 0;  // max_n sum_{x in L} hhat_{x,n}
  double slack = 0;
  bool holds = false;
};

// c2 F_L - sum_{x in L} hhat_{x,n} >= 0 for every color n; hhat is evaluated by formula off the window.
DecayingReport check_decaying_field(const Region& L, const FieldAssignment& hhat, const CouplingKernel& k, double c2);

// Exhaustive check over every configuration of a box window with exterior 0, in the regime
// where M is large enough that all incorrect points of the padded window form one contour.
struct ExhaustiveSummary {
  double alpha = 0;
  std::uint64_t configurations = 0;  // non-ground configurations checked
  std::uint64_t violations = 0;
  double min_margin = 0;
  double min_ratio = 0;  // min lhs / rhs
  BoundMode mode = BoundMode::theorem;
};

struct ExhaustiveRecord {
  std::uint64_t config_index;
  std::size_t alpha_index;
  std::size_t gamma_size;
  double lhs, rhs;
};

struct ExhaustiveOptions {
  std::vector<int> sides{4, 4};
  int q = 3;
  std::vector<double> alphas{3.0};
  double J = 1.0;
  InteractionSpec interaction = InteractionSpec::potts(3);
  double c1 = 1.0;
  // Defaults to M_min of each alpha.
  double M_used = 0.0;
  // Optional per-record sink, called from a single thread in configuration order.
  std::function<void(const ExhaustiveRecord&)> sink;
};

// OpenMP kernel over blocks of configurations. Throws if M_used is below the single-contour regime.
std::vector<ExhaustiveSummary> verify_exhaustive(const ExhaustiveOptions& opt);

// Decodes configuration index -> spins (site 0 least significant).
std::vector<Color> decode_configuration(std::uint64_t index, std::size_t sites, int q);

}  // namespace lrq
