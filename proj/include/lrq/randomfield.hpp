#pragma once

#include <cstdint>
#include <vector>

#include "lrq/interactions.hpp"
#include "lrq/spin_model.hpp"

namespace lrq {

// Ordered q-partition of a window; class 0 (the reference color) also absorbs every
// site outside the window.
class OrderedPartition {
 public:
  OrderedPartition() = default;
  // classes[n] for n = 0..q-1; must be disjoint and cover the window.
  OrderedPartition(Region window, std::vector<Region> classes);
  static OrderedPartition identity(Region window, int q);

  const Region& window() const { return window_; }
  int q() const { return static_cast<int>(classes_.size()); }
  const Region& operator[](int n) const { return classes_[mod_q(n, q())]; }
  const std::vector<Region>& classes() const { return classes_; }
  // n with x in A_n
  Color label(const Site& x) const;
  // Union of the classes other than 0.
  Region support() const;

  friend bool operator==(const OrderedPartition& a, const OrderedPartition& b) {
    return a.window_ == b.window_ && a.classes_ == b.classes_;
  }

 private:
  Region window_;
  std::vector<Region> classes_;
};

OrderedPartition partition_from_config(const SpinConfig& s);
SpinConfig config_from_partition(const OrderedPartition& a);

// (A * B)_n = union_t A_t cap B_{n-t}
OrderedPartition convolve(const OrderedPartition& a, const OrderedPartition& b);
OrderedPartition inverse(const OrderedPartition& a);
OrderedPartition power(const OrderedPartition& a, int k);

// (theta_A h)_{x,r} = h_{x, r + n_A(x)} on the window.
FieldAssignment theta(const OrderedPartition& a, const FieldAssignment& h);

// -(1/beta) log(Z(h) / Z(theta_A h)) with exterior color 0, by exact enumeration.
// The model's own field is ignored in favour of h.
double delta(const OrderedPartition& a, const FieldAssignment& h, const CouplingKernel& k,
             const InteractionSpec& spec, double beta);

struct TailRow {
  double lambda = 0;
  double empirical = 0;
  double bound = 0;      // quoted bound
  double slack = 0;      // 3 binomial standard errors at the bound
  bool within = false;   // empirical <= bound + slack
  double exact = -1;     // closed-form tail, where one exists
  double corrected = -1; // corrected bound, where the quoted one is not a valid bound
};

struct TailReport {
  std::vector<TailRow> rows;
  std::vector<double> samples;
  double mean = 0, mean_se = 0;
  bool all_within() const;
};

struct TailOptions {
  double beta = 1.0;
  double epsilon = 0.1;
  int draws = 10000;
  std::uint64_t seed = 1;
  std::vector<double> lambdas;
};

// |Delta_A(h)| over independent standard Gaussian fields scaled by epsilon, against
// 2 exp(-lambda^2 / (2 q eps^2 |A_q^c|)). The check is unconditional: it averages over h_{A_q} too.
TailReport delta_tail_check(const OrderedPartition& a, const CouplingKernel& k, const InteractionSpec& spec,
                            const TailOptions& opt);

// |eps sum_{x in L} (h_{x,s_x} - h_{x,0})| for fixed s with s_x != 0 on L, which is exactly
// N(0, 2 eps^2 |L|). Reports the quoted bound 2 exp(-lambda^2 / (2 eps^2 |L|)), the exact tail
// erfc(lambda / (2 eps sqrt|L|)) and the valid bound 2 exp(-lambda^2 / (4 eps^2 |L|)).
TailReport gaussian_sum_tail_check(const SpinConfig& s, const TailOptions& opt);

}  // namespace lrq
