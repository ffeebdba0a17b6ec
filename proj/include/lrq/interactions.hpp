#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lrq/lattice.hpp"

namespace lrq {

// Colors live in {0,...,q-1}; 0 is the reference color ("q").
using Color = int;

inline Color mod_q(int v, int q) {
  int r = v % q;
  return r < 0 ? r + q : r;
}

class InteractionSpec {
 public:
  // Rejects phi unless phi(0) > phi(n) for every n != 0.
  explicit InteractionSpec(std::vector<double> phi, std::string name = "custom");
  static InteractionSpec potts(int q);
  static InteractionSpec clock(int q);
  static InteractionSpec preset(const std::string& name, int q);

  int q() const { return static_cast<int>(phi_.size()); }
  const std::string& name() const { return name_; }
  double phi(int n) const { return phi_[mod_q(n, q())]; }
  double psi(int n) const { return psi_[mod_q(n, q())]; }
  const std::vector<double>& phi_values() const { return phi_; }
  const std::vector<double>& psi_values() const { return psi_; }
  double m() const { return m_; }
  // phi(0) - min_{n != 0} phi(n); phi = phi(0) - scale * psi.
  double scale() const { return scale_; }

 private:
  std::string name_;
  std::vector<double> phi_, psi_;
  double m_ = 0, scale_ = 0;
};

struct Normalized {
  std::vector<double> psi;
  double m;
};
Normalized normalize(const std::vector<double>& phi);

// fhat(k) = sum_n f(n) exp(-2 pi i k n / q)
std::vector<std::complex<double>> dft_zq(const std::vector<double>& f);
std::vector<std::complex<double>> inverse_dft_zq(const std::vector<std::complex<double>>& fhat);
bool is_positive_semidefinite(const std::vector<double>& f, double tol = 1e-9);

struct SeriesValue {
  double value;
  double error;  // absolute error bound
};

// Riemann zeta for real s > 1.
SeriesValue zeta(double s);

// c_alpha = sum_{y != 0} |y|^{-alpha} over Z^d.
SeriesValue c_alpha(int d, double alpha, double tol = 1e-12, Norm norm = Norm::l2);

inline constexpr double kNearestNeighbor = std::numeric_limits<double>::infinity();

// J_xy = J / |x-y|^alpha, or J 1{|x-y|_1 = 1} when alpha is kNearestNeighbor.
// Couplings inside the window, and out to `margin` sites beyond its bounding box,
// are served from a table indexed by displacement.
class CouplingKernel {
 public:
  CouplingKernel(double J, double alpha, Region window, Norm norm = Norm::l2, int margin = 2);
  static CouplingKernel nearest_neighbor(double J, Region window) {
    return CouplingKernel(J, kNearestNeighbor, std::move(window), Norm::l1);
  }

  double J() const { return J_; }
  double alpha() const { return alpha_; }
  bool is_nearest_neighbor() const { return alpha_ == kNearestNeighbor; }
  Norm norm() const { return norm_; }
  int dim() const { return window_.dim(); }
  const Region& window() const { return window_; }
  std::size_t size() const { return window_.size(); }

  double coupling(const Site& x, const Site& y) const;
  double coupling_displacement(const Site& dx) const;
  double coupling(std::size_t i, std::size_t j) const {
    return table_[center_ + code_[i] - code_[j]];
  }
  // sum_{y outside window} J_{x_i y}
  double exterior(std::size_t i) const { return exterior_[i]; }
  const std::vector<double>& exterior_all() const { return exterior_; }
  // sum_{y != 0} J_{0y} = J c_alpha (2dJ for nearest neighbor), and its error bound.
  double total() const { return total_; }
  double total_error() const { return total_error_; }
  double c_alpha_value() const { return total_ / J_; }

  // Raw access for tight loops: J(i,j) = data()[center() + code(i) - code(j)].
  const double* data() const { return table_.data(); }
  std::ptrdiff_t center() const { return center_; }
  std::ptrdiff_t code(std::size_t i) const { return code_[i]; }

 private:
  double direct(const Site& dx) const;

  double J_, alpha_;
  Region window_;
  Norm norm_;
  Box box_;                      // window bounding box
  std::array<int, kMaxDim> reach_{};  // max |displacement| served by the table per axis
  std::array<std::ptrdiff_t, kMaxDim> tstride_{};
  std::vector<double> table_;
  std::vector<std::ptrdiff_t> code_;
  std::ptrdiff_t center_ = 0;
  std::vector<double> exterior_;
  double total_ = 0, total_error_ = 0;
};

enum class FieldKind { zero, decaying, truncated, gaussian, table };

FieldKind parse_field_kind(const std::string& s);
std::string to_string(FieldKind k);

struct FieldParams {
  double h_star = 0.0;
  double delta = 0.0;
  double R = 1.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  Norm norm = Norm::l2;
};

// Per-site per-color field h_{x,n}. Table values cover the window; the
// decaying and truncated kinds also answer for sites outside it.
class FieldAssignment {
 public:
  FieldAssignment() = default;
  FieldAssignment(FieldKind kind, FieldParams params, Region window, int q);

  FieldKind kind() const { return kind_; }
  const FieldParams& params() const { return params_; }
  int q() const { return q_; }
  const Region& window() const { return window_; }
  bool is_zero() const;

  double value(const Site& x, Color n) const;
  double at(std::size_t i, Color n) const { return values_[i * q_ + n]; }
  void set(std::size_t i, Color n, double v);
  // Adds c to every color at window site i.
  void shift_site(std::size_t i, double c);

  std::string descriptor() const;

 private:
  double formula(const Site& x) const;

  FieldKind kind_ = FieldKind::zero;
  FieldParams params_;
  Region window_;
  int q_ = 0;
  std::vector<double> values_;
};

FieldAssignment make_field(FieldKind kind, const FieldParams& params, const Region& window, int q);
// h_{x,n} = h_x phi(n)
FieldAssignment scalar_field(const std::vector<double>& h, const InteractionSpec& spec,
                             const Region& window);

}  // namespace lrq
