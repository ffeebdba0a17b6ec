#pragma once

#include <cstdint>
#include <vector>

#include "lrq/interactions.hpp"
#include "lrq/lattice.hpp"

namespace lrq {

// Spins on a finite window; every site outside the window carries the exterior color.
class SpinConfig {
 public:
  SpinConfig() = default;
  SpinConfig(Region window, int q, Color exterior, std::vector<Color> spins);
  static SpinConfig uniform(Region window, int q, Color c);

  const Region& window() const { return window_; }
  int q() const { return q_; }
  int dim() const { return window_.dim(); }
  Color exterior() const { return exterior_; }
  std::size_t size() const { return spins_.size(); }
  const std::vector<Color>& spins() const { return spins_; }

  Color operator[](std::size_t i) const { return spins_[i]; }
  void set(std::size_t i, Color c) { spins_[i] = mod_q(c, q_); }
  // Spin of the extended configuration.
  Color at(const Site& x) const;

  // All spins and the exterior moved by +s mod q.
  SpinConfig shifted(int s) const;
  bool is_ground() const;
  std::uint64_t fingerprint() const;

  friend bool operator==(const SpinConfig& a, const SpinConfig& b) {
    return a.q_ == b.q_ && a.exterior_ == b.exterior_ && a.window_ == b.window_ && a.spins_ == b.spins_;
  }

 private:
  Region window_;
  int q_ = 0;
  Color exterior_ = 0;
  std::vector<Color> spins_;
};

struct ModelInstance {
  CouplingKernel kernel;
  InteractionSpec interaction;
  FieldAssignment field;
  double beta = 0.0;

  ModelInstance(CouplingKernel k, InteractionSpec s, FieldAssignment f, double b);
  // Zero field on the kernel's window.
  ModelInstance(CouplingKernel k, InteractionSpec s, double b);

  int q() const { return interaction.q(); }
  const Region& window() const { return kernel.window(); }
};

enum class EnergyForm { phi, psi };

// -sum_{pairs} J phi(s_x - s_y) - sum_x S_x phi(s_x - r) - sum_x h_{x,s_x}, where
// S_x = sum_{y outside} J_xy is exact up to the kernel's lattice-sum error.
// Rows are reduced in a fixed order, so the value does not depend on the thread count.
double hamiltonian_phi(const SpinConfig& s, const ModelInstance& m);
// Single-threaded pair-by-pair reference for the above.
double hamiltonian_phi_serial(const SpinConfig& s, const ModelInstance& m);

// sum_{pairs} J psi + sum_x S_x psi(s_x - r) + sum_x (h_{x,0} - h_{x,s_x}) / scale, so that
// hamiltonian_phi = hamiltonian_phi(ground, h = 0) - sum_x h_{x,0} + scale * hamiltonian_psi.
double hamiltonian_psi(const SpinConfig& s, const ModelInstance& m);
// Field-free psi energy.
double interaction_energy_psi(const SpinConfig& s, const CouplingKernel& k, const InteractionSpec& spec);

// H(s with s_i = c) - H(s) in phi form, touching only pairs through i.
double energy_delta(const SpinConfig& s, std::size_t i, Color c, const ModelInstance& m);
double energy_delta(const SpinConfig& s, const Site& x, Color c, const ModelInstance& m);

double gibbs_weight_log(const SpinConfig& s, const ModelInstance& m, EnergyForm form = EnergyForm::phi);

// Throws when s and m disagree on q or on the window.
void check_consistent(const SpinConfig& s, const ModelInstance& m);

}  // namespace lrq
