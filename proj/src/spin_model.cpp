#include "lrq/spin_model.hpp"

#include <stdexcept>

#include "lrq/numfmt.hpp"
#include "lrq/sum.hpp"

namespace lrq {

SpinConfig::SpinConfig(Region window, int q, Color exterior, std::vector<Color> spins)
    : window_(std::move(window)), q_(q), exterior_(exterior), spins_(std::move(spins)) {
  if (q_ < 2) throw std::invalid_argument("spin config: q must be >= 2");
  if (spins_.size() != window_.size()) throw std::invalid_argument("spin config: one spin per window site");
  if (exterior_ < 0 || exterior_ >= q_) throw std::invalid_argument("spin config: exterior color out of range");
  for (Color c : spins_)
    if (c < 0 || c >= q_) throw std::invalid_argument("spin config: spin out of range");
}

SpinConfig SpinConfig::uniform(Region window, int q, Color c) {
  std::vector<Color> s(window.size(), c);
  return SpinConfig(std::move(window), q, c, std::move(s));
}

Color SpinConfig::at(const Site& x) const {
  const std::size_t i = window_.index_of(x);
  return i == Region::npos ? exterior_ : spins_[i];
}

SpinConfig SpinConfig::shifted(int s) const {
  SpinConfig r = *this;
  for (auto& c : r.spins_) c = mod_q(c + s, q_);
  r.exterior_ = mod_q(exterior_ + s, q_);
  return r;
}

bool SpinConfig::is_ground() const {
  for (Color c : spins_)
    if (c != exterior_) return false;
  return true;
}

std::uint64_t SpinConfig::fingerprint() const {
  std::string key = std::to_string(q_) + ":" + std::to_string(exterior_) + ":";
  for (const auto& s : window_) key += to_string(s);
  key += ":";
  for (Color c : spins_) key += static_cast<char>('0' + c % 64);
  return fnv1a(key);
}

ModelInstance::ModelInstance(CouplingKernel k, InteractionSpec s, FieldAssignment f, double b)
    : kernel(std::move(k)), interaction(std::move(s)), field(std::move(f)), beta(b) {
  if (!(beta >= 0)) throw std::invalid_argument("model: beta must be >= 0");
  if (field.q() != interaction.q()) throw std::invalid_argument("model: field and interaction disagree on q");
  if (!(field.window() == kernel.window()))
    throw std::invalid_argument("model: field and kernel windows differ");
}

ModelInstance::ModelInstance(CouplingKernel k, InteractionSpec s, double b)
    : ModelInstance(k, s, FieldAssignment(FieldKind::zero, {}, k.window(), s.q()), b) {}

void check_consistent(const SpinConfig& s, const ModelInstance& m) {
  if (s.q() != m.q()) throw std::invalid_argument("configuration and model disagree on q");
  if (!(s.window() == m.window())) throw std::invalid_argument("configuration window differs from model window");
}

namespace {

// Pair term for row i against later sites, with weight function w(n) applied to spin differences.
template <class W>
double row_sum(const SpinConfig& s, const CouplingKernel& k, std::size_t i, W&& w) {
  const double* T = k.data();
  const std::ptrdiff_t base = k.center() + k.code(i);
  const Color ci = s[i];
  double acc = 0.0;
  for (std::size_t j = i + 1; j < s.size(); ++j) acc += T[base - k.code(j)] * w(ci - s[j]);
  return acc;
}

template <class W>
double pair_energy_parallel(const SpinConfig& s, const CouplingKernel& k, W&& w) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.size());
  std::vector<double> rows(s.size());
#pragma omp parallel for schedule(dynamic, 16) if (n > 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) rows[i] = row_sum(s, k, static_cast<std::size_t>(i), w);
  CompensatedSum acc;
  for (double r : rows) acc += r;
  return acc.value();
}

}  // namespace

double hamiltonian_phi(const SpinConfig& s, const ModelInstance& m) {
  check_consistent(s, m);
  const auto& spec = m.interaction;
  CompensatedSum acc;
  acc += -pair_energy_parallel(s, m.kernel, [&](int n) { return spec.phi(n); });
  for (std::size_t i = 0; i < s.size(); ++i) {
    acc += -m.kernel.exterior(i) * spec.phi(s[i] - s.exterior());
    acc += -m.field.at(i, s[i]);
  }
  return acc.value();
}

double hamiltonian_phi_serial(const SpinConfig& s, const ModelInstance& m) {
  check_consistent(s, m);
  const auto& spec = m.interaction;
  const auto& w = s.window();
  CompensatedSum acc;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      acc += -m.kernel.coupling(w[i], w[j]) * spec.phi(s[i] - s[j]);
  for (std::size_t i = 0; i < s.size(); ++i) {
    acc += -m.kernel.exterior(i) * spec.phi(s[i] - s.exterior());
    acc += -m.field.value(w[i], s[i]);
  }
  return acc.value();
}

double interaction_energy_psi(const SpinConfig& s, const CouplingKernel& k, const InteractionSpec& spec) {
  if (s.q() != spec.q()) throw std::invalid_argument("configuration and interaction disagree on q");
  CompensatedSum acc;
  acc += pair_energy_parallel(s, k, [&](int n) { return spec.psi(n); });
  for (std::size_t i = 0; i < s.size(); ++i) acc += k.exterior(i) * spec.psi(s[i] - s.exterior());
  return acc.value();
}

double hamiltonian_psi(const SpinConfig& s, const ModelInstance& m) {
  check_consistent(s, m);
  CompensatedSum acc;
  acc += interaction_energy_psi(s, m.kernel, m.interaction);
  const double scale = m.interaction.scale();
  for (std::size_t i = 0; i < s.size(); ++i) acc += (m.field.at(i, 0) - m.field.at(i, s[i])) / scale;
  return acc.value();
}

double energy_delta(const SpinConfig& s, std::size_t i, Color c, const ModelInstance& m) {
  if (i >= s.size()) throw std::out_of_range("energy_delta: site outside window");
  c = mod_q(c, s.q());
  const Color a = s[i];
  if (a == c) return 0.0;
  const auto& spec = m.interaction;
  const auto& k = m.kernel;
  const double* T = k.data();
  const std::ptrdiff_t base = k.center() + k.code(i);
  CompensatedSum acc;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j == i) continue;
    acc += -T[base - k.code(j)] * (spec.phi(c - s[j]) - spec.phi(a - s[j]));
  }
  acc += -k.exterior(i) * (spec.phi(c - s.exterior()) - spec.phi(a - s.exterior()));
  acc += -(m.field.at(i, c) - m.field.at(i, a));
  return acc.value();
}

double energy_delta(const SpinConfig& s, const Site& x, Color c, const ModelInstance& m) {
  const std::size_t i = s.window().index_of(x);
  if (i == Region::npos) throw std::out_of_range("energy_delta: site outside window");
  return energy_delta(s, i, c, m);
}

double gibbs_weight_log(const SpinConfig& s, const ModelInstance& m, EnergyForm form) {
  if (m.beta == 0.0) return 0.0;
  const double h = form == EnergyForm::phi ? hamiltonian_phi(s, m) : hamiltonian_psi(s, m);
  return -m.beta * h;
}

}  // namespace lrq
