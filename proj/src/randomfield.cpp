#include "lrq/randomfield.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "lrq/enumeration.hpp"
#include "lrq/sampler.hpp"

namespace lrq {

OrderedPartition::OrderedPartition(Region window, std::vector<Region> classes)
    : window_(std::move(window)), classes_(std::move(classes)) {
  if (classes_.size() < 2) throw std::invalid_argument("partition: need q >= 2 classes");
  std::size_t total = 0;
  for (const auto& c : classes_) {
    if (!is_subset(c, window_)) throw std::invalid_argument("partition: class leaves the window");
    total += c.size();
  }
  if (total != window_.size()) throw std::invalid_argument("partition: classes must be disjoint and cover the window");
  Region u(window_.dim());
  for (const auto& c : classes_) u = set_union(u, c);
  if (!(u == window_)) throw std::invalid_argument("partition: classes must be disjoint and cover the window");
}

OrderedPartition OrderedPartition::identity(Region window, int q) {
  std::vector<Region> cl(q, Region(window.dim()));
  cl[0] = window;
  return OrderedPartition(std::move(window), std::move(cl));
}

Color OrderedPartition::label(const Site& x) const {
  for (int n = 1; n < q(); ++n)
    if (classes_[n].contains(x)) return n;
  return 0;
}

Region OrderedPartition::support() const {
  Region u(window_.dim());
  for (int n = 1; n < q(); ++n) u = set_union(u, classes_[n]);
  return u;
}

OrderedPartition partition_from_config(const SpinConfig& s) {
  if (s.exterior() != 0) throw std::invalid_argument("partition: configuration must have exterior color 0");
  std::vector<std::vector<Site>> cl(s.q());
  for (std::size_t i = 0; i < s.size(); ++i) cl[s[i]].push_back(s.window()[i]);
  std::vector<Region> classes;
  for (auto& c : cl) classes.emplace_back(s.dim(), std::move(c));
  return OrderedPartition(s.window(), std::move(classes));
}

SpinConfig config_from_partition(const OrderedPartition& a) {
  std::vector<Color> spins(a.window().size(), 0);
  for (int n = 1; n < a.q(); ++n)
    for (const auto& x : a[n]) spins[a.window().index_of(x)] = n;
  return SpinConfig(a.window(), a.q(), 0, std::move(spins));
}

OrderedPartition convolve(const OrderedPartition& a, const OrderedPartition& b) {
  if (!(a.window() == b.window()) || a.q() != b.q()) throw std::invalid_argument("convolve: incompatible partitions");
  const int q = a.q();
  std::vector<Region> out(q, Region(a.window().dim()));
  for (int n = 0; n < q; ++n)
    for (int t = 0; t < q; ++t) out[n] = set_union(out[n], set_intersection(a[t], b[n - t]));
  return OrderedPartition(a.window(), std::move(out));
}

OrderedPartition inverse(const OrderedPartition& a) {
  std::vector<Region> out(a.q());
  for (int n = 0; n < a.q(); ++n) out[n] = a[-n];
  return OrderedPartition(a.window(), std::move(out));
}

OrderedPartition power(const OrderedPartition& a, int k) {
  OrderedPartition r = OrderedPartition::identity(a.window(), a.q());
  for (int i = 0; i < mod_q(k, a.q()); ++i) r = convolve(r, a);
  return r;
}

FieldAssignment theta(const OrderedPartition& a, const FieldAssignment& h) {
  if (!(a.window() == h.window()) || a.q() != h.q()) throw std::invalid_argument("theta: incompatible field");
  const int q = a.q();
  FieldAssignment out(FieldKind::table, {}, h.window(), q);
  for (std::size_t i = 0; i < h.window().size(); ++i) {
    const Color n = a.label(h.window()[i]);
    for (int r = 0; r < q; ++r) out.set(i, r, h.at(i, mod_q(r + n, q)));
  }
  return out;
}

double delta(const OrderedPartition& a, const FieldAssignment& h, const CouplingKernel& k,
             const InteractionSpec& spec, double beta) {
  if (!(beta > 0)) throw std::invalid_argument("delta: beta must be positive");
  const double z = log_partition(ModelInstance(k, spec, h, beta), 0);
  const double zt = log_partition(ModelInstance(k, spec, theta(a, h), beta), 0);
  return -(z - zt) / beta;
}

bool TailReport::all_within() const {
  for (const auto& r : rows)
    if (!r.within) return false;
  return true;
}

namespace {

void fill_rows(TailReport& rep, const std::vector<double>& lambdas, auto bound_of) {
  const double n = static_cast<double>(rep.samples.size());
  double sum = 0, sq = 0;
  for (double v : rep.samples) {
    sum += v;
    sq += v * v;
  }
  rep.mean = sum / n;
  rep.mean_se = std::sqrt(std::max(0.0, sq / n - rep.mean * rep.mean) / std::max(1.0, n - 1));
  for (double lam : lambdas) {
    TailRow row;
    row.lambda = lam;
    std::size_t hits = 0;
    for (double v : rep.samples)
      if (std::fabs(v) >= lam) ++hits;
    row.empirical = hits / n;
    row.bound = bound_of(lam);
    const double p = std::min(row.bound, 1.0);
    row.slack = 3.0 * std::sqrt(p * (1.0 - p) / n);
    row.within = row.empirical <= row.bound + row.slack;
    rep.rows.push_back(row);
  }
}

}  // namespace

TailReport delta_tail_check(const OrderedPartition& a, const CouplingKernel& k, const InteractionSpec& spec,
                            const TailOptions& opt) {
  if (!(a.window() == k.window())) throw std::invalid_argument("tail check: partition and kernel windows differ");
  state_count(k.size(), spec.q(), kEnumerationBudget);
  const int q = spec.q();
  TailReport rep;
  rep.samples.resize(opt.draws);
#pragma omp parallel for schedule(dynamic, 16)
  for (int t = 0; t < opt.draws; ++t) {
    FieldParams fp;
    fp.epsilon = opt.epsilon;
    fp.seed = replica_seed(opt.seed, static_cast<std::uint64_t>(t));
    const FieldAssignment h(FieldKind::gaussian, fp, k.window(), q);
    rep.samples[t] = delta(a, h, k, spec, opt.beta);
  }
  const double n_out = static_cast<double>(a.support().size());
  const double e2 = opt.epsilon * opt.epsilon;
  fill_rows(rep, opt.lambdas, [&](double lam) {
    return n_out == 0 || e2 == 0 ? (lam > 0 ? 0.0 : 2.0) : 2.0 * std::exp(-lam * lam / (2.0 * q * e2 * n_out));
  });
  return rep;
}

TailReport gaussian_sum_tail_check(const SpinConfig& s, const TailOptions& opt) {
  const int q = s.q();
  std::vector<std::size_t> L;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != 0) L.push_back(i);
  if (L.empty()) throw std::invalid_argument("gaussian sum: configuration has no site off the reference color");
  TailReport rep;
  rep.samples.resize(opt.draws);
  for (int t = 0; t < opt.draws; ++t) {
    FieldParams fp;
    fp.epsilon = opt.epsilon;
    fp.seed = replica_seed(opt.seed, static_cast<std::uint64_t>(t));
    const FieldAssignment h(FieldKind::gaussian, fp, s.window(), q);
    double v = 0;
    for (std::size_t i : L) v += h.at(i, s[i]) - h.at(i, 0);
    rep.samples[t] = v;
  }
  const double n = static_cast<double>(L.size());
  const double e2 = opt.epsilon * opt.epsilon;
  fill_rows(rep, opt.lambdas, [&](double lam) { return 2.0 * std::exp(-lam * lam / (2.0 * e2 * n)); });
  for (auto& r : rep.rows) {
    r.exact = std::erfc(r.lambda / (2.0 * opt.epsilon * std::sqrt(n)));
    r.corrected = 2.0 * std::exp(-r.lambda * r.lambda / (4.0 * e2 * n));
  }
  return rep;
}

}  // namespace lrq
