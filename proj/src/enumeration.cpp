#include "lrq/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "lrq/sum.hpp"

namespace lrq {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double LocalFunction::operator()(const std::vector<Color>& values) const {
  std::size_t idx = 0, mul = 1;
  const std::size_t q = values.empty() ? 1 : static_cast<std::size_t>(std::llround(
                                                   std::pow(static_cast<double>(table.size()), 1.0 / support.size())));
  for (std::size_t i = 0; i < values.size(); ++i) {
    idx += static_cast<std::size_t>(values[i]) * mul;
    mul *= q;
  }
  return table.at(idx);
}

LocalFunction LocalFunction::indicator(std::string id, const Site& x, Color c, int q) {
  LocalFunction f{std::move(id), {x}, std::vector<double>(q, 0.0)};
  f.table[mod_q(c, q)] = 1.0;
  return f;
}

double ExactResult::marginal(std::size_t i, Color c) const {
  return std::exp(log_marginal[i * q + mod_q(c, q)]);
}

double ExactResult::marginal(const Site& x, Color c) const {
  const std::size_t i = window.index_of(x);
  if (i == Region::npos) throw std::out_of_range("marginal: site outside window");
  return marginal(i, c);
}

double ExactResult::log_marginal_at(const Site& x, Color c) const {
  const std::size_t i = window.index_of(x);
  if (i == Region::npos) throw std::out_of_range("marginal: site outside window");
  return log_marginal[i * q + mod_q(c, q)];
}

double ExactResult::log_prob_not(const Site& x, Color c) const {
  LogSumExp acc;
  for (int n = 0; n < q; ++n)
    if (n != mod_q(c, q)) acc.add(log_marginal_at(x, n));
  return acc.value();
}

std::uint64_t state_count(std::size_t sites, int q, double budget) {
  const double n = std::pow(static_cast<double>(q), static_cast<double>(sites));
  if (n > budget) throw std::length_error("enumeration budget exceeded: q^|window| = " + std::to_string(n));
  return static_cast<std::uint64_t>(std::llround(n));
}

namespace {

struct PreparedFunction {
  std::vector<std::size_t> where;  // window indices
  std::vector<std::size_t> mul;
  const std::vector<double>* table;
  double eval(const Color* s) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < where.size(); ++k) idx += static_cast<std::size_t>(s[where[k]]) * mul[k];
    return (*table)[idx];
  }
};

std::vector<PreparedFunction> prepare(const std::vector<LocalFunction>& fns, const Region& w, int q) {
  std::vector<PreparedFunction> out;
  for (const auto& f : fns) {
    PreparedFunction p;
    p.table = &f.table;
    std::size_t mul = 1;
    for (const auto& x : f.support) {
      const std::size_t i = w.index_of(x);
      if (i == Region::npos) throw std::invalid_argument("function " + f.id + " not supported in window");
      p.where.push_back(i);
      p.mul.push_back(mul);
      mul *= static_cast<std::size_t>(q);
    }
    if (f.table.size() != mul) throw std::invalid_argument("function " + f.id + " has a table of wrong size");
    out.push_back(std::move(p));
  }
  return out;
}

// Log-domain accumulators for one block of states.
struct Accumulator {
  LogSumExp Z;
  std::vector<LogSumExp> cell;
  std::vector<double> fsum;  // relative to Z.max

  Accumulator(std::size_t cells, std::size_t nf) : cell(cells), fsum(nf, 0.0) {}

  void add(double logw, const Color* s, std::size_t N, int q, const std::vector<PreparedFunction>& fns) {
    if (cell.empty()) {
      Z.add(logw);
      return;
    }
    if (!fns.empty()) {
      if (logw > Z.max) {
        const double scale = Z.max == kNegInf ? 0.0 : std::exp(Z.max - logw);
        for (auto& v : fsum) v *= scale;
      }
    }
    Z.add(logw);
    if (!fns.empty()) {
      const double w = std::exp(logw - Z.max);
      for (std::size_t k = 0; k < fns.size(); ++k) fsum[k] += fns[k].eval(s) * w;
    }
    for (std::size_t i = 0; i < N; ++i) cell[i * q + s[i]].add(logw);
  }

  void merge(const Accumulator& o) {
    if (o.Z.max == kNegInf) return;
    if (o.Z.max > Z.max) {
      const double scale = Z.max == kNegInf ? 0.0 : std::exp(Z.max - o.Z.max);
      for (std::size_t k = 0; k < fsum.size(); ++k) fsum[k] = fsum[k] * scale + o.fsum[k];
    } else {
      const double scale = std::exp(o.Z.max - Z.max);
      for (std::size_t k = 0; k < fsum.size(); ++k) fsum[k] += o.fsum[k] * scale;
    }
    Z.merge(o.Z);
    for (std::size_t c = 0; c < cell.size(); ++c) cell[c].merge(o.cell[c]);
  }
};

ExactResult finish(const Accumulator& acc, const ModelInstance& m, const std::vector<LocalFunction>& fns) {
  ExactResult r;
  r.window = m.window();
  r.q = m.q();
  r.log_Z = acc.Z.value();
  r.log_marginal.resize(acc.cell.size());
  for (std::size_t c = 0; c < acc.cell.size(); ++c) r.log_marginal[c] = acc.cell[c].value() - r.log_Z;
  for (std::size_t k = 0; k < fns.size(); ++k) r.expectations[fns[k].id] = acc.fsum[k] / acc.Z.sum;
  return r;
}

}  // namespace

namespace {

Accumulator enumerate_blocks(const ModelInstance& m, Color exterior, const std::vector<PreparedFunction>& fns,
                             bool marginals) {
  const std::size_t N = m.window().size();
  const int q = m.q();
  const std::size_t cells = marginals ? N * q : 0;
  const auto& k = m.kernel;
  const auto& spec = m.interaction;
  const double beta = m.beta;

  // Sites [0, L) are enumerated inside a block; sites [L, N) index the blocks.
  std::size_t L = 0;
  std::uint64_t low_states = 1;
  while (L < N && low_states * q <= 4096) {
    low_states *= q;
    ++L;
  }
  const std::size_t H = N - L;
  std::uint64_t blocks = 1;
  for (std::size_t i = 0; i < H; ++i) blocks *= q;

  auto site_energy = [&](std::size_t i, Color c) {
    return -k.exterior(i) * spec.phi(c - exterior) - m.field.at(i, c);
  };

  // Energy of the low sites alone, for every low state.
  std::vector<double> E_low(low_states);
  {
    std::vector<Color> s(L, 0);
    for (std::uint64_t idx = 0; idx < low_states; ++idx) {
      CompensatedSum e;
      for (std::size_t i = 0; i < L; ++i) {
        e += site_energy(i, s[i]);
        for (std::size_t j = i + 1; j < L; ++j) e += -k.coupling(i, j) * spec.phi(s[i] - s[j]);
      }
      E_low[idx] = e.value();
      for (std::size_t i = 0; i < L; ++i) {
        if (++s[i] < q) break;
        s[i] = 0;
      }
    }
  }

  std::vector<Accumulator> parts(blocks, Accumulator(cells, fns.size()));
#pragma omp parallel
  {
    std::vector<Color> s(N, 0);
    std::vector<double> u(L * q);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      std::uint64_t rem = static_cast<std::uint64_t>(b);
      for (std::size_t i = L; i < N; ++i) {
        s[i] = static_cast<Color>(rem % q);
        rem /= q;
      }
      CompensatedSum eh;
      for (std::size_t i = L; i < N; ++i) {
        eh += site_energy(i, s[i]);
        for (std::size_t j = i + 1; j < N; ++j) eh += -k.coupling(i, j) * spec.phi(s[i] - s[j]);
      }
      const double E_high = eh.value();
      for (std::size_t l = 0; l < L; ++l)
        for (int c = 0; c < q; ++c) {
          CompensatedSum x;
          for (std::size_t h = L; h < N; ++h) x += -k.coupling(l, h) * spec.phi(c - s[h]);
          u[l * q + c] = x.value();
        }
      std::fill(s.begin(), s.begin() + L, 0);
      Accumulator& acc = parts[static_cast<std::size_t>(b)];
      for (std::uint64_t idx = 0; idx < low_states; ++idx) {
        double cross = 0.0;
        for (std::size_t l = 0; l < L; ++l) cross += u[l * q + s[l]];
        const double energy = E_high + E_low[idx] + cross;
        acc.add(-beta * energy, s.data(), N, q, fns);
        for (std::size_t i = 0; i < L; ++i) {
          if (++s[i] < q) break;
          s[i] = 0;
        }
      }
    }
  }
  Accumulator total(cells, fns.size());
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace

ExactResult exact_partition(const ModelInstance& m, Color exterior, const std::vector<LocalFunction>& functions,
                            double budget) {
  state_count(m.window().size(), m.q(), budget);
  const auto fns = prepare(functions, m.window(), m.q());
  return finish(enumerate_blocks(m, exterior, fns, true), m, functions);
}

double log_partition(const ModelInstance& m, Color exterior, double budget) {
  state_count(m.window().size(), m.q(), budget);
  return enumerate_blocks(m, exterior, {}, false).Z.value();
}

ExactResult exact_partition_serial(const ModelInstance& m, Color exterior, const std::vector<LocalFunction>& functions,
                                   const std::vector<std::uint64_t>* order, double budget) {
  const std::size_t N = m.window().size();
  const int q = m.q();
  const std::uint64_t states = state_count(N, q, budget);
  const auto fns = prepare(functions, m.window(), q);
  Accumulator acc(N * q, fns.size());
  SpinConfig s(m.window(), q, exterior, std::vector<Color>(N, 0));
  for (std::uint64_t t = 0; t < states; ++t) {
    std::uint64_t idx = order ? (*order)[t] : t;
    for (std::size_t i = 0; i < N; ++i) {
      s.set(i, static_cast<Color>(idx % q));
      idx /= q;
    }
    const double logw = -m.beta * hamiltonian_phi_serial(s, m);
    acc.add(logw, s.spins().data(), N, q, fns);
  }
  return finish(acc, m, functions);
}

double expectation(const LocalFunction& f, const ModelInstance& m, Color exterior) {
  return exact_partition(m, exterior, {f}).expectations.at(f.id);
}

LocalFunction character_function(std::string id, const std::vector<Site>& support, int q,
                                 const std::vector<std::vector<int>>& ks, const std::vector<double>& weights) {
  if (ks.size() != weights.size()) throw std::invalid_argument("character_function: weights mismatch");
  for (double w : weights)
    if (w < 0) throw std::invalid_argument("character_function: weights must be nonnegative");
  std::size_t states = 1;
  for (std::size_t i = 0; i < support.size(); ++i) states *= q;
  LocalFunction f{std::move(id), support, std::vector<double>(states, 0.0)};
  std::vector<int> s(support.size(), 0);
  for (std::size_t idx = 0; idx < states; ++idx) {
    CompensatedSum v;
    for (std::size_t t = 0; t < ks.size(); ++t) {
      int dot = 0;
      for (std::size_t i = 0; i < s.size(); ++i) dot += ks[t][i] * s[i];
      v += weights[t] * std::cos(2.0 * std::numbers::pi * mod_q(dot, q) / q);
    }
    f.table[idx] = v.value();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (++s[i] < q) break;
      s[i] = 0;
    }
  }
  return f;
}

GriffithsReport griffiths_checks(const GriffithsOptions& opt) {
  GriffithsReport rep;
  const auto& spec = opt.interaction;
  const int q = spec.q();
  if (!is_positive_semidefinite(spec.phi_values())) {
    rep.skipped = true;
    rep.reason = "phi is not positive semidefinite; the correlation inequalities are not implied";
    return rep;
  }
  const Region small = box_region(centered_box(opt.small_sides));
  const Region large = box_region(centered_box(opt.large_sides));
  if (!is_subset(small, large)) throw std::invalid_argument("griffiths: small window must lie inside the large one");
  const CouplingKernel ks(opt.J, opt.alpha, small);
  const CouplingKernel kl(opt.J, opt.alpha, large);
  std::mt19937_64 gen(opt.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  auto random_psd = [&](const std::string& id) {
    const std::size_t nsup = 1 + static_cast<std::size_t>(U(gen) * 2.0);
    std::vector<Site> sup;
    std::vector<std::size_t> pick(small.size());
    for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
    std::shuffle(pick.begin(), pick.end(), gen);
    for (std::size_t i = 0; i < std::min(nsup, pick.size()); ++i) sup.push_back(small[pick[i]]);
    const int terms = 1 + static_cast<int>(U(gen) * 3.0);
    std::vector<std::vector<int>> ks_(terms, std::vector<int>(sup.size()));
    std::vector<double> ws(terms);
    for (int t = 0; t < terms; ++t) {
      for (auto& v : ks_[t]) v = static_cast<int>(U(gen) * q);
      ws[t] = U(gen);
    }
    return character_function(id, sup, q, ks_, ws);
  };

  auto product = [&](const LocalFunction& f, const LocalFunction& g) {
    // f g on the union of supports
    std::vector<Site> sup = f.support;
    for (const auto& x : g.support)
      if (std::find(sup.begin(), sup.end(), x) == sup.end()) sup.push_back(x);
    std::size_t states = 1;
    for (std::size_t i = 0; i < sup.size(); ++i) states *= q;
    LocalFunction h{"fg", sup, std::vector<double>(states)};
    std::vector<Color> s(sup.size(), 0);
    for (std::size_t idx = 0; idx < states; ++idx) {
      std::vector<Color> vf, vg;
      for (const auto& x : f.support) vf.push_back(s[std::find(sup.begin(), sup.end(), x) - sup.begin()]);
      for (const auto& x : g.support) vg.push_back(s[std::find(sup.begin(), sup.end(), x) - sup.begin()]);
      h.table[idx] = f(vf) * g(vg);
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (++s[i] < q) break;
        s[i] = 0;
      }
    }
    return h;
  };

  auto note = [&](int which, double slack) {
    rep.worst[which] = std::min(rep.worst[which], slack);
    if (slack < -opt.tol) ++rep.violations[which];
  };

  for (int t = 0; t < opt.trials; ++t) {
    const double beta = U(gen) * opt.beta_max;
    std::vector<double> h_large(large.size());
    for (auto& v : h_large) v = U(gen) * opt.field_max;
    std::vector<double> h_small(small.size());
    for (std::size_t i = 0; i < small.size(); ++i) h_small[i] = h_large[large.index_of(small[i])];

    const LocalFunction f = random_psd("f");
    const LocalFunction g = random_psd("g");
    const LocalFunction fg = product(f, g);

    const ModelInstance ms(ks, spec, scalar_field(h_small, spec, small), beta);
    const auto r = exact_partition(ms, 0, {f, g, fg});
    const double Ef = r.expectations.at("f"), Eg = r.expectations.at("g"), Efg = r.expectations.at("fg");
    note(0, Ef);
    note(1, Efg - Ef * Eg);

    const std::size_t z = static_cast<std::size_t>(U(gen) * small.size()) % small.size();
    std::vector<double> bumped = h_small;
    bumped[z] += 0.05 + U(gen);
    const ModelInstance mb(ks, spec, scalar_field(bumped, spec, small), beta);
    note(2, exact_partition(mb, 0, {f}).expectations.at("f") - Ef);

    const ModelInstance ml(kl, spec, scalar_field(h_large, spec, large), beta);
    note(3, Ef - exact_partition(ml, 0, {f}).expectations.at("f"));
    ++rep.cases;
  }
  return rep;
}

std::vector<PeierlsRow> peierls_comparison(const CouplingKernel& k, const InteractionSpec& spec,
                                           const BoundConstants& c, const std::vector<double>& betas) {
  const Site origin(k.dim());
  if (!k.window().contains(origin)) throw std::invalid_argument("peierls: window must contain the origin");
  std::vector<PeierlsRow> rows;
  for (double beta : betas) {
    PeierlsRow row;
    row.beta = beta;
    const double E = peierls_exponent(beta, c, spec.q());
    row.bound = peierls_tail(beta, c, spec.q());
    row.log_bound = -E - std::log(-std::expm1(-E));
    const ModelInstance m(k, spec, beta);
    const auto r = exact_partition(m, 0);
    row.log_exact = r.log_prob_not(origin, 0);
    row.exact = std::exp(row.log_exact);
    row.holds = row.log_exact <= row.log_bound + 1e-12;
    rows.push_back(row);
  }
  return rows;
}

CensusResult contour_census(int d, int q, int n_max, int window_side, const MaParams& p, double c1, double budget) {
  const Region window = box_region(centered_box(d, window_side));
  const std::uint64_t states = state_count(window.size(), q, budget);
  // key: translated support coordinates followed by spins; value: |V|
  std::map<std::vector<int>, std::size_t> classes;
#pragma omp parallel
  {
    std::map<std::vector<int>, std::size_t> local;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(states); ++idx) {
      const SpinConfig s(window, q, 0, decode_configuration(static_cast<std::uint64_t>(idx), window.size(), q));
      if (s.is_ground()) continue;
      const auto fam = extract_contours(s, p);
      for (const auto& g : fam.contours) {
        if (static_cast<int>(g.size()) > n_max) continue;
        const Site base = g.support.min_site();
        std::vector<int> key;
        key.reserve(g.size() * (d + 1));
        for (const auto& x : g.support)
          for (int i = 0; i < d; ++i) key.push_back(x.x[i] - base.x[i]);
        for (Color c : g.spins) key.push_back(c);
        local.emplace(std::move(key), g.volume.size());
      }
    }
#pragma omp critical
    classes.merge(local);
  }
  CensusResult res;
  res.configurations = states;
  res.classes = classes.size();
  std::vector<std::uint64_t> count(n_max + 1, 0);
  for (const auto& [key, vol] : classes) {
    const int n = static_cast<int>(key.size() / (d + 1));
    count[n] += vol;  // translates placing the origin in V
  }
  const double bound_rate = std::log(static_cast<double>(q)) + c1;
  res.c1_required = kNegInf;
  for (int n = 1; n <= n_max; ++n) {
    CensusRow row;
    row.n = n;
    row.count = count[n];
    row.rate = count[n] ? std::log(static_cast<double>(count[n])) / n : kNegInf;
    row.bound_rate = bound_rate;
    row.within = row.rate <= bound_rate;
    if (count[n]) res.c1_required = std::max(res.c1_required, row.rate - std::log(static_cast<double>(q)));
    res.c1_adequate = res.c1_adequate && row.within;
    res.rows.push_back(row);
  }
  return res;
}

}  // namespace lrq
