#include "lrq/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "lrq/sum.hpp"

namespace lrq {

Algorithm parse_algorithm(const std::string& s) {
  if (s == "metropolis") return Algorithm::metropolis;
  if (s == "heat_bath" || s == "heatbath" || s == "heat-bath") return Algorithm::heat_bath;
  throw std::invalid_argument("unknown algorithm: " + s);
}

std::string to_string(Algorithm a) { return a == Algorithm::metropolis ? "metropolis" : "heat_bath"; }

InitialState parse_initial_state(const std::string& s) {
  if (s == "ground") return InitialState::ground;
  if (s == "random") return InitialState::random;
  if (s == "checker") return InitialState::checker;
  throw std::invalid_argument("unknown initial state: " + s);
}

std::string to_string(InitialState s) {
  switch (s) {
    case InitialState::ground: return "ground";
    case InitialState::random: return "random";
    case InitialState::checker: return "checker";
  }
  return "?";
}

std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
  // splitmix64 of a (seed, replica) mix
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (replica + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> move_probabilities(Algorithm a, const std::vector<double>& dE, double beta) {
  const std::size_t q = dE.size();
  std::vector<double> p(q, 0.0);
  if (a == Algorithm::metropolis) {
    double stay = 1.0;
    for (std::size_t t = 1; t < q; ++t) {
      const double acc = dE[t] <= 0 ? 1.0 : std::exp(-beta * dE[t]);
      p[t] = acc / static_cast<double>(q - 1);
      stay -= p[t];
    }
    p[0] = stay;
  } else {
    double lo = dE[0];
    for (double e : dE) lo = std::min(lo, e);
    double z = 0.0;
    for (std::size_t t = 0; t < q; ++t) z += p[t] = std::exp(-beta * (dE[t] - lo));
    for (auto& v : p) v /= z;
  }
  return p;
}

double integrated_autocorrelation(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.5;
  double mean = 0;
  for (double v : x) mean += v;
  mean /= n;
  double c0 = 0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  c0 /= n;
  if (c0 <= 0) return 0.5;
  double tau = 0.5;
  for (std::size_t t = 1; t < n; ++t) {
    double c = 0;
    for (std::size_t i = 0; i + t < n; ++i) c += (x[i] - mean) * (x[i + t] - mean);
    tau += c / n / c0;
    if (static_cast<double>(t) >= 5.0 * tau) break;
  }
  return std::max(tau, 0.5);
}

namespace {

// Uniform in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline std::size_t uniform_index(std::mt19937_64& g, std::size_t n) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(g()) * n) >> 64);
}

// Per-site sums G[i][n] = sum_{j != i, s_j = n} J_ij, updated in O(N) per accepted move.
struct LocalFields {
  std::size_t N;
  int q;
  std::vector<double> J;  // dense N x N
  std::vector<double> G;  // [n * N + i]

  LocalFields(const CouplingKernel& k, const std::vector<Color>& s, int q_) : N(k.size()), q(q_) {
    J.assign(N * N, 0.0);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        if (i != j) J[i * N + j] = k.coupling(i, j);
    G.assign(static_cast<std::size_t>(q) * N, 0.0);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) G[s[j] * N + i] += J[i * N + j];
  }

  void move(std::size_t j, Color from, Color to) {
    const double* row = &J[j * N];
    double* gf = &G[from * N];
    double* gt = &G[to * N];
    for (std::size_t i = 0; i < N; ++i) {
      gf[i] -= row[i];
      gt[i] += row[i];
    }
  }
};

}  // namespace

ChainStats run_chain(const ChainSpec& spec) {
  if (!(spec.sweeps > spec.burn_in && spec.burn_in >= 0))
    throw std::invalid_argument("chain: need sweeps > burn_in >= 0");
  const ModelInstance& m = spec.model;
  const int q = m.q();
  const std::size_t N = m.window().size();
  if (N > 4096) throw std::invalid_argument("chain: window larger than 4096 sites");
  const Color r = mod_q(spec.exterior, q);
  const Site obs = spec.observed.dim == 0 ? Site(m.kernel.dim()) : spec.observed;
  const std::size_t o = m.window().index_of(obs);
  if (o == Region::npos) throw std::invalid_argument("chain: observed site outside window");

  std::mt19937_64 gen(spec.seed);
  std::vector<Color> s(N, r);
  if (spec.initial == InitialState::random) {
    for (auto& c : s) c = static_cast<Color>(uniform_index(gen, q));
  } else if (spec.initial == InitialState::checker) {
    for (std::size_t i = 0; i < N; ++i) {
      const Site& x = m.window()[i];
      int par = 0;
      for (int a = 0; a < x.dim; ++a) par += x.x[a];
      s[i] = mod_q(r + (par & 1), q);
    }
  }
  LocalFields lf(m.kernel, s, q);
  const auto& phi = m.interaction;
  const double beta = m.beta;

  // W(i, c): minus the energy of site i in color c, relative sums taken in an order that
  // only depends on colors relative to the current spin.
  auto W = [&](std::size_t i, Color c) {
    const Color a = s[i];
    double w = 0.0;
    for (int t = 0; t < q; ++t) {
      const Color n = mod_q(a + t, q);
      w += phi.phi(c - n) * lf.G[n * N + i];
    }
    return w + m.kernel.exterior(i) * phi.phi(c - r) + m.field.at(i, c);
  };

  ChainStats st;
  st.occupancy.assign(q, 0.0);
  st.occupancy_se.assign(q, 0.0);
  std::size_t count_r = static_cast<std::size_t>(std::count(s.begin(), s.end(), r));
  std::uint64_t attempted = 0, accepted = 0;
  std::vector<double> dE(q);
  for (int sweep = 0; sweep < spec.sweeps; ++sweep) {
    for (std::size_t step = 0; step < N; ++step) {
      const std::size_t i = uniform_index(gen, N);
      const Color a = s[i];
      Color c = a;
      if (spec.algorithm == Algorithm::metropolis) {
        const int t = 1 + static_cast<int>(uniform_index(gen, q - 1));
        const Color prop = mod_q(a + t, q);
        const double d = W(i, a) - W(i, prop);
        if (d <= 0 || uniform01(gen) < std::exp(-beta * d)) c = prop;
      } else {
        const double w0 = W(i, a);
        for (int t = 0; t < q; ++t) dE[t] = t == 0 ? 0.0 : w0 - W(i, mod_q(a + t, q));
        const auto p = move_probabilities(Algorithm::heat_bath, dE, beta);
        double u = uniform01(gen);
        int t = 0;
        while (t + 1 < q && u >= p[t]) u -= p[t++];
        c = mod_q(a + t, q);
      }
      ++attempted;
      if (c != a) {
        ++accepted;
        lf.move(i, a, c);
        s[i] = c;
        if (a == r) --count_r;
        if (c == r) ++count_r;
      }
    }
    if (sweep >= spec.burn_in) {
      st.trace.push_back(s[o]);
      st.magnetization.push_back((q * static_cast<double>(count_r) / N - 1.0) / (q - 1));
    }
  }
  st.samples = st.trace.size();
  st.acceptance = attempted ? static_cast<double>(accepted) / attempted : 0.0;
  for (int c = 0; c < q; ++c) {
    std::vector<double> ind(st.samples);
    for (std::size_t t = 0; t < st.samples; ++t) ind[t] = st.trace[t] == c ? 1.0 : 0.0;
    double mean = 0;
    for (double v : ind) mean += v;
    mean /= st.samples;
    double var = 0;
    for (double v : ind) var += (v - mean) * (v - mean);
    var /= std::max<std::size_t>(st.samples - 1, 1);
    const double tau = integrated_autocorrelation(ind);
    const double ess = std::min(static_cast<double>(st.samples), st.samples / (2.0 * tau));
    st.occupancy[c] = mean;
    st.occupancy_se[c] = std::sqrt(var / ess);
    if (c == r) st.ess = ess;
  }
  st.final_fingerprint = SpinConfig(m.window(), q, r, s).fingerprint();
  return st;
}

ReplicaStats run_replicas(const ChainSpec& spec, int replicas) {
  if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  ReplicaStats out;
  out.replicas.resize(replicas);
#pragma omp parallel for schedule(dynamic, 1)
  for (int rep = 0; rep < replicas; ++rep) {
    ChainSpec s = spec;
    s.seed = replica_seed(spec.seed, static_cast<std::uint64_t>(rep));
    out.replicas[rep] = run_chain(s);
  }
  const int q = spec.model.q();
  out.occupancy.assign(q, 0.0);
  out.occupancy_se.assign(q, 0.0);
  std::vector<double> var(q, 0.0);
  double acc = 0;
  for (const auto& r : out.replicas) {
    out.samples += r.samples;
    out.ess += r.ess;
    acc += r.acceptance;
    for (int c = 0; c < q; ++c) {
      out.occupancy[c] += r.occupancy[c] * r.samples;
      var[c] += std::pow(r.occupancy_se[c] * r.samples, 2);
    }
  }
  for (int c = 0; c < q; ++c) {
    out.occupancy[c] /= out.samples;
    out.occupancy_se[c] = std::sqrt(var[c]) / out.samples;
  }
  out.acceptance = acc / replicas;
  return out;
}

TransitionReport transition_matrix_check(const ModelInstance& m, Algorithm a, Color exterior) {
  const int q = m.q();
  const std::size_t N = m.window().size();
  double states_d = std::pow(static_cast<double>(q), static_cast<double>(N));
  if (states_d > 64) throw std::invalid_argument("transition check: more than 64 states");
  const std::size_t S = static_cast<std::size_t>(std::llround(states_d));
  TransitionReport rep;
  rep.states = S;

  auto decode = [&](std::size_t idx) {
    std::vector<Color> s(N);
    for (std::size_t i = 0; i < N; ++i) {
      s[i] = static_cast<Color>(idx % q);
      idx /= q;
    }
    return s;
  };
  std::vector<std::size_t> pw(N, 1);
  for (std::size_t i = 1; i < N; ++i) pw[i] = pw[i - 1] * q;

  LogSumExp lz;
  std::vector<double> logw(S);
  for (std::size_t x = 0; x < S; ++x) {
    logw[x] = -m.beta * hamiltonian_phi_serial(SpinConfig(m.window(), q, exterior, decode(x)), m);
    lz.add(logw[x]);
  }
  rep.gibbs.resize(S);
  for (std::size_t x = 0; x < S; ++x) rep.gibbs[x] = std::exp(logw[x] - lz.value());

  std::vector<double> P(S * S, 0.0);
  for (std::size_t x = 0; x < S; ++x) {
    const SpinConfig s(m.window(), q, exterior, decode(x));
    for (std::size_t i = 0; i < N; ++i) {
      std::vector<double> dE(q, 0.0);
      for (int t = 1; t < q; ++t) dE[t] = energy_delta(s, i, s[i] + t, m);
      const auto p = move_probabilities(a, dE, m.beta);
      for (int t = 0; t < q; ++t) {
        const Color c = mod_q(s[i] + t, q);
        const std::size_t y = x + (static_cast<std::size_t>(c) - static_cast<std::size_t>(s[i])) * pw[i];
        P[x * S + y] += p[t] / N;
      }
      if (a == Algorithm::heat_bath) {
        // Gibbs conditional of site i from the full energies
        std::vector<double> lw(q);
        LogSumExp l;
        for (int t = 0; t < q; ++t) {
          SpinConfig u = s;
          u.set(i, s[i] + t);
          lw[t] = -m.beta * hamiltonian_phi_serial(u, m);
          l.add(lw[t]);
        }
        for (int t = 0; t < q; ++t)
          rep.conditional_error = std::max(rep.conditional_error, std::fabs(p[t] - std::exp(lw[t] - l.value())));
      }
    }
  }
  for (std::size_t x = 0; x < S; ++x) {
    double row = 0;
    for (std::size_t y = 0; y < S; ++y) {
      row += P[x * S + y];
      const double e = std::fabs(rep.gibbs[x] * P[x * S + y] - rep.gibbs[y] * P[y * S + x]);
      rep.detailed_balance_error = std::max(rep.detailed_balance_error, e);
    }
    rep.row_sum_error = std::max(rep.row_sum_error, std::fabs(row - 1.0));
  }
  // reachability from state 0 in the graph of positive off-diagonal entries, both ways
  auto reach_all = [&](bool forward) {
    std::vector<char> seen(S, 0);
    std::vector<std::size_t> st{0};
    seen[0] = 1;
    while (!st.empty()) {
      const std::size_t x = st.back();
      st.pop_back();
      for (std::size_t y = 0; y < S; ++y) {
        const double p = forward ? P[x * S + y] : P[y * S + x];
        if (p > 0 && !seen[y]) {
          seen[y] = 1;
          st.push_back(y);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  rep.irreducible = reach_all(true) && reach_all(false);
  // lazy power iteration from the uniform law
  std::vector<double> v(S, 1.0 / S), nv(S);
  for (int it = 0; it < 200000; ++it) {
    std::fill(nv.begin(), nv.end(), 0.0);
    for (std::size_t x = 0; x < S; ++x)
      for (std::size_t y = 0; y < S; ++y) nv[y] += v[x] * (0.5 * P[x * S + y] + (x == y ? 0.5 : 0.0));
    double diff = 0;
    for (std::size_t x = 0; x < S; ++x) diff = std::max(diff, std::fabs(nv[x] - v[x]));
    v.swap(nv);
    if (diff < 1e-16) break;
  }
  rep.stationary = v;
  for (std::size_t x = 0; x < S; ++x)
    rep.stationary_error = std::max(rep.stationary_error, std::fabs(v[x] - rep.gibbs[x]));
  return rep;
}

std::vector<SweepRow> phase_sweep(const SweepOptions& opt) {
  const Region window = box_region(centered_box(opt.d, opt.L));
  const CouplingKernel k(opt.J, opt.alpha, window);
  const InteractionSpec spec = InteractionSpec::preset(opt.interaction, opt.q);
  std::vector<SweepRow> rows;
  for (std::uint64_t ds : opt.disorder_seeds) {
    FieldParams fp = opt.field_params;
    fp.seed = ds;
    const FieldAssignment field = make_field(opt.field, fp, window, opt.q);
    for (std::size_t b = 0; b < opt.betas.size(); ++b) {
      const double beta = opt.betas[b];
      ChainSpec cs{ModelInstance(k, spec, field, beta)};
      cs.exterior = 0;
      cs.sweeps = opt.sweeps;
      cs.burn_in = opt.burn_in;
      cs.seed = replica_seed(opt.seed ^ ds, b);
      cs.algorithm = opt.algorithm;
      cs.initial = beta >= opt.ground_above ? InitialState::ground : InitialState::random;
      const auto rs = run_replicas(cs, opt.replicas);
      SweepRow row;
      row.beta = beta;
      row.L = opt.L;
      row.alpha = opt.alpha;
      row.q = opt.q;
      row.field = field.descriptor();
      row.disorder_seed = ds;
      row.mu_hat = rs.occupancy[0];
      row.stderr_ = rs.occupancy_se[0];
      row.ess = rs.ess;
      row.acceptance = rs.acceptance;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace lrq
