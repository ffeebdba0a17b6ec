#include "lrq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lrq/sum.hpp"

namespace lrq {

BoundConstants compute_constants(int d, double alpha, double J, int q, double m, double c1, Norm norm) {
  if (!(alpha > d)) throw std::domain_error("constants: alpha must exceed d");
  if (!(J > 0)) throw std::invalid_argument("constants: J must be positive");
  if (!(m > 0 && m <= 1)) throw std::invalid_argument("constants: m must lie in (0, 1]");
  if (!(c1 > 0)) throw std::invalid_argument("constants: c1 must be positive");
  if (q < 2) throw std::invalid_argument("constants: q must be >= 2");
  BoundConstants c;
  c.d = d;
  c.alpha = alpha;
  c.J = J;
  c.q = q;
  c.m = m;
  c.c1 = c1;
  const double gap = std::min(alpha - d, 1.0);
  c.a = 3.0 * (d + 1) / gap;
  c.c_alpha = lrq::c_alpha(d, alpha, 1e-12, norm).value;
  c.kappa2 = (1.0 + 1.0 / J) * (J * std::pow(2.0, d - 1 + alpha) * std::exp(d - 1.0) / (alpha - d) +
                                3.0 * zeta(c.a / (d + 1) - 1.0).value);
  c.M_min = std::pow(std::pow(2.0, alpha + 5) * (2 * d + 1) * c.kappa2 / m, 1.0 / gap);
  c.c2 = m / ((2 * d + 1) * std::pow(2.0, alpha + 1)) * std::min(J * c.c_alpha, 1.0 / 8.0);
  c.beta0 = (c1 + std::log(5.0) + std::log(static_cast<double>(q))) / c.c2;
  return c;
}

LemmaReport check_lemma_geometric(const Site& x, const Site& y, const CouplingKernel& k) {
  if (x == y) throw std::invalid_argument("lemma: x and y must differ");
  LemmaReport r;
  r.lhs = k.coupling(x, y);
  CompensatedSum acc;
  for (const auto& xp : l1_ball(x, 1)) acc += k.coupling(xp, y);
  const int d = x.dim;
  r.rhs = acc.value() / ((2 * d + 1) * std::pow(2.0, k.alpha()));
  r.holds = r.lhs >= r.rhs;
  return r;
}

LemmaReport check_lemma_incorrect(const SpinConfig& s, const Contour& g, const Site& y,
                                  const CouplingKernel& k, const InteractionSpec& spec) {
  for (std::size_t i = 0; i < g.support.size(); ++i)
    if (s.at(g.support[i]) != g.spins[i]) throw std::invalid_argument("lemma: contour does not match configuration");
  LemmaReport r;
  CompensatedSum lhs, rhs;
  const Color sy = s.at(y);
  for (const auto& x : g.support) {
    rhs += k.coupling(x, y);
    if (x == y) continue;
    const double w = spec.psi(s.at(x) - sy);
    if (w == 0.0) continue;
    for (const auto& xp : l1_ball(x, 1)) lhs += k.coupling(xp, y) * w;
  }
  r.lhs = lhs.value();
  r.rhs = spec.m() * rhs.value();
  r.holds = r.lhs >= r.rhs - kBoundSlack;
  return r;
}

std::string to_string(BoundMode m) { return m == BoundMode::theorem ? "theorem" : "diagnostic"; }

EnergyBoundReport verify_energy_bound(const SpinConfig& s, const ContourFamily& f, std::size_t index,
                                      const CouplingKernel& k, const InteractionSpec& spec,
                                      double M_used, const BoundConstants& c) {
  if (index >= f.contours.size()) throw std::invalid_argument("energy bound: empty or missing contour");
  const Contour& g = f.contours[index];
  if (g.support.empty()) throw std::invalid_argument("energy bound: empty contour");
  const SpinConfig t = erase(s, f, index);  // checks externality and exterior color
  EnergyBoundReport r;
  r.gamma_size = g.size();
  r.lhs = interaction_energy_psi(s, k, spec) - interaction_energy_psi(t, k, spec);
  CompensatedSum F;
  F += static_cast<double>(g.size());
  F += surface_coupling(g.support, k).value;
  for (int n = 1; n < s.q(); ++n) F += surface_coupling(g.interior_by_label[n], k).value;
  F += surface_coupling(g.interior_prime, k).value;
  r.rhs = c.c2 * F.value();
  r.margin = r.lhs - r.rhs;
  r.holds = r.lhs >= r.rhs - kBoundSlack;
  r.mode = M_used >= c.M_min ? BoundMode::theorem : BoundMode::diagnostic;
  return r;
}

double peierls_exponent(double beta, const BoundConstants& c, int q) {
  return beta * c.c2 - c.c1 - std::log(static_cast<double>(q));
}

double peierls_tail(double beta, const BoundConstants& c, int q) {
  const double E = peierls_exponent(beta, c, q);
  if (!(E > 0)) throw std::domain_error("peierls_tail: series diverges (beta c2 <= c1 + log q)");
  return std::exp(-E) / -std::expm1(-E);
}

double truncation_radius(double h_star, double delta, double c2) {
  if (!(delta > 0) || !(c2 > 0)) throw std::invalid_argument("truncation radius: need delta > 0 and c2 > 0");
  double R = std::max(1.0, std::floor(std::pow(2.0 * h_star / c2, 1.0 / delta)));
  while (!(std::pow(R, delta) > 2.0 * h_star / c2)) R += 1;
  return R;
}

DecayingReport check_decaying_field(const Region& L, const FieldAssignment& hhat, const CouplingKernel& k, double c2) {
  DecayingReport r;
  r.surface = c2 * surface_coupling(L, k).value;
  for (int n = 0; n < hhat.q(); ++n) {
    CompensatedSum acc;
    for (const auto& x : L) acc += hhat.value(x, n);
    r.field_sum = std::max(r.field_sum, acc.value());
  }
  r.slack = r.surface - r.field_sum;
  r.holds = r.slack >= 0;
  return r;
}

std::vector<Color> decode_configuration(std::uint64_t index, std::size_t sites, int q) {
  std::vector<Color> s(sites);
  for (std::size_t i = 0; i < sites; ++i) {
    s[i] = static_cast<Color>(index % q);
    index /= q;
  }
  return s;
}

namespace {

// Dense geometry of the window inflated by one site, where every incorrect point lives.
struct PaddedGeometry {
  Box box;
  std::size_t cells = 0;
  std::vector<int> window_cell;           // window index -> cell
  std::vector<std::vector<int>> nbr;      // -1 marks a neighbour outside the box
  std::vector<char> on_border;
  std::size_t A = 0;                      // number of alphas
  std::vector<double> pairJ;              // [(c1 * cells + c2) * A + a]
  std::vector<double> total;              // J c_alpha per alpha
  std::vector<double> exterior;           // [window index * A + a]
  std::vector<double> c2;
};

PaddedGeometry build_geometry(const Region& window, const std::vector<double>& alphas, double J,
                              const std::vector<double>& c2) {
  PaddedGeometry G;
  G.box = bounding_box(window).inflated(1);
  G.cells = G.box.volume();
  const auto st = G.box.strides();
  G.nbr.resize(G.cells);
  G.on_border.assign(G.cells, 0);
  for (std::size_t c = 0; c < G.cells; ++c) {
    const Site x = G.box.site(c);
    for (int i = 0; i < G.box.dim(); ++i) {
      const int off = x.x[i] - G.box.lo.x[i];
      G.nbr[c].push_back(off > 0 ? static_cast<int>(c - st[i]) : -1);
      G.nbr[c].push_back(off + 1 < G.box.extent[i] ? static_cast<int>(c + st[i]) : -1);
      if (off == 0 || off + 1 == G.box.extent[i]) G.on_border[c] = 1;
    }
  }
  for (const auto& s : window) G.window_cell.push_back(static_cast<int>(G.box.index(s)));
  G.A = alphas.size();
  G.pairJ.assign(G.cells * G.cells * G.A, 0.0);
  G.exterior.assign(window.size() * G.A, 0.0);
  G.c2 = c2;
  for (std::size_t a = 0; a < G.A; ++a) {
    CouplingKernel k(J, alphas[a], window);
    G.total.push_back(k.total());
    for (std::size_t c1 = 0; c1 < G.cells; ++c1)
      for (std::size_t c2i = 0; c2i < G.cells; ++c2i)
        G.pairJ[(c1 * G.cells + c2i) * G.A + a] = k.coupling(G.box.site(c1), G.box.site(c2i));
    for (std::size_t i = 0; i < window.size(); ++i) G.exterior[i * G.A + a] = k.exterior(i);
  }
  return G;
}

// Scratch buffers for one worker.
struct Worker {
  std::vector<Color> col;
  std::vector<char> sp, reach;
  std::vector<int> stack, list;
  std::vector<int> comp_label;
  std::vector<double> acc, F;

  explicit Worker(const PaddedGeometry& G)
      : col(G.cells), sp(G.cells), reach(G.cells), comp_label(G.cells), acc(G.A), F(G.A) {}

  // sum over the cells in list of |list| total - 2 sum_{pairs} J, for every alpha, added into out.
  void add_surface(const PaddedGeometry& G, const std::vector<int>& cells, std::vector<double>& out) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t u = 0; u < cells.size(); ++u) {
      const double* row = &G.pairJ[static_cast<std::size_t>(cells[u]) * G.cells * G.A];
      for (std::size_t v = u + 1; v < cells.size(); ++v) {
        const double* p = row + static_cast<std::size_t>(cells[v]) * G.A;
        for (std::size_t a = 0; a < G.A; ++a) acc[a] += p[a];
      }
    }
    for (std::size_t a = 0; a < G.A; ++a) out[a] += cells.size() * G.total[a] - 2.0 * acc[a];
  }
};

struct Partial {
  std::vector<std::uint64_t> count, bad;
  std::vector<double> min_margin, min_ratio;
  explicit Partial(std::size_t A)
      : count(A, 0), bad(A, 0), min_margin(A, std::numeric_limits<double>::infinity()),
        min_ratio(A, std::numeric_limits<double>::infinity()) {}
};

// Evaluates one configuration; returns false for the ground state.
bool evaluate(const PaddedGeometry& G, const std::vector<Color>& spins, int q, const InteractionSpec& spec,
              Worker& w, std::vector<double>& lhs, std::vector<double>& rhs, std::size_t& gsize) {
  std::fill(w.col.begin(), w.col.end(), 0);
  for (std::size_t i = 0; i < spins.size(); ++i) w.col[G.window_cell[i]] = spins[i];
  std::vector<int>& sp_cells = w.list;
  sp_cells.clear();
  for (std::size_t c = 0; c < G.cells; ++c) {
    char bad = 0;
    for (int nb : G.nbr[c])
      if ((nb < 0 ? 0 : w.col[nb]) != w.col[c]) bad = 1;
    w.sp[c] = bad;
    if (bad) sp_cells.push_back(static_cast<int>(c));
  }
  if (sp_cells.empty()) return false;
  gsize = sp_cells.size();
  // Flood the complement of the support from the border of the padded box.
  std::fill(w.reach.begin(), w.reach.end(), 0);
  w.stack.clear();
  for (std::size_t c = 0; c < G.cells; ++c)
    if (G.on_border[c] && !w.sp[c]) {
      w.reach[c] = 1;
      w.stack.push_back(static_cast<int>(c));
    }
  while (!w.stack.empty()) {
    const int c = w.stack.back();
    w.stack.pop_back();
    for (int nb : G.nbr[c])
      if (nb >= 0 && !w.reach[nb] && !w.sp[nb]) {
        w.reach[nb] = 1;
        w.stack.push_back(nb);
      }
  }
  // Interior cells are correct points, so each interior component is monochromatic and its
  // label is its own color; tau_gamma is therefore the ground state.
  std::vector<std::vector<int>> by_label(q);
  std::vector<int> prime;
  for (std::size_t c = 0; c < G.cells; ++c)
    if (!w.reach[c] && !w.sp[c]) {
      by_label[w.col[c]].push_back(static_cast<int>(c));
      if (w.col[c] != 0) prime.push_back(static_cast<int>(c));
    }
  // lhs = H_psi(s) at zero field.
  std::fill(lhs.begin(), lhs.end(), 0.0);
  const std::size_t N = spins.size();
  for (std::size_t i = 0; i < N; ++i) {
    const Color si = spins[i];
    const double pe = spec.psi(si);
    if (pe != 0.0)
      for (std::size_t a = 0; a < G.A; ++a) lhs[a] += G.exterior[i * G.A + a] * pe;
    const double* row = &G.pairJ[static_cast<std::size_t>(G.window_cell[i]) * G.cells * G.A];
    for (std::size_t j = i + 1; j < N; ++j) {
      const double p = spec.psi(si - spins[j]);
      if (p == 0.0) continue;
      const double* pj = row + static_cast<std::size_t>(G.window_cell[j]) * G.A;
      for (std::size_t a = 0; a < G.A; ++a) lhs[a] += pj[a] * p;
    }
  }
  std::fill(w.F.begin(), w.F.end(), static_cast<double>(gsize));
  w.add_surface(G, sp_cells, w.F);
  for (int n = 1; n < q; ++n)
    if (!by_label[n].empty()) w.add_surface(G, by_label[n], w.F);
  if (!prime.empty()) w.add_surface(G, prime, w.F);
  for (std::size_t a = 0; a < G.A; ++a) rhs[a] = G.c2[a] * w.F[a];
  return true;
}

}  // namespace

std::vector<ExhaustiveSummary> verify_exhaustive(const ExhaustiveOptions& opt) {
  const int d = static_cast<int>(opt.sides.size());
  if (opt.interaction.q() != opt.q) throw std::invalid_argument("exhaustive: interaction q mismatch");
  const Region window = box_region(centered_box(opt.sides));
  const std::size_t N = window.size();
  double states = std::pow(static_cast<double>(opt.q), static_cast<double>(N));
  if (states > 1e10) throw std::invalid_argument("exhaustive: too many configurations");
  const std::uint64_t total = static_cast<std::uint64_t>(std::llround(states));

  std::vector<double> c2;
  std::vector<ExhaustiveSummary> out;
  double diam2 = 0;
  for (int i = 0; i < d; ++i) diam2 += std::pow(opt.sides[i] + 1.0, 2);
  for (double alpha : opt.alphas) {
    const auto c = compute_constants(d, alpha, opt.J, opt.q, opt.interaction.m(), opt.c1);
    const double M = opt.M_used > 0 ? opt.M_used : c.M_min;
    if (M < std::sqrt(diam2))
      throw std::invalid_argument("exhaustive: M too small for the single-contour kernel");
    c2.push_back(c.c2);
    ExhaustiveSummary s;
    s.alpha = alpha;
    s.mode = M >= c.M_min ? BoundMode::theorem : BoundMode::diagnostic;
    out.push_back(s);
  }
  const PaddedGeometry G = build_geometry(window, opt.alphas, opt.J, c2);
  const std::size_t A = G.A;

  const std::uint64_t block = 1u << 14;
  const std::int64_t nblocks = static_cast<std::int64_t>((total + block - 1) / block);
  std::vector<Partial> parts(static_cast<std::size_t>(nblocks), Partial(A));

  auto run_block = [&](std::int64_t b, Worker& w) {
    Partial& P = parts[static_cast<std::size_t>(b)];
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * block;
    const std::uint64_t hi = std::min(total, lo + block);
    std::vector<Color> spins = decode_configuration(lo, N, opt.q);
    std::vector<double> lhs(A), rhs(A);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::size_t gsize = 0;
      if (evaluate(G, spins, opt.q, opt.interaction, w, lhs, rhs, gsize)) {
        for (std::size_t a = 0; a < A; ++a) {
          ++P.count[a];
          const double margin = lhs[a] - rhs[a];
          if (!(lhs[a] >= rhs[a] - kBoundSlack)) ++P.bad[a];
          P.min_margin[a] = std::min(P.min_margin[a], margin);
          P.min_ratio[a] = std::min(P.min_ratio[a], lhs[a] / rhs[a]);
          if (opt.sink) opt.sink({idx, a, gsize, lhs[a], rhs[a]});
        }
      }
      for (std::size_t i = 0; i < N; ++i) {
        if (++spins[i] < opt.q) break;
        spins[i] = 0;
      }
    }
  };

  if (opt.sink) {
    Worker w(G);
    for (std::int64_t b = 0; b < nblocks; ++b) run_block(b, w);
  } else {
#pragma omp parallel
    {
      Worker w(G);
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t b = 0; b < nblocks; ++b) run_block(b, w);
    }
  }

  for (std::size_t a = 0; a < A; ++a) {
    auto& s = out[a];
    s.min_margin = std::numeric_limits<double>::infinity();
    s.min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& P : parts) {
      s.configurations += P.count[a];
      s.violations += P.bad[a];
      s.min_margin = std::min(s.min_margin, P.min_margin[a]);
      s.min_ratio = std::min(s.min_ratio, P.min_ratio[a]);
    }
  }
  return out;
}

}  // namespace lrq
