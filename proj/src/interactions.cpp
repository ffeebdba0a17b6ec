#include "lrq/interactions.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lrq/numfmt.hpp"
#include "lrq/sum.hpp"

namespace lrq {

Normalized normalize(const std::vector<double>& phi) {
  const int q = static_cast<int>(phi.size());
  if (q < 2) throw std::invalid_argument("phi needs q >= 2 entries");
  double lo = phi[1];
  for (int n = 1; n < q; ++n) {
    if (!(phi[0] > phi[n])) throw std::invalid_argument("phi is not ferromagnetic: phi(0) <= phi(n)");
    lo = std::min(lo, phi[n]);
  }
  const double scale = phi[0] - lo;
  Normalized r{std::vector<double>(q, 0.0), 1.0};
  for (int n = 1; n < q; ++n) {
    r.psi[n] = (phi[0] - phi[n]) / scale;
    r.m = std::min(r.m, r.psi[n]);
  }
  return r;
}

InteractionSpec::InteractionSpec(std::vector<double> phi, std::string name)
    : name_(std::move(name)), phi_(std::move(phi)) {
  auto nz = normalize(phi_);
  psi_ = std::move(nz.psi);
  m_ = nz.m;
  scale_ = phi_[0] - *std::min_element(phi_.begin() + 1, phi_.end());
}

InteractionSpec InteractionSpec::potts(int q) {
  std::vector<double> phi(q, 0.0);
  phi[0] = 1.0;
  return InteractionSpec(std::move(phi), "potts");
}

InteractionSpec InteractionSpec::clock(int q) {
  std::vector<double> phi(q);
  for (int n = 0; n < q; ++n) phi[n] = std::cos(2.0 * std::numbers::pi * n / q);
  return InteractionSpec(std::move(phi), "clock");
}

InteractionSpec InteractionSpec::preset(const std::string& name, int q) {
  if (name == "potts") return potts(q);
  if (name == "clock") return clock(q);
  throw std::invalid_argument("unknown interaction preset: " + name);
}

std::vector<std::complex<double>> dft_zq(const std::vector<double>& f) {
  const int q = static_cast<int>(f.size());
  std::vector<std::complex<double>> out(q);
  for (int k = 0; k < q; ++k) {
    CompensatedSum re, im;
    for (int n = 0; n < q; ++n) {
      // k*n reduced mod q keeps the angle small and the table exact at k*n = 0.
      const double ang = -2.0 * std::numbers::pi * ((k * n) % q) / q;
      re += f[n] * std::cos(ang);
      im += f[n] * std::sin(ang);
    }
    out[k] = {re.value(), im.value()};
  }
  return out;
}

std::vector<std::complex<double>> inverse_dft_zq(const std::vector<std::complex<double>>& fhat) {
  const int q = static_cast<int>(fhat.size());
  std::vector<std::complex<double>> out(q);
  for (int n = 0; n < q; ++n) {
    std::complex<double> acc = 0;
    for (int k = 0; k < q; ++k) {
      const double ang = 2.0 * std::numbers::pi * ((k * n) % q) / q;
      acc += fhat[k] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[n] = acc / static_cast<double>(q);
  }
  return out;
}

bool is_positive_semidefinite(const std::vector<double>& f, double tol) {
  for (const auto& c : dft_zq(f))
    if (c.real() < -tol || std::fabs(c.imag()) > tol) return false;
  return true;
}

SeriesValue zeta(double s) {
  if (!(s > 1.0)) throw std::domain_error("zeta: needs s > 1");
  // Partial sum to N-1, then the integral tail N^{1-s}/(s-1) with Euler-Maclaurin corrections.
  static const double B2k[] = {1.0 / 6,        -1.0 / 30,       1.0 / 42,          -1.0 / 30,
                               5.0 / 66,       -691.0 / 2730,   7.0 / 6,           -3617.0 / 510,
                               43867.0 / 798,  -174611.0 / 330, 854513.0 / 138};
  const int N = 24;
  CompensatedSum acc;
  for (int n = N - 1; n >= 1; --n) acc += std::pow(n, -s);
  acc += std::pow(N, 1.0 - s) / (s - 1.0);
  acc += 0.5 * std::pow(N, -s);
  double rising = s;      // s (s+1) ... (s+2k-2)
  double fact = 2.0;      // (2k)!
  double npow = std::pow(N, -s - 1.0);
  double last = 0.0;
  for (int k = 1; k <= 11; ++k) {
    const double term = B2k[k - 1] / fact * rising * npow;
    if (k == 11) {
      last = std::fabs(term);
      break;
    }
    acc += term;
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2 * k + 1) * (2 * k + 2);
    npow /= static_cast<double>(N) * N;
  }
  const double v = acc.value();
  return {v, last + 4 * std::numeric_limits<double>::epsilon() * v};
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Number of lattice points on the sphere of radius k, as a polynomial in k.
std::vector<double> shell_polynomial(int d, Norm n) {
  std::vector<double> p(d, 0.0);
  if (n == Norm::linf) {
    // (2k+1)^d - (2k-1)^d
    for (int j = 0; j < d; ++j)
      if ((d - j) % 2 == 1) p[j] = 2.0 * binom(d, j) * std::pow(2.0, j);
    return p;
  }
  // l1: sum_i 2^i C(d,i) C(k-1,i-1)
  for (int i = 1; i <= d; ++i) {
    std::vector<double> c{1.0};  // C(k-1, i-1) = prod_{t=1}^{i-1} (k-t)/t
    for (int t = 1; t < i; ++t) {
      std::vector<double> nc(c.size() + 1, 0.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        nc[j + 1] += c[j] / t;
        nc[j] -= c[j];
      }
      c = std::move(nc);
    }
    const double w = std::pow(2.0, i) * binom(d, i);
    for (std::size_t j = 0; j < c.size(); ++j) p[j] += w * c[j];
  }
  return p;
}

// int_1^inf t^{a-1} e^{-x t} dt for x > 0 and any real a.
double upper_gamma_scaled(double a, double x) {
  static boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [a, x](double u) { return std::exp((a - 1.0) * std::log1p(u) - x * u); };
  return std::exp(-x) * integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-15);
}

// Theta-function split of the Epstein sum for the self-dual lattice Z^d.
SeriesValue epstein(int d, double alpha, double tol) {
  const double s = alpha / 2.0;
  const double pi = std::numbers::pi;
  const double pref = std::pow(pi, s) / std::tgamma(s);
  auto tail_bound = [&](int K) {
    double t = 0.0;
    for (int n = K + 1; n < K + 400; ++n) {
      const double x = pi * n;
      const double shells = std::pow(2.0 * std::sqrt(static_cast<double>(n)) + 1.0, d);
      const double ga = std::exp(-x) / (x - std::max(s - 1.0, 0.0));
      const double gb = std::exp(-x) / (x - std::max(d / 2.0 - s - 1.0, 0.0));
      t += shells * (ga + gb);
    }
    return pref * t;
  };
  int K = 8;
  while (tail_bound(K) > tol / 4 && K < 64) K += 4;
  // r_d(n) for n <= K
  std::vector<double> r(K + 1, 0.0);
  const int rad = static_cast<int>(std::floor(std::sqrt(static_cast<double>(K))));
  Box b;
  b.lo = Site(d);
  for (int i = 0; i < d; ++i) {
    b.lo.x[i] = -rad;
    b.extent[i] = 2 * rad + 1;
  }
  for (std::size_t i = 0; i < b.volume(); ++i) {
    const Site y = b.site(i);
    long long n2 = 0;
    for (int k = 0; k < d; ++k) n2 += static_cast<long long>(y.x[k]) * y.x[k];
    if (n2 >= 1 && n2 <= K) r[n2] += 1.0;
  }
  CompensatedSum acc;
  for (int n = K; n >= 1; --n) {
    if (r[n] == 0.0) continue;
    const double x = pi * n;
    acc += r[n] * (upper_gamma_scaled(s, x) + upper_gamma_scaled(d / 2.0 - s, x));
  }
  acc += 1.0 / (s - d / 2.0) - 1.0 / s;
  const double v = pref * acc.value();
  return {v, tail_bound(K) + 64 * std::numeric_limits<double>::epsilon() * std::fabs(v)};
}

}  // namespace

SeriesValue c_alpha(int d, double alpha, double tol, Norm norm) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("c_alpha: dimension out of range");
  if (!(alpha > d)) throw std::domain_error("c_alpha: lattice sum diverges for alpha <= d");
  if (d == 1) {
    auto z = zeta(alpha);
    return {2.0 * z.value, 2.0 * z.error};
  }
  SeriesValue r{0.0, 0.0};
  if (norm == Norm::l2) {
    r = epstein(d, alpha, tol);
  } else {
    const auto p = shell_polynomial(d, norm);
    CompensatedSum acc;
    for (int j = 0; j < d; ++j) {
      if (p[j] == 0.0) continue;
      auto z = zeta(alpha - j);
      acc += p[j] * z.value;
      r.error += std::fabs(p[j]) * z.error;
    }
    r.value = acc.value();
  }
  // Rounding of a large sum sets a floor below which tol cannot be pushed.
  const double floor = 256 * std::numeric_limits<double>::epsilon() * std::fabs(r.value);
  if (r.error > std::max(tol, floor)) throw std::runtime_error("c_alpha: tolerance not reachable");
  return r;
}

CouplingKernel::CouplingKernel(double J, double alpha, Region window, Norm norm, int margin)
    : J_(J), alpha_(alpha), window_(std::move(window)), norm_(norm) {
  if (!(J > 0)) throw std::invalid_argument("coupling: J must be positive");
  if (window_.empty()) throw std::invalid_argument("coupling: empty window");
  const int d = window_.dim();
  if (is_nearest_neighbor()) {
    total_ = 2.0 * d * J_;
    total_error_ = 0.0;
  } else {
    auto c = c_alpha(d, alpha_, 1e-12, norm_);
    total_ = J_ * c.value;
    total_error_ = J_ * c.error;
  }
  box_ = bounding_box(window_);
  std::ptrdiff_t acc = 1;
  for (int i = d - 1; i >= 0; --i) {
    reach_[i] = box_.extent[i] - 1 + 2 * margin;
    tstride_[i] = acc;
    acc *= 2 * reach_[i] + 1;
  }
  table_.assign(static_cast<std::size_t>(acc), 0.0);
  center_ = 0;
  for (int i = 0; i < d; ++i) center_ += reach_[i] * tstride_[i];
  for (std::size_t t = 0; t < table_.size(); ++t) {
    Site dx(d);
    std::size_t rem = t;
    for (int i = d - 1; i >= 0; --i) {
      const int ext = 2 * reach_[i] + 1;
      dx.x[i] = static_cast<int>(rem % ext) - reach_[i];
      rem /= ext;
    }
    table_[t] = direct(dx);
  }
  code_.resize(window_.size());
  for (std::size_t k = 0; k < window_.size(); ++k) {
    std::ptrdiff_t c = 0;
    for (int i = 0; i < d; ++i) c += (window_[k].x[i] - box_.lo.x[i]) * tstride_[i];
    code_[k] = c;
  }
  exterior_.resize(window_.size());
  for (std::size_t k = 0; k < window_.size(); ++k) {
    if (is_nearest_neighbor()) {
      int inside = 0;
      for (int i = 0; i < d; ++i)
        for (int sgn : {-1, 1}) {
          Site y = window_[k];
          y.x[i] += sgn;
          inside += window_.contains(y);
        }
      exterior_[k] = J_ * (2 * d - inside);
      continue;
    }
    CompensatedSum in;
    for (std::size_t j = 0; j < window_.size(); ++j)
      if (j != k) in += coupling(k, j);
    exterior_[k] = total_ - in.value();
  }
}

double CouplingKernel::direct(const Site& dx) const {
  if (is_nearest_neighbor()) return l1_norm(dx) == 1 ? J_ : 0.0;
  if (norm_ == Norm::l2) {
    long long r2 = 0;
    for (int i = 0; i < dx.dim; ++i) r2 += static_cast<long long>(dx.x[i]) * dx.x[i];
    if (r2 == 0) return 0.0;
    return J_ * std::pow(static_cast<double>(r2), -alpha_ / 2.0);
  }
  const double r = lrq::norm(dx, norm_);
  return r == 0.0 ? 0.0 : J_ * std::pow(r, -alpha_);
}

double CouplingKernel::coupling_displacement(const Site& dx) const {
  std::ptrdiff_t idx = center_;
  for (int i = 0; i < dx.dim; ++i) {
    if (dx.x[i] > reach_[i] || dx.x[i] < -reach_[i]) return direct(dx);
    idx += dx.x[i] * tstride_[i];
  }
  return table_[static_cast<std::size_t>(idx)];
}

double CouplingKernel::coupling(const Site& x, const Site& y) const {
  return coupling_displacement(x - y);
}

FieldKind parse_field_kind(const std::string& s) {
  if (s == "zero") return FieldKind::zero;
  if (s == "decaying") return FieldKind::decaying;
  if (s == "truncated") return FieldKind::truncated;
  if (s == "gaussian") return FieldKind::gaussian;
  throw std::invalid_argument("unknown field kind: " + s);
}

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::zero: return "zero";
    case FieldKind::decaying: return "decaying";
    case FieldKind::truncated: return "truncated";
    case FieldKind::gaussian: return "gaussian";
    case FieldKind::table: return "table";
  }
  return "?";
}

FieldAssignment::FieldAssignment(FieldKind kind, FieldParams params, Region window, int q)
    : kind_(kind), params_(params), window_(std::move(window)), q_(q) {
  if (q < 2) throw std::invalid_argument("field: q must be >= 2");
  switch (kind_) {
    case FieldKind::decaying:
      if (!(params_.delta > 0)) throw std::invalid_argument("field: decaying needs delta > 0");
      break;
    case FieldKind::truncated:
      if (!(params_.delta > 0)) throw std::invalid_argument("field: truncated needs delta > 0");
      if (!(params_.R >= 1)) throw std::invalid_argument("field: truncated needs R >= 1");
      break;
    case FieldKind::gaussian:
      if (!(params_.epsilon >= 0)) throw std::invalid_argument("field: gaussian needs epsilon >= 0");
      break;
    default: break;
  }
  values_.assign(window_.size() * q_, 0.0);
  if (kind_ == FieldKind::gaussian) {
    std::mt19937_64 gen(params_.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : values_) v = params_.epsilon * normal(gen);
  } else if (kind_ == FieldKind::decaying || kind_ == FieldKind::truncated) {
    for (std::size_t i = 0; i < window_.size(); ++i) {
      const double h = formula(window_[i]);
      for (int n = 0; n < q_; ++n) values_[i * q_ + n] = h;
    }
  }
}

double FieldAssignment::formula(const Site& x) const {
  if (kind_ != FieldKind::decaying && kind_ != FieldKind::truncated) return 0.0;
  const double r = norm(x, params_.norm);
  if (kind_ == FieldKind::truncated && r < params_.R) return 0.0;
  if (r == 0.0) return params_.h_star;  // the decay law leaves the origin free
  return params_.h_star * std::pow(r, -params_.delta);
}

bool FieldAssignment::is_zero() const {
  const bool formula_zero =
      (kind_ != FieldKind::decaying && kind_ != FieldKind::truncated) || params_.h_star == 0.0;
  return formula_zero && std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double FieldAssignment::value(const Site& x, Color n) const {
  const std::size_t i = window_.index_of(x);
  if (i != Region::npos) return values_[i * q_ + mod_q(n, q_)];
  return formula(x);
}

void FieldAssignment::set(std::size_t i, Color n, double v) {
  values_[i * q_ + mod_q(n, q_)] = v;
  kind_ = FieldKind::table;
}

void FieldAssignment::shift_site(std::size_t i, double c) {
  for (int n = 0; n < q_; ++n) values_[i * q_ + n] += c;
  kind_ = FieldKind::table;
}

std::string FieldAssignment::descriptor() const {
  switch (kind_) {
    case FieldKind::zero: return "zero";
    case FieldKind::decaying:
      return "decaying:h=" + num(params_.h_star) + ";delta=" + num(params_.delta);
    case FieldKind::truncated:
      return "truncated:h=" + num(params_.h_star) + ";delta=" + num(params_.delta) +
             ";R=" + num(params_.R);
    case FieldKind::gaussian:
      return "gaussian:eps=" + num(params_.epsilon) + ";seed=" + std::to_string(params_.seed);
    case FieldKind::table: return "table";
  }
  return "?";
}

FieldAssignment make_field(FieldKind kind, const FieldParams& params, const Region& window, int q) {
  if (kind == FieldKind::table) throw std::invalid_argument("make_field: table kind is built by set()");
  return FieldAssignment(kind, params, window, q);
}

FieldAssignment scalar_field(const std::vector<double>& h, const InteractionSpec& spec,
                             const Region& window) {
  if (h.size() != window.size()) throw std::invalid_argument("scalar_field: size mismatch");
  FieldAssignment f(FieldKind::zero, {}, window, spec.q());
  for (std::size_t i = 0; i < h.size(); ++i)
    for (int n = 0; n < spec.q(); ++n) f.set(i, n, h[i] * spec.phi(n));
  return f;
}

}  // namespace lrq
