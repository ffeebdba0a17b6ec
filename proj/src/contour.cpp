#include "lrq/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "lrq/sum.hpp"

namespace lrq {

double MaParams::default_a(int d, double alpha) {
  return 3.0 * (d + 1) / std::min(alpha - d, 1.0);
}

Color Contour::spin_at(const Site& x) const {
  const std::size_t i = support.index_of(x);
  if (i == Region::npos) throw std::out_of_range("contour: site not in support");
  return spins[i];
}

Region incorrect_points(const SpinConfig& s) {
  if (s.window().empty()) return Region(s.dim());
  const Box P = bounding_box(s.window()).inflated(2);
  const auto st = P.strides();
  std::vector<Color> grid(P.volume(), s.exterior());
  for (std::size_t i = 0; i < s.size(); ++i) grid[P.index(s.window()[i])] = s[i];
  std::vector<Site> out;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Site x = P.site(idx);
    bool bad = false;
    for (int i = 0; i < P.dim() && !bad; ++i) {
      const int c = x.x[i] - P.lo.x[i];
      if (c > 0 && grid[idx - st[i]] != grid[idx]) bad = true;
      if (c + 1 < P.extent[i] && grid[idx + st[i]] != grid[idx]) bad = true;
    }
    if (bad) out.push_back(x);
  }
  return Region(s.dim(), std::move(out));
}

std::vector<Region> ma_partition(const Region& A, const MaParams& p, const PartitionOptions& opt) {
  if (!(p.M > 0)) throw std::invalid_argument("ma_partition: M must be positive");
  std::vector<Region> cls = connected_components(A);
  if (cls.size() <= 1) return cls;
  if (opt.shuffle_seed) {
    std::mt19937_64 g(*opt.shuffle_seed);
    std::shuffle(cls.begin(), cls.end(), g);
  }
  const double expo = p.a / (A.dim() + 1);
  std::vector<double> vol(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i) vol[i] = static_cast<double>(volume(cls[i]).size());
  std::vector<std::vector<double>> dist(cls.size(), std::vector<double>(cls.size(), 0.0));
  for (std::size_t i = 0; i < cls.size(); ++i)
    for (std::size_t j = i + 1; j < cls.size(); ++j)
      dist[i][j] = dist[j][i] = set_distance(cls[i], cls[j], opt.norm);
  std::vector<bool> alive(cls.size(), true);
  // Merging only shrinks distances and grows volumes, so a violated pair stays violated
  // and the fixpoint does not depend on which violation is resolved first.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < cls.size() && !merged; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        if (!alive[j]) continue;
        if (dist[i][j] > p.M * std::pow(std::min(vol[i], vol[j]), expo)) continue;
        cls[i] = set_union(cls[i], cls[j]);
        vol[i] = static_cast<double>(volume(cls[i]).size());
        alive[j] = false;
        for (std::size_t k = 0; k < cls.size(); ++k)
          if (alive[k] && k != i) dist[i][k] = dist[k][i] = std::min(dist[i][k], dist[j][k]);
        merged = true;
        break;
      }
    }
  }
  std::vector<Region> out;
  for (std::size_t i = 0; i < cls.size(); ++i)
    if (alive[i]) out.push_back(std::move(cls[i]));
  std::sort(out.begin(), out.end(), [](const Region& a, const Region& b) { return a.min_site() < b.min_site(); });
  return out;
}

std::size_t count_a1_violations(const std::vector<Region>& classes) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const Region V = volume(classes[i]);
    const auto holes = connected_components(set_difference(V, classes[i]));
    for (std::size_t j = 0; j < classes.size(); ++j) {
      if (i == j) continue;
      std::size_t touched = set_difference(classes[j], V).empty() ? 0 : 1;
      for (const auto& h : holes) touched += intersects(h, classes[j]) ? 1 : 0;
      if (touched != 1) ++bad;
    }
  }
  return bad;
}

namespace {

Color read_label(const SpinConfig& s, const Region& where, const char* what,
                 std::vector<std::string>* diagnostics) {
  std::set<Color> seen;
  for (const auto& x : where) seen.insert(s.at(x));
  if (seen.empty()) {
    if (diagnostics) diagnostics->push_back(std::string("empty label set for ") + what + "; exterior color used");
    return s.exterior();
  }
  if (seen.size() > 1)
    throw ContourError(std::string("label inconsistency on ") + what + " (spin not constant)");
  return *seen.begin();
}

}  // namespace

Contour make_contour(const SpinConfig& s, const Region& support, std::vector<std::string>* diagnostics) {
  Contour g;
  g.support = support;
  g.spins.reserve(support.size());
  for (const auto& x : support) g.spins.push_back(s.at(x));
  g.volume = volume(support);
  g.interior_all = set_difference(g.volume, support);
  g.outer_label = read_label(s, boundaries(g.volume).inner, "outer boundary", diagnostics);
  std::vector<std::vector<Site>> by_label(s.q());
  for (auto& comp : connected_components(g.interior_all)) {
    InteriorComponent ic;
    ic.label = read_label(s, boundaries(volume(comp)).outer, "interior component", diagnostics);
    for (const auto& x : comp) by_label[ic.label].push_back(x);
    ic.sites = std::move(comp);
    g.components.push_back(std::move(ic));
  }
  std::vector<Site> prime;
  for (int n = 0; n < s.q(); ++n) {
    if (n != 0) prime.insert(prime.end(), by_label[n].begin(), by_label[n].end());
    g.interior_by_label.emplace_back(s.dim(), std::move(by_label[n]));
  }
  g.interior_prime = Region(s.dim(), std::move(prime));
  return g;
}

ContourFamily extract_contours(const SpinConfig& s, const MaParams& p, const PartitionOptions& opt) {
  ContourFamily f;
  f.q = s.q();
  f.fingerprint = s.fingerprint();
  for (const auto& cls : ma_partition(incorrect_points(s), p, opt))
    f.contours.push_back(make_contour(s, cls, &f.diagnostics));
  return f;
}

std::vector<std::size_t> external_indices(const ContourFamily& f) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.contours.size(); ++i) {
    bool ext = true;
    for (std::size_t j = 0; j < f.contours.size() && ext; ++j)
      if (i != j && intersects(f.contours[i].support, f.contours[j].volume)) ext = false;
    if (ext) out.push_back(i);
  }
  return out;
}

std::vector<Contour> external_contours(const ContourFamily& f) {
  std::vector<Contour> out;
  for (std::size_t i : external_indices(f)) out.push_back(f.contours[i]);
  return out;
}

SpinConfig erase(const SpinConfig& s, const ContourFamily& f, std::size_t index) {
  if (s.exterior() != 0) throw ContourError("erase: exterior color must be the reference color");
  if (f.fingerprint != s.fingerprint()) throw ContourError("erase: family was not extracted from this configuration");
  if (index >= f.contours.size()) throw ContourError("erase: no such contour");
  const auto ext = external_indices(f);
  if (std::find(ext.begin(), ext.end(), index) == ext.end()) throw ContourError("erase: contour is not external");
  const Contour& g = f.contours[index];
  SpinConfig t = s;
  for (const auto& x : g.support) {
    const std::size_t i = s.window().index_of(x);
    if (i != Region::npos) t.set(i, 0);
  }
  for (int n = 1; n < s.q(); ++n)
    for (const auto& x : g.interior_by_label[n]) {
      const std::size_t i = s.window().index_of(x);
      if (i == Region::npos) throw ContourError("erase: labelled interior leaves the window");
      t.set(i, s[i] - n);
    }
  return t;
}

SpinConfig erase(const SpinConfig& s, const Contour& gamma, const MaParams& p, const PartitionOptions& opt) {
  const auto f = extract_contours(s, p, opt);
  for (std::size_t i = 0; i < f.contours.size(); ++i)
    if (f.contours[i].support == gamma.support && f.contours[i].spins == gamma.spins) return erase(s, f, i);
  throw ContourError("erase: contour does not belong to this configuration");
}

SeriesValue surface_coupling(const Region& A, const CouplingKernel& k) {
  if (A.empty()) return {0.0, 0.0};
  CompensatedSum inner;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = i + 1; j < A.size(); ++j) inner += k.coupling(A[i], A[j]);
  const double n = static_cast<double>(A.size());
  return {n * k.total() - 2.0 * inner.value(), n * k.total_error()};
}

}  // namespace lrq
