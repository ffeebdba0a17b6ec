#include "lrq/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <stdexcept>

namespace lrq {

Norm parse_norm(const std::string& s) {
  if (s == "l1" || s == "L1") return Norm::l1;
  if (s == "l2" || s == "L2") return Norm::l2;
  if (s == "linf" || s == "Linf" || s == "inf") return Norm::linf;
  throw std::invalid_argument("unknown norm: " + s);
}

std::string to_string(Norm n) {
  switch (n) {
    case Norm::l1: return "l1";
    case Norm::l2: return "l2";
    case Norm::linf: return "linf";
  }
  return "?";
}

Site::Site(std::initializer_list<int> c) : dim(static_cast<int>(c.size())) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("site dimension out of range");
  std::copy(c.begin(), c.end(), x.begin());
}

std::size_t SiteHash::operator()(const Site& s) const noexcept {
  std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(s.dim);
  for (int i = 0; i < s.dim; ++i) {
    h ^= static_cast<std::uint32_t>(s.x[i]);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::string to_string(const Site& s) {
  std::string out = "(";
  for (int i = 0; i < s.dim; ++i) {
    if (i) out += ",";
    out += std::to_string(s.x[i]);
  }
  return out + ")";
}

int l1_norm(const Site& s) {
  int r = 0;
  for (int i = 0; i < s.dim; ++i) r += std::abs(s.x[i]);
  return r;
}

double norm(const Site& s, Norm n) {
  switch (n) {
    case Norm::l1: return l1_norm(s);
    case Norm::linf: {
      int r = 0;
      for (int i = 0; i < s.dim; ++i) r = std::max(r, std::abs(s.x[i]));
      return r;
    }
    case Norm::l2: {
      long long r = 0;
      for (int i = 0; i < s.dim; ++i) r += static_cast<long long>(s.x[i]) * s.x[i];
      return std::sqrt(static_cast<double>(r));
    }
  }
  return 0.0;
}

double distance(const Site& a, const Site& b, Norm n) { return norm(a - b, n); }

Region::Region(int dim, std::vector<Site> sites) : dim_(dim), sites_(std::move(sites)) {
  for (const auto& s : sites_)
    if (s.dim != dim_) throw std::invalid_argument("region: site dimension mismatch");
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

bool Region::contains(const Site& s) const {
  return std::binary_search(sites_.begin(), sites_.end(), s);
}

std::size_t Region::index_of(const Site& s) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
  if (it == sites_.end() || !(*it == s)) return npos;
  return static_cast<std::size_t>(it - sites_.begin());
}

Region Region::translated(const Site& by) const {
  Region r(dim_);
  r.sites_.reserve(sites_.size());
  for (const auto& s : sites_) r.sites_.push_back(s + by);
  return r;  // translation preserves lexicographic order
}

namespace {

int common_dim(const Region& a, const Region& b) {
  if (a.empty()) return b.dim() ? b.dim() : a.dim();
  if (b.empty()) return a.dim();
  if (a.dim() != b.dim()) throw std::invalid_argument("region dimension mismatch");
  return a.dim();
}

}  // namespace

Region set_union(const Region& a, const Region& b) {
  std::vector<Site> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Region(common_dim(a, b), std::move(out));
}

Region set_intersection(const Region& a, const Region& b) {
  std::vector<Site> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Region(common_dim(a, b), std::move(out));
}

Region set_difference(const Region& a, const Region& b) {
  std::vector<Site> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Region(common_dim(a, b), std::move(out));
}

Region symmetric_difference(const Region& a, const Region& b) {
  std::vector<Site> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Region(common_dim(a, b), std::move(out));
}

bool is_subset(const Region& a, const Region& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const Region& a, const Region& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else return true;
  }
  return false;
}

std::size_t Box::volume() const {
  std::size_t v = 1;
  for (int i = 0; i < dim(); ++i) v *= static_cast<std::size_t>(extent[i]);
  return v;
}

bool Box::contains(const Site& s) const {
  for (int i = 0; i < dim(); ++i)
    if (s.x[i] < lo.x[i] || s.x[i] >= lo.x[i] + extent[i]) return false;
  return true;
}

std::size_t Box::index(const Site& s) const {
  std::size_t idx = 0;
  for (int i = 0; i < dim(); ++i) idx = idx * extent[i] + static_cast<std::size_t>(s.x[i] - lo.x[i]);
  return idx;
}

Site Box::site(std::size_t idx) const {
  Site s(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    s.x[i] = lo.x[i] + static_cast<int>(idx % extent[i]);
    idx /= extent[i];
  }
  return s;
}

std::array<std::ptrdiff_t, kMaxDim> Box::strides() const {
  std::array<std::ptrdiff_t, kMaxDim> st{};
  std::ptrdiff_t acc = 1;
  for (int i = dim() - 1; i >= 0; --i) {
    st[i] = acc;
    acc *= extent[i];
  }
  return st;
}

Box Box::inflated(int by) const {
  Box b = *this;
  for (int i = 0; i < dim(); ++i) {
    b.lo.x[i] -= by;
    b.extent[i] += 2 * by;
  }
  return b;
}

Box bounding_box(const Region& a) {
  if (a.empty()) throw std::invalid_argument("bounding box of empty region");
  Box b;
  b.lo = a.min_site();
  Site hi = a.min_site();
  for (const auto& s : a)
    for (int i = 0; i < a.dim(); ++i) {
      b.lo.x[i] = std::min(b.lo.x[i], s.x[i]);
      hi.x[i] = std::max(hi.x[i], s.x[i]);
    }
  for (int i = 0; i < a.dim(); ++i) b.extent[i] = hi.x[i] - b.lo.x[i] + 1;
  return b;
}

Box make_box(const std::vector<int>& side_lengths, const Site& lo) {
  if (side_lengths.empty() || static_cast<int>(side_lengths.size()) != lo.dim)
    throw std::invalid_argument("box: side count must equal dimension");
  Box b;
  b.lo = lo;
  for (std::size_t i = 0; i < side_lengths.size(); ++i) {
    if (side_lengths[i] < 1) throw std::invalid_argument("box: side length must be >= 1");
    b.extent[i] = side_lengths[i];
  }
  return b;
}

Region box_region(const Box& b) {
  std::vector<Site> s;
  s.reserve(b.volume());
  for (std::size_t i = 0; i < b.volume(); ++i) s.push_back(b.site(i));
  return Region(b.dim(), std::move(s));
}

Box centered_box(const std::vector<int>& sides) {
  Site lo(static_cast<int>(sides.size()));
  if (lo.dim < 1 || lo.dim > kMaxDim) throw std::invalid_argument("box dimension out of range");
  for (int i = 0; i < lo.dim; ++i) lo.x[i] = -(sides[i] / 2);
  return make_box(sides, lo);
}

Box centered_box(int d, int L) { return centered_box(std::vector<int>(d, L)); }

Region l1_ball(const Site& center, int radius) {
  if (radius < 0) throw std::invalid_argument("l1_ball: negative radius");
  Box b;
  b.lo = center;
  for (int i = 0; i < center.dim; ++i) {
    b.lo.x[i] -= radius;
    b.extent[i] = 2 * radius + 1;
  }
  std::vector<Site> out;
  for (std::size_t i = 0; i < b.volume(); ++i) {
    Site s = b.site(i);
    if (l1_norm(s - center) <= radius) out.push_back(s);
  }
  return Region(center.dim, std::move(out));
}

namespace {

// Mask over a box; cells are 1 when the site belongs to the set.
std::vector<char> rasterize(const Region& a, const Box& b) {
  std::vector<char> m(b.volume(), 0);
  for (const auto& s : a) m[b.index(s)] = 1;
  return m;
}

template <class Visit>
void for_each_neighbor(const Box& b, std::size_t idx, const std::array<std::ptrdiff_t, kMaxDim>& st,
                       Visit&& visit) {
  std::size_t rem = idx;
  std::array<int, kMaxDim> c{};
  for (int i = b.dim() - 1; i >= 0; --i) {
    c[i] = static_cast<int>(rem % b.extent[i]);
    rem /= b.extent[i];
  }
  for (int i = 0; i < b.dim(); ++i) {
    if (c[i] > 0) visit(idx - st[i]);
    if (c[i] + 1 < b.extent[i]) visit(idx + st[i]);
  }
}

}  // namespace

std::vector<Region> connected_components(const Region& a) {
  std::vector<Region> out;
  if (a.empty()) return out;
  const Box b = bounding_box(a);
  const auto st = b.strides();
  std::vector<char> m = rasterize(a, b);
  std::vector<std::size_t> stack;
  // Seeds are taken in sorted site order, so components come out ordered by min site.
  for (const auto& s0 : a) {
    std::size_t i0 = b.index(s0);
    if (m[i0] != 1) continue;
    std::vector<Site> comp;
    m[i0] = 2;
    stack.push_back(i0);
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      comp.push_back(b.site(i));
      for_each_neighbor(b, i, st, [&](std::size_t j) {
        if (m[j] == 1) {
          m[j] = 2;
          stack.push_back(j);
        }
      });
    }
    out.emplace_back(a.dim(), std::move(comp));
  }
  return out;
}

Region volume(const Region& a) {
  if (a.empty()) return a;
  const Box b = bounding_box(a).inflated(1);
  const auto st = b.strides();
  std::vector<char> m = rasterize(a, b);
  // Every face site of the inflated box is outside a and in an unbounded component
  // (d = 1 has two of them).
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Site s = b.site(i);
    for (int k = 0; k < a.dim(); ++k)
      if (s.x[k] == b.lo.x[k] || s.x[k] == b.lo.x[k] + b.extent[k] - 1) {
        m[i] = 2;
        stack.push_back(i);
        break;
      }
  }
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for_each_neighbor(b, i, st, [&](std::size_t j) {
      if (m[j] == 0) {
        m[j] = 2;
        stack.push_back(j);
      }
    });
  }
  std::vector<Site> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] != 2) out.push_back(b.site(i));
  return Region(a.dim(), std::move(out));
}

Region interior(const Region& a) { return set_difference(volume(a), a); }

Boundaries boundaries(const Region& a) {
  Boundaries r;
  r.inner = Region(a.dim());
  r.outer = Region(a.dim());
  std::vector<Site> in, out;
  for (const auto& x : a) {
    bool on_edge = false;
    for (int i = 0; i < a.dim(); ++i)
      for (int sgn : {-1, 1}) {
        Site y = x;
        y.x[i] += sgn;
        if (!a.contains(y)) {
          r.edges.emplace_back(x, y);
          out.push_back(y);
          on_edge = true;
        }
      }
    if (on_edge) in.push_back(x);
  }
  r.inner = Region(a.dim(), std::move(in));
  r.outer = Region(a.dim(), std::move(out));
  return r;
}

double set_distance(const Region& a, const Region& b, Norm n) {
  if (a.empty() || b.empty()) throw std::invalid_argument("set_distance: empty region");
  if (n == Norm::l2) {
    long long best = std::numeric_limits<long long>::max();
    for (const auto& x : a)
      for (const auto& y : b) {
        long long s = 0;
        for (int i = 0; i < a.dim(); ++i) {
          long long t = x.x[i] - y.x[i];
          s += t * t;
        }
        if (s < best) {
          best = s;
          if (best == 0) return 0.0;
        }
      }
    return std::sqrt(static_cast<double>(best));
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : a)
    for (const auto& y : b) {
      best = std::min(best, distance(x, y, n));
      if (best == 0.0) return 0.0;
    }
  return best;
}

}  // namespace lrq
