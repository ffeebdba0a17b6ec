#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace lrq {

inline constexpr int kMaxDim = 4;

enum class Norm { l1, l2, linf };

Norm parse_norm(const std::string& s);
std::string to_string(Norm n);

// A point of Z^d. Unused trailing coordinates are kept at zero so that
// comparisons and hashing can look at the whole array.
struct Site {
  std::array<int, kMaxDim> x{};
  int dim = 0;

  Site() = default;
  explicit Site(int d) : dim(d) {}
  Site(std::initializer_list<int> c);

  int operator[](int i) const { return x[i]; }
  int& operator[](int i) { return x[i]; }

  friend bool operator==(const Site& a, const Site& b) { return a.dim == b.dim && a.x == b.x; }
  friend bool operator<(const Site& a, const Site& b) {
    return a.dim != b.dim ? a.dim < b.dim : a.x < b.x;
  }
  friend Site operator+(Site a, const Site& b) {
    for (int i = 0; i < a.dim; ++i) a.x[i] += b.x[i];
    return a;
  }
  friend Site operator-(Site a, const Site& b) {
    for (int i = 0; i < a.dim; ++i) a.x[i] -= b.x[i];
    return a;
  }
};

struct SiteHash {
  std::size_t operator()(const Site& s) const noexcept;
};

std::string to_string(const Site& s);

int l1_norm(const Site& s);
double norm(const Site& s, Norm n);
double distance(const Site& a, const Site& b, Norm n);

// Finite set of sites of one dimension, kept sorted and deduplicated.
class Region {
 public:
  Region() = default;
  explicit Region(int dim) : dim_(dim) {}
  Region(int dim, std::vector<Site> sites);

  int dim() const { return dim_; }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  bool contains(const Site& s) const;
  // Position of s in sorted order, or npos.
  std::size_t index_of(const Site& s) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  const std::vector<Site>& sites() const { return sites_; }
  const Site& operator[](std::size_t i) const { return sites_[i]; }
  auto begin() const { return sites_.begin(); }
  auto end() const { return sites_.end(); }
  const Site& min_site() const { return sites_.front(); }

  Region translated(const Site& by) const;

  friend bool operator==(const Region& a, const Region& b) {
    return a.dim_ == b.dim_ && a.sites_ == b.sites_;
  }
  friend bool operator<(const Region& a, const Region& b) { return a.sites_ < b.sites_; }

 private:
  int dim_ = 0;
  std::vector<Site> sites_;
};

Region set_union(const Region& a, const Region& b);
Region set_intersection(const Region& a, const Region& b);
Region set_difference(const Region& a, const Region& b);
Region symmetric_difference(const Region& a, const Region& b);
bool is_subset(const Region& a, const Region& b);
bool intersects(const Region& a, const Region& b);

// Axis-aligned box [lo, lo+extent) with row-major linear indexing (last axis fastest).
struct Box {
  Site lo;
  std::array<int, kMaxDim> extent{};

  int dim() const { return lo.dim; }
  std::size_t volume() const;
  bool contains(const Site& s) const;
  std::size_t index(const Site& s) const;
  Site site(std::size_t idx) const;
  std::array<std::ptrdiff_t, kMaxDim> strides() const;
  Box inflated(int by) const;
};

Box bounding_box(const Region& a);
Box make_box(const std::vector<int>& side_lengths, const Site& lo);
// All sites of a box, in row-major order (which is also sorted order).
Region box_region(const Box& b);
// Centered L^d window: coordinates -L/2 .. L-1-L/2 on each axis, so it contains the origin.
Box centered_box(int d, int L);
Box centered_box(const std::vector<int>& sides);

Region l1_ball(const Site& center, int radius);

std::vector<Region> connected_components(const Region& a);

Region volume(const Region& a);
Region interior(const Region& a);

struct Boundaries {
  std::vector<std::pair<Site, Site>> edges;  // (inside, outside)
  Region inner;
  Region outer;
};
Boundaries boundaries(const Region& a);

double set_distance(const Region& a, const Region& b, Norm n = Norm::l2);

}  // namespace lrq
