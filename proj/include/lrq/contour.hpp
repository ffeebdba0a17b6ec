#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrq/interactions.hpp"
#include "lrq/lattice.hpp"
#include "lrq/spin_model.hpp"

namespace lrq {

// Raised when labels cannot be read consistently or erasure preconditions fail.
class ContourError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MaParams {
  double M = 1.0;
  double a = 3.0;

  // a = 3(d+1) / min(alpha - d, 1)
  static double default_a(int d, double alpha);
  static MaParams standard(double M, int d, double alpha) { return {M, default_a(d, alpha)}; }
};

struct PartitionOptions {
  Norm norm = Norm::l2;
  // Process the initial components in a seeded random order instead of sorted order.
  std::optional<std::uint64_t> shuffle_seed;
};

struct InteriorComponent {
  Region sites;
  Color label = 0;
};

struct Contour {
  Region support;
  std::vector<Color> spins;  // aligned with support
  Color outer_label = 0;
  std::vector<InteriorComponent> components;
  std::vector<Region> interior_by_label;  // I_n, n = 0..q-1
  Region interior_prime;                  // union of I_n over n != 0
  Region interior_all;
  Region volume;

  std::size_t size() const { return support.size(); }
  Color spin_at(const Site& x) const;
};

struct ContourFamily {
  std::vector<Contour> contours;  // ordered by min support site
  std::uint64_t fingerprint = 0;
  int q = 0;
  std::vector<std::string> diagnostics;
};

// Sites whose unit l1 ball is not monochromatic in the extended configuration.
Region incorrect_points(const SpinConfig& s);

// Merge closure of the l1 components of A under condition (B).
std::vector<Region> ma_partition(const Region& A, const MaParams& p, const PartitionOptions& opt = {});

// Number of ordered class pairs (C, C') where C' meets more than one component of the complement of C.
std::size_t count_a1_violations(const std::vector<Region>& classes);

// Builds a contour from a support set read against s.
Contour make_contour(const SpinConfig& s, const Region& support, std::vector<std::string>* diagnostics = nullptr);

ContourFamily extract_contours(const SpinConfig& s, const MaParams& p, const PartitionOptions& opt = {});

std::vector<std::size_t> external_indices(const ContourFamily& f);
std::vector<Contour> external_contours(const ContourFamily& f);

// tau_gamma for the external contour f.contours[index]; requires exterior color 0.
SpinConfig erase(const SpinConfig& s, const ContourFamily& f, std::size_t index);
// Same, locating gamma in the family extracted from s with parameters p.
SpinConfig erase(const SpinConfig& s, const Contour& gamma, const MaParams& p, const PartitionOptions& opt = {});

// F_A = sum_{x in A, y not in A} J_xy = |A| J c_alpha - 2 sum_{pairs in A} J_xy.
SeriesValue surface_coupling(const Region& A, const CouplingKernel& k);

}  // namespace lrq
