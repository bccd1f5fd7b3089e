#pragma once

#include <string>
#include <vector>

#include "fraclab/fracops.hpp"
#include "fraclab/interval.hpp"

namespace fraclab {

/// Sorted union of pairwise disjoint open intervals; endpoints may be infinite.
class ExteriorSet {
 public:
  ExteriorSet() = default;
  explicit ExteriorSet(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  double measure() const;
  bool contains(double x) const;
  /// True when every interval of `other` lies inside some interval of this set.
  bool contains(const ExteriorSet& other) const;
  double overlap(const ExteriorSet& other) const;

  /// (-inf, a) u (b, inf) minus this set.
  ExteriorSet complement(const Domain1D& omega) const;
  ExteriorSet united(const ExteriorSet& other) const;

 private:
  std::vector<Interval> intervals_;
};

struct ExteriorPartition {
  Domain1D omega;
  ExteriorSet dirichlet;
  ExteriorSet neumann;

  /// Throws BadParameters unless D and N are disjoint subsets of the complement covering it up to points.
  void validate() const;

  static ExteriorPartition with_dirichlet(const Domain1D& omega, const ExteriorSet& D);
  static ExteriorPartition with_neumann(const Domain1D& omega, const ExteriorSet& N);
  static ExteriorPartition all_dirichlet(const Domain1D& omega) { return with_neumann(omega, {}); }
  static ExteriorPartition all_neumann(const Domain1D& omega) { return with_dirichlet(omega, {}); }
};

enum class FamilyKind {
  ShrinkingNeumann,
  NestedNeumann,
  TravelingBall,
  TravelingRing,
  TravelingStrip,
  InfiniteSector,
  ShrinkingDirichletTouching,
  ShrinkingDirichletInterior,
  TravelingDirichlet,
};

FamilyKind family_kind_from_string(const std::string& name);
std::string to_string(FamilyKind kind);

/// Parametric family k -> partition. Sizes follow length_k = length * ratio^k
/// (shrinking and nested kinds); traveling kinds move by offset_k = base * ratio^k
/// measured from the nearest endpoint of Omega ("boundary") or from 0 ("origin").
struct PartitionFamily {
  FamilyKind kind = FamilyKind::TravelingBall;
  Domain1D omega;
  double position = 0.0;  // center or left end of the designated set for fixed-location kinds
  double length = 1.0;    // may be infinite for strips, rings and sectors
  double base = 1.0;
  double ratio = 2.0;
  std::string anchor = "boundary";  // "boundary" | "origin"
  std::string side = "right";       // "right" | "left"

  /// The set that varies with k is Neumann for the neumann, ball, ring, strip and sector kinds.
  bool designates_neumann() const;
  /// Parameter value reported per record: the offset for traveling kinds, the size otherwise.
  double parameter(int k) const;
};

ExteriorPartition generate(const PartitionFamily& family, int k);

/// Lebesgue measure of set intersected with (-R, R).
double measure_in_ball(const ExteriorSet& set, double R);

struct DiffusionReport {
  std::vector<double> radii;
  std::vector<int> ks;
  std::vector<std::vector<double>> measures;  // measures[i][j] = |N_{k_i} intersected with B_{R_j}|
  std::vector<double> thresholds;
  bool diffusing = false;
};

DiffusionReport diffusion_report(const PartitionFamily& family, const std::vector<double>& radii,
                                 const std::vector<int>& ks, double threshold_fraction = 1e-3);

/// Infimum of the distance between the set and Omega; throws EmptySet.
double separation(const ExteriorSet& set, const Domain1D& omega);

struct ConditionC {
  bool finite = true;
  double value = 0.0;
};

/// int_D int_Omega |x - y|^{-(1+2s)} dy dx.
ConditionC condition_C(const ExteriorSet& dirichlet, const Domain1D& omega, const FractionalOrder& order);

}  // namespace fraclab
