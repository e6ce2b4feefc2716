#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "rigidity/ensemble.hpp"

namespace rigidity {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Argument in (0, 2*pi]; the positive real axis maps to 2*pi and 0 maps to 0.
double spiral_argument(Complex z);

/// Key of the spiral order: modulus first, then argument; 0 is initial.
struct SpiralOrderKey {
  double modulus = 0.0;
  double argument = 0.0;

  auto operator<=>(const SpiralOrderKey&) const = default;
};

/// A point of a spectrum carrying its polar coordinates. Points built from
/// polar data keep that data verbatim, so lattice points sit exactly on their
/// circles.
struct SpectralPoint {
  Complex value;
  double modulus = 0.0;
  double argument = 0.0;

  static SpectralPoint from_value(Complex z);
  static SpectralPoint from_polar(double modulus, double argument);

  SpiralOrderKey key() const { return {modulus, argument}; }
};

/// One trial's eigenvalues.
struct SpectrumSample {
  std::vector<SpectralPoint> points;
  bool rescaled = false;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  static SpectrumSample from_values(const std::vector<Complex>& values, bool rescaled, std::uint64_t seed = 0,
                                    std::uint64_t trial = 0);

  std::size_t size() const { return points.size(); }
  std::vector<Complex> values() const;
};

/// Increasing spiral order; ties keep input order.
SpectrumSample spiral_sort(SpectrumSample sample);

/// r_i = i / sqrt(n - m + i^2).
double radius(int i, const EnsembleParams& params);

/// r_i^2 and 1 - r_i^2, each formed from integers without cancellation.
struct SquaredRadius {
  double value;
  double complement;
};
SquaredRadius squared_radius(int i, const EnsembleParams& params);

/// sqrt(2 log(m + 1) / m)
double epsilon_m(int m);

/// Largest admissible counting index sqrt(m) (1 - eps_m / (1 - alpha (1 - eps_m)))^{1/2}.
/// Requires m >= 3; throws std::domain_error when the value is <= 1 (no
/// interior index exists).
double valid_index_bound(const EnsembleParams& params);

/// Shell k with r_k <= |z| < r_{k+1} (raw coordinates; same comparisons as
/// region membership). Unbounded above, since r_k -> 1.
int shell_of(double modulus, const EnsembleParams& params);

/// Order by shell first, then argument, then modulus. Under this order
/// A_{i,theta} is exactly the set of points below r_i e^{i theta} (up to the
/// positive real axis), so rank and counting agree: the p-th point lies in
/// A_{i,theta} iff p <= N(A_{i,theta}). The plain modulus order does not have
/// this property.
struct AnnularOrderKey {
  int shell = 0;
  double argument = 0.0;
  double modulus = 0.0;

  auto operator<=>(const AnnularOrderKey&) const = default;
};

AnnularOrderKey annular_key(const SpectralPoint& z, const EnsembleParams& params, double scale = 1.0);

enum class SpiralConvention { modulus, annular };

/// spiral_sort for SpiralConvention::modulus; shell-then-argument order for
/// annular. Rescaled samples are divided by params' rescale factor before
/// shells are assigned. Stable.
SpectrumSample spiral_sort(SpectrumSample sample, const EnsembleParams& params, SpiralConvention convention);

/// Disc, disc-plus-arc-sector, annulus, or a disc of arbitrary radius.
class CountingRegion {
 public:
  enum class Kind { disc, sector, annulus, custom_disc };

  static CountingRegion disc(int i);
  static CountingRegion sector(int i, double theta);
  static CountingRegion annulus(int l);
  static CountingRegion custom_disc(double r);

  /// Parses "disc:3", "sector:3:1.5707963267948966", "annulus:4", "radius:0.5",
  /// and the bare forms "3" / "3,1.57" for sectors (theta defaults to 2*pi).
  static CountingRegion parse(const std::string& text);

  Kind kind() const { return kind_; }
  int index() const { return index_; }
  double theta() const { return theta_; }
  double custom_radius() const { return radius_; }

  /// Round-trips through parse().
  std::string label() const;

  bool contains(const SpectralPoint& z, const EnsembleParams& params) const;

  /// Largest radius reached by the region (unrescaled coordinates).
  double outer_radius(const EnsembleParams& params) const;

  bool operator==(const CountingRegion&) const = default;

 private:
  CountingRegion(Kind kind, int index, double theta, double radius)
      : kind_(kind), index_(index), theta_(theta), radius_(radius) {}

  Kind kind_;
  int index_;
  double theta_;
  double radius_;
};

/// A polar rectangle {r_lo <= |z| < r_hi, 0 < arg z < angle}, with squared
/// radii and their complements stored exactly.
struct RegionPiece {
  SquaredRadius inner;
  SquaredRadius outer;
  double angle;
};

/// Decomposition of a region into polar rectangles (full-turn pieces have angle 2*pi).
std::vector<RegionPiece> region_pieces(const CountingRegion& region, const EnsembleParams& params);

/// Predicted eigenvalue locations, spiral-sorted by construction.
struct PredictedLattice {
  std::vector<SpectralPoint> points;

  SpectrumSample as_sample(bool rescaled = false, double scale = 1.0) const;
};

/// lambda~_p = r_{l-1} exp(2 pi i q / (2l - 1)), l = ceil(sqrt(p)), q = p - (l-1)^2; p is 1-based.
SpectralPoint predicted_location(int p, const EnsembleParams& params);
PredictedLattice predicted_lattice(const EnsembleParams& params);

/// ceil(sqrt(p)) in exact integer arithmetic.
int shell_index(int p);

/// Number of sample points inside the region. The sample must be in
/// unrescaled coordinates (std::invalid_argument otherwise).
int count_in_region(const SpectrumSample& sample, const CountingRegion& region, const EnsembleParams& params);

}  // namespace rigidity
