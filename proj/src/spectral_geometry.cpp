#include "rigidity/spectral_geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace rigidity {

double spiral_argument(Complex z) {
  if (z == Complex(0.0, 0.0)) return 0.0;
  const double a = std::atan2(z.imag(), z.real());
  return a <= 0.0 ? a + kTwoPi : a;
}

SpectralPoint SpectralPoint::from_value(Complex z) { return {z, std::abs(z), spiral_argument(z)}; }

SpectralPoint SpectralPoint::from_polar(double modulus, double argument) {
  if (modulus == 0.0) return {Complex(0.0, 0.0), 0.0, 0.0};
  return {std::polar(modulus, argument), modulus, argument};
}

SpectrumSample SpectrumSample::from_values(const std::vector<Complex>& values, bool rescaled, std::uint64_t seed,
                                           std::uint64_t trial) {
  SpectrumSample s;
  s.points.reserve(values.size());
  for (const auto& z : values) s.points.push_back(SpectralPoint::from_value(z));
  s.rescaled = rescaled;
  s.seed = seed;
  s.trial = trial;
  return s;
}

std::vector<Complex> SpectrumSample::values() const {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.value);
  return out;
}

SpectrumSample spiral_sort(SpectrumSample sample) {
  std::stable_sort(sample.points.begin(), sample.points.end(),
                   [](const SpectralPoint& a, const SpectralPoint& b) { return a.key() < b.key(); });
  return sample;
}

double radius(int i, const EnsembleParams& params) {
  if (i < 0) throw std::invalid_argument("radius: negative index");
  const double ii = static_cast<double>(i);
  return ii / std::sqrt(params.n() - params.m() + ii * ii);
}

SquaredRadius squared_radius(int i, const EnsembleParams& params) {
  if (i < 0) throw std::invalid_argument("squared_radius: negative index");
  const double ii = static_cast<double>(i) * i;
  const double gap = params.n() - params.m();
  return {ii / (gap + ii), gap / (gap + ii)};
}

double epsilon_m(int m) {
  if (m < 1) throw std::invalid_argument("epsilon_m: m must be positive");
  return std::sqrt(2.0 * std::log(m + 1.0) / m);
}

double valid_index_bound(const EnsembleParams& params) {
  const int m = params.m();
  if (m < 3) throw std::invalid_argument("valid_index_bound: requires m >= 3");
  const double eps = epsilon_m(m);
  const double inner = 1.0 - eps / (1.0 - params.alpha() * (1.0 - eps));
  const double bound = inner > 0.0 ? std::sqrt(m * inner) : 0.0;
  if (bound <= 1.0) {
    throw std::domain_error("valid_index_bound: bound " + std::to_string(bound) +
                            " <= 1, no admissible counting index at m=" + std::to_string(m));
  }
  return bound;
}

CountingRegion CountingRegion::disc(int i) {
  if (i < 0) throw std::invalid_argument("disc: index must be >= 0");
  return {Kind::disc, i, kTwoPi, 0.0};
}

CountingRegion CountingRegion::sector(int i, double theta) {
  if (i < 0) throw std::invalid_argument("sector: index must be >= 0");
  if (!(theta > 0.0) || theta > kTwoPi) throw std::invalid_argument("sector: theta must lie in (0, 2pi]");
  return {Kind::sector, i, theta, 0.0};
}

CountingRegion CountingRegion::annulus(int l) {
  if (l < 1) throw std::invalid_argument("annulus: index must be >= 1");
  return {Kind::annulus, l, kTwoPi, 0.0};
}

CountingRegion CountingRegion::custom_disc(double r) {
  if (!(r >= 0.0) || r > 1.0) throw std::invalid_argument("custom_disc: radius must lie in [0, 1]");
  return {Kind::custom_disc, 0, kTwoPi, r};
}

namespace {

int parse_int(const std::string& s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("bad integer '" + s + "' in region");
  return v;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number '" + s + "' in region");
  }
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "' in region");
  return v;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

CountingRegion CountingRegion::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return sector(parse_int(text), kTwoPi);
    return sector(parse_int(text.substr(0, comma)), parse_double(text.substr(comma + 1)));
  }
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (kind == "disc") return disc(parse_int(rest));
  if (kind == "annulus") return annulus(parse_int(rest));
  if (kind == "radius") return custom_disc(parse_double(rest));
  if (kind == "sector") {
    const auto sep = rest.find_first_of(":,");
    if (sep == std::string::npos) return sector(parse_int(rest), kTwoPi);
    return sector(parse_int(rest.substr(0, sep)), parse_double(rest.substr(sep + 1)));
  }
  throw std::invalid_argument("unknown region kind '" + kind + "'");
}

std::string CountingRegion::label() const {
  switch (kind_) {
    case Kind::disc:
      return "disc:" + std::to_string(index_);
    case Kind::sector:
      return "sector:" + std::to_string(index_) + ":" + format_double(theta_);
    case Kind::annulus:
      return "annulus:" + std::to_string(index_);
    case Kind::custom_disc:
      return "radius:" + format_double(radius_);
  }
  return {};
}

bool CountingRegion::contains(const SpectralPoint& z, const EnsembleParams& params) const {
  switch (kind_) {
    case Kind::disc:
      return z.modulus < radius(index_, params);
    case Kind::sector: {
      const double inner = radius(index_, params);
      if (z.modulus < inner) return true;
      if (z.modulus >= radius(index_ + 1, params)) return false;
      // A full turn closes the annulus, including the positive real axis (arg = 2pi).
      return theta_ >= kTwoPi || (z.argument > 0.0 && z.argument < theta_);
    }
    case Kind::annulus:
      return z.modulus >= radius(index_ - 1, params) && z.modulus < radius(index_, params);
    case Kind::custom_disc:
      return z.modulus < radius_;
  }
  return false;
}

double CountingRegion::outer_radius(const EnsembleParams& params) const {
  switch (kind_) {
    case Kind::disc:
    case Kind::annulus:
      return radius(index_, params);
    case Kind::sector:
      return radius(index_ + 1, params);
    case Kind::custom_disc:
      return radius_;
  }
  return 0.0;
}

std::vector<RegionPiece> region_pieces(const CountingRegion& region, const EnsembleParams& params) {
  const SquaredRadius origin{0.0, 1.0};
  switch (region.kind()) {
    case CountingRegion::Kind::disc:
      return {{origin, squared_radius(region.index(), params), kTwoPi}};
    case CountingRegion::Kind::sector:
      return {{origin, squared_radius(region.index(), params), kTwoPi},
              {squared_radius(region.index(), params), squared_radius(region.index() + 1, params),
               region.theta()}};
    case CountingRegion::Kind::annulus:
      return {{squared_radius(region.index() - 1, params), squared_radius(region.index(), params), kTwoPi}};
    case CountingRegion::Kind::custom_disc: {
      const double r = region.custom_radius();
      return {{origin, {r * r, (1.0 - r) * (1.0 + r)}, kTwoPi}};
    }
  }
  return {};
}

int shell_index(int p) {
  if (p < 1) throw std::invalid_argument("shell_index: p must be >= 1");
  int l = static_cast<int>(std::sqrt(static_cast<double>(p)));
  while (l * l < p) ++l;
  while (l > 1 && (l - 1) * (l - 1) >= p) --l;
  return l;
}

SpectralPoint predicted_location(int p, const EnsembleParams& params) {
  if (p < 1 || p > params.m()) throw std::invalid_argument("predicted_location: p out of [1, m]");
  const int l = shell_index(p);
  const int q = p - (l - 1) * (l - 1);
  return SpectralPoint::from_polar(radius(l - 1, params), kTwoPi * q / (2.0 * l - 1.0));
}

int shell_of(double modulus, const EnsembleParams& params) {
  if (!(modulus >= 0.0) || !(modulus < 1.0)) throw std::invalid_argument("shell_of: modulus outside [0, 1)");
  const double x = modulus * modulus;
  const double g = params.n() - params.m();
  int k = static_cast<int>(std::floor(std::sqrt(g * x / (1.0 - x))));
  // Settle the estimate against the exact radius comparisons.
  while (k > 0 && modulus < radius(k, params)) --k;
  while (modulus >= radius(k + 1, params)) ++k;
  return k;
}

AnnularOrderKey annular_key(const SpectralPoint& z, const EnsembleParams& params, double scale) {
  const double r = z.modulus / scale;
  return {shell_of(r, params), z.argument, r};
}

SpectrumSample spiral_sort(SpectrumSample sample, const EnsembleParams& params, SpiralConvention convention) {
  if (convention == SpiralConvention::modulus) return spiral_sort(std::move(sample));
  const double scale = sample.rescaled ? std::sqrt(static_cast<double>(params.n()) / params.m()) : 1.0;
  std::vector<std::pair<AnnularOrderKey, std::size_t>> keys;
  keys.reserve(sample.points.size());
  for (std::size_t k = 0; k < sample.points.size(); ++k) keys.push_back({annular_key(sample.points[k], params, scale), k});
  std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<SpectralPoint> sorted;
  sorted.reserve(keys.size());
  for (const auto& [key, k] : keys) sorted.push_back(sample.points[k]);
  sample.points = std::move(sorted);
  return sample;
}

PredictedLattice predicted_lattice(const EnsembleParams& params) {
  PredictedLattice lattice;
  lattice.points.reserve(params.m());
  for (int p = 1; p <= params.m(); ++p) lattice.points.push_back(predicted_location(p, params));
  return lattice;
}

SpectrumSample PredictedLattice::as_sample(bool rescaled, double scale) const {
  SpectrumSample s;
  s.rescaled = rescaled;
  s.points.reserve(points.size());
  for (const auto& pt : points) s.points.push_back(SpectralPoint::from_polar(pt.modulus * scale, pt.argument));
  return s;
}

int count_in_region(const SpectrumSample& sample, const CountingRegion& region, const EnsembleParams& params) {
  if (sample.rescaled) {
    throw std::invalid_argument("count_in_region: coordinate-convention mismatch (sample is rescaled)");
  }
  return static_cast<int>(std::count_if(sample.points.begin(), sample.points.end(),
                                        [&](const SpectralPoint& z) { return region.contains(z, params); }));
}

}  // namespace rigidity
