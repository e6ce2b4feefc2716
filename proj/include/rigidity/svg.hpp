#pragma once

#include <string>
#include <vector>

#include "rigidity/ensemble.hpp"
#include "rigidity/spectral_geometry.hpp"

namespace rigidity {

/// One trial's eigenvalues (class "eigenvalue"), the m predicted locations
/// (class "predicted") and ceil(sqrt(m)) circles at r_1, r_2, ... (class
/// "annulus"), all in the sample's coordinates.
std::string spectrum_scatter_svg(const SpectrumSample& sample, const EnsembleParams& params);

struct TailSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-scale y plot. Values below 1 / (2 trials), zeros included, are drawn at
/// that floor; the caption line says so.
std::string tail_plot_svg(const std::string& title, const std::string& x_label, const std::vector<TailSeries>& series,
                          int trials);

}  // namespace rigidity
