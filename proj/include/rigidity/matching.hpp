#pragma once

#include <span>
#include <vector>

#include "rigidity/ensemble.hpp"

namespace rigidity {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with potentials, O(n^3)). Returns the optimal total cost; `assignment`,
/// when given, receives the column matched to each row.
double min_cost_assignment(const std::vector<std::vector<double>>& cost, std::vector<int>* assignment = nullptr);

/// 1-Wasserstein distance between the uniform measures on two equal-size
/// point sets, under |z - w|.
double wasserstein1_uniform(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace rigidity
