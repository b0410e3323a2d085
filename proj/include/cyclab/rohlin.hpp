#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cyclab/measure.hpp"

namespace cyclab {

struct Fiber {
  Complex value;
  std::vector<std::size_t> atoms;  // ascending
  double mass = 0.0;
};

// Fibers of phi in order of first occurrence; same merging rule as pushforward.
std::vector<Fiber> fiber_map(const DiscreteMeasure& mu, const SampledFunction& phi,
                             double tol = kDefaultMergeTolerance);

/// mu_1, mu_2, ... over the value space. Within each fiber the atoms are sorted
/// by descending weight (ties by atom index) and the k-th one goes to mu_k.
struct RohlinLayers {
  std::vector<DiscreteMeasure> layers;
  std::vector<std::size_t> assignment;  // 1-based layer per atom
  std::vector<Fiber> fibers;
  std::vector<std::size_t> atom_fiber;
  // Atomic inputs have no continuous part; the slot is always empty.
  std::optional<DiscreteMeasure> continuous_part;

  std::size_t count() const { return layers.size(); }
};

RohlinLayers rohlin_decompose(const DiscreteMeasure& mu, const SampledFunction& phi,
                              double tol = kDefaultMergeTolerance);

struct LocalMultiplicity {
  Complex z;
  std::size_t m = 0;
};

struct MultiplicityReport {
  std::vector<LocalMultiplicity> local;
  std::size_t mp = 0;
  bool infinite = false;  // never set for atomic inputs
};

MultiplicityReport local_multiplicity(const DiscreteMeasure& mu, const SampledFunction& phi,
                                      double tol = kDefaultMergeTolerance);

// f_n = 1_{layer n} e^{-2|phi|}, n = 1..mp.
std::vector<SampledFunction> build_cyclic_set(const DiscreteMeasure& mu, const SampledFunction& phi,
                                              const RohlinLayers& layers);

struct CyclicSetCheck {
  int degree = 0;               // max layer support size - 1
  double max_residual = 0.0;    // worst relative L^2 residual over atom indicators
  bool exact = false;           // max_residual <= 1e-8
};

// Approximates every atom indicator by sum_g p_g(phi) f_g at the given degree
// (default: max layer support size - 1).
CyclicSetCheck verify_cyclic_set(const DiscreteMeasure& mu, const SampledFunction& phi,
                                 const std::vector<SampledFunction>& generators, const RohlinLayers& layers,
                                 std::optional<int> degree = std::nullopt);

struct InsufficiencyReport {
  double estimate = 0.0;        // min over candidate sets of the hardest residual
  double geometry_bound = 0.0;  // max over fibers with m > d of sqrt(w_min (m-d)/m)
  std::vector<double> per_trial;
  std::size_t hardest_fiber = 0;
  std::string reason;
};

// For d < mp: with polynomials in phi unrestricted in degree, the reachable
// set within a fiber is the span of the candidates restricted to it, so the
// best residual of each atom indicator is an exact per-fiber projection.
// Candidate sets are `trials` seeded complex Gaussian draws plus any
// `explicit_sets` (each a list of d functions).
InsufficiencyReport generator_insufficiency_test(
    const DiscreteMeasure& mu, const SampledFunction& phi, int d, int trials, std::uint64_t seed,
    const std::vector<std::vector<SampledFunction>>& explicit_sets = {},
    double tol = kDefaultMergeTolerance);

// Exact best L^2(mu) residual of the hardest atom indicator for one candidate set.
double hardest_indicator_residual(const DiscreteMeasure& mu, const std::vector<Fiber>& fibers,
                                  const std::vector<SampledFunction>& candidates);

}  // namespace cyclab
