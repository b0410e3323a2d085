#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyclab/alpha.hpp"
#include "cyclab/approx.hpp"
#include "cyclab/measure.hpp"
#include "cyclab/polynomial.hpp"

namespace cyclab {

/// rho = e^{-2|z|} / M_n on atoms first covered at level n, 1 elsewhere.
struct RhoWeight {
  std::vector<double> values;
  std::vector<int> level;       // first covering level per atom; 0 = never covered
  std::vector<double> M;        // M_1..M_N
  std::vector<double> q_sup;    // ||q_n e^{-|z|}||_inf over the atoms
  std::vector<double> delta;    // delta_n, when known (empty otherwise)
  std::uint64_t measure_id = 0;

  SampledFunction as_function() const;
};

// qs[n-1] approximates conj(z) on F_n. M_n runs over all atoms of mu.
RhoWeight build_rho(const AlphaDecomposition& decomp, const std::vector<Polynomial>& qs,
                    const DiscreteMeasure& mu);

// Runs approx_conjugate_on for every level, then build_rho.
RhoWeight build_rho_pipeline(const AlphaDecomposition& decomp, const DiscreteMeasure& mu, int degree_cap,
                             std::vector<ConjugateFit>* fits = nullptr);

struct NamedTarget {
  std::string name;
  SampledFunction f;
};

// Indicators of `indicators` seeded random atoms, conj(z), and |z|^2 e^{-|z|}.
std::vector<NamedTarget> default_targets(const DiscreteMeasure& mu, std::uint64_t seed,
                                         std::size_t indicators = 8);

struct CyclicityRow {
  std::string target;
  int degree = 0;
  double residual = 0.0;
  double relative = 0.0;  // residual / ||target||
  bool converged = true;
};

struct CyclicityReport {
  std::vector<CyclicityRow> rows;
  std::vector<double> final_relative;  // per target, at degree_max
  bool cyclic = false;                 // all final relative residuals < tol
  bool zero_at_atom = false;
  bool bound_violated = false;         // some |h| > C rho
  int degree_max = 0;
  double tol = 0.0;
};

// Profiles of every target against {p(z) h}. When rho is given, |h| <= C rho
// is checked and reported.
CyclicityReport cyclicity_test(const DiscreteMeasure& mu, const SampledFunction& h, NormSpec norm,
                               const std::vector<NamedTarget>& targets, int degree_max, double tol,
                               const RhoWeight* rho = nullptr, double C = 1.0);

// f -> f e^{-|phi|}.
std::vector<SampledFunction> graph_cyclic_transform(const std::vector<SampledFunction>& zset,
                                                    const SampledFunction& phi);

/// Span {sum_g p_g(phi) z_g : deg p_g <= degree} on the atoms of mu, with
/// columns orthonormal in L^2(mu). Built per generator (orthonormal basis in
/// phi for the weights w |z_g|^2) and then orthonormalized across
/// generators.
class GeneratorSpan {
 public:
  GeneratorSpan(const DiscreteMeasure& mu, const SampledFunction& phi,
                const std::vector<SampledFunction>& generators, int degree);

  std::size_t columns() const { return static_cast<std::size_t>(A_.cols()); }
  const Eigen::MatrixXcd& matrix() const { return A_; }

  // Best approximation of target in the norm; returns the approximant values.
  std::vector<Complex> fit(const SampledFunction& target, NormSpec norm, double* residual = nullptr,
                           bool* converged = nullptr) const;

 private:
  DiscreteMeasure mu_;
  std::vector<double> w_;
  Eigen::MatrixXcd A_;
};

struct GraphRow {
  int degree = 0;
  std::string target;
  double residual_e = 0.0;  // ||t - u|| in L^p((1+|phi|^p) mu)
  double residual_d = 0.0;  // ||(t - u)(1+|phi|^p)^{1/p}|| in L^p(mu)
  double residual_c = 0.0;  // graph norm: (||t-u||^p + ||phi (t-u)||^p)^{1/p} in L^p(mu)
  double max_rel_gap = 0.0; // largest pairwise disagreement, relative
};

struct GraphReport {
  std::vector<GraphRow> rows;
  bool equal_forms = true;  // all gaps <= 1e-12
  bool graph_cyclic = false;
};

// Density of Pi(phi) zset in L^p((1+|phi|^p) mu), with the three equivalent
// residuals computed on each approximant.
GraphReport graph_density_test(const std::vector<SampledFunction>& zset, const SampledFunction& phi,
                               const DiscreteMeasure& mu, double p, int degree_max, double tol,
                               const std::vector<NamedTarget>& targets);

struct ComposeRow {
  std::size_t k = 0;
  int n = 0;
  double residual = 0.0;       // d(a b^n c, a a_k^n c)
  double step_residual = 0.0;  // d(a b^n c, a a_k b^{n-1} c)
  double step_bound = 0.0;     // ||a b^{n-1} c||_inf^{(p)} d(b, a_k)
  double telescoped_bound = 0.0;
  bool step_ok = true;
  bool telescoped_ok = true;
};

struct ComposeReport {
  std::vector<ComposeRow> rows;
  bool hypothesis_flag = false;  // some sup exceeded 1e12
  bool all_ok = true;
};

// For p >= 1, d is the L^p norm and ||f||^{(p)} = ||f||_inf; for p < 1, d is
// the p-metric and ||f||^{(p)} = ||f||_inf^p. Telescoped bound:
// T_0 = 0, T_{n+1} = ||a b^n c||^{(p)} d(b, a_k) + ||a_k||^{(p)} T_n.
ComposeReport closure_compose(const SampledFunction& a, const SampledFunction& b,
                              const std::vector<SampledFunction>& a_k, const SampledFunction& c,
                              const DiscreteMeasure& mu, double p, int n_max);

}  // namespace cyclab
