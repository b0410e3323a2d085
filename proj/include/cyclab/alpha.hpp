#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cyclab/measure.hpp"
#include "cyclab/polynomial.hpp"

namespace cyclab {

/// Uniform grid of square cells. origin is the lower-left corner; cell
/// (ix, iy) covers [ox + ix h, ox + (ix+1) h) x [oy + iy h, oy + (iy+1) h)
/// and has flat index iy * nx + ix.
struct GridSpec {
  PlanePoint origin;
  double step = 1.0;
  int nx = 1;
  int ny = 1;

  void validate() const;
  std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix);
  }
  int column(std::size_t c) const { return static_cast<int>(c % static_cast<std::size_t>(nx)); }
  int row(std::size_t c) const { return static_cast<int>(c / static_cast<std::size_t>(nx)); }
  PlanePoint center(std::size_t c) const;
  // Cell holding z; points on the upper/right edge of the rectangle belong to
  // the last cell. Empty outside the rectangle.
  std::optional<std::size_t> cell_of(Complex z) const;

  // nx x ny grid of the given step, centered on the bounding box of mu.
  static GridSpec centered_on(const DiscreteMeasure& mu, int nx, int ny, double step);
};

struct AlphaLevel {
  std::vector<std::size_t> cells;          // F_n, ascending
  std::vector<std::size_t> slits;          // region cells not in F_n, ascending
  std::vector<int> slit_columns;           // comb columns, ascending
  std::vector<std::size_t> channel_cells;  // cells removed to open enclosed holes
  int pitch = 0;                           // comb pitch in cells; 0 when no comb
  double budget = 0.0;                     // eps 2^{-n} total
  double removed_mass = 0.0;
  double coverage = 0.0;                   // mass(F_n) / total
  bool within_budget = true;
};

/// Increasing cell sets F_1 ⊆ F_2 ⊆ ... with connected complements.
struct AlphaDecomposition {
  GridSpec grid;
  double eps = 0.0;
  double total_mass = 0.0;
  std::uint64_t measure_id = 0;
  std::vector<double> cell_mass;
  std::vector<std::size_t> atom_cell;
  std::vector<std::size_t> region;  // cells carrying mass, ascending
  std::vector<std::size_t> exempt;  // region cells heavier than the last budget
  std::vector<AlphaLevel> levels;

  int n_levels() const { return static_cast<int>(levels.size()); }
  const AlphaLevel& level(int n) const;  // 1-based
  // Mass of atoms outside every F_n.
  double never_covered_mass() const;
  // 1-based level at which each atom is first covered; 0 if never.
  std::vector<int> first_level() const;
};

/// Comb decomposition. Level n removes at most eps 2^{-n} of the total mass:
/// one minimal-mass cell column per band of `pitch` columns (pitch doubles
/// until the budget is met, never shrinks, and the level-n columns are a
/// subset of the level-(n-1) columns), plus minimal-mass channels that open
/// any enclosed complement hole to the outside. Cells heavier than the
/// budget stay in F. Throws InfeasibleError when a level would lose more
/// than eps of the mass or a hole cannot be opened.
AlphaDecomposition slit_decomposition(const DiscreteMeasure& mu, const GridSpec& grid, double eps,
                                      int n_levels);

// Builds a single-level decomposition from an explicit cell set (no slits).
AlphaDecomposition decomposition_from_cells(const DiscreteMeasure& mu, const GridSpec& grid,
                                            std::vector<std::size_t> cells);

struct ConnectivityCertificate {
  bool connected = true;
  int components = 1;
  // Component label per grid cell (-1 for cells of F); the outside is in
  // component 0.
  std::vector<int> labels;
};

// Union-find over the cells not in F plus one virtual outside node adjacent
// to every boundary cell; 4-connectivity.
ConnectivityCertificate check_complement_connected(const GridSpec& grid,
                                                   std::span<const std::size_t> cells);
ConnectivityCertificate check_complement_connected(const AlphaDecomposition& decomp, int level);

// Side, in cells, of the largest axis-aligned square made only of F cells.
int largest_full_square(const GridSpec& grid, std::span<const std::size_t> cells);

struct ConjugateFit {
  Polynomial q;
  double sup_err = 0.0;
  double delta = 0.0;   // n max |z| over the atoms in F_n
  double target = 1.0;  // e^{-delta}
  bool met = false;
  int degree = 0;
  std::size_t atoms = 0;
  std::vector<std::pair<int, double>> trail;  // (degree, sup error) per attempt
};

// Sup-norm approximation of conj(z) on the atoms in F_level, escalating the
// degree from 1 until the error drops below e^{-delta_n} or degree_cap.
ConjugateFit approx_conjugate_on(const AlphaDecomposition& decomp, const DiscreteMeasure& mu,
                                 int level, int degree_cap);

}  // namespace cyclab
