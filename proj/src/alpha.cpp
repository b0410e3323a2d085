#include "cyclab/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include <fmt/format.h>

#include "cyclab/approx.hpp"

namespace cyclab {

void GridSpec::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("grid step must be positive");
  if (nx < 1 || ny < 1) throw ConfigError("grid dimensions must be positive");
}

PlanePoint GridSpec::center(std::size_t c) const {
  return PlanePoint(origin.re + (column(c) + 0.5) * step, origin.im + (row(c) + 0.5) * step);
}

std::optional<std::size_t> GridSpec::cell_of(Complex z) const {
  const double fx = (z.real() - origin.re) / step;
  const double fy = (z.imag() - origin.im) / step;
  if (!(fx >= 0.0) || !(fy >= 0.0) || fx > nx || fy > ny) return std::nullopt;
  const int ix = std::min(static_cast<int>(std::floor(fx)), nx - 1);
  const int iy = std::min(static_cast<int>(std::floor(fy)), ny - 1);
  return index(ix, iy);
}

GridSpec GridSpec::centered_on(const DiscreteMeasure& mu, int nx, int ny, double step) {
  if (mu.empty()) throw ConfigError("cannot place a grid on an empty measure");
  double x0 = mu.point(0).real(), x1 = x0, y0 = mu.point(0).imag(), y1 = y0;
  for (std::size_t i = 1; i < mu.size(); ++i) {
    x0 = std::min(x0, mu.point(i).real());
    x1 = std::max(x1, mu.point(i).real());
    y0 = std::min(y0, mu.point(i).imag());
    y1 = std::max(y1, mu.point(i).imag());
  }
  GridSpec g;
  g.step = step;
  g.nx = nx;
  g.ny = ny;
  g.origin = PlanePoint(0.5 * (x0 + x1) - 0.5 * nx * step, 0.5 * (y0 + y1) - 0.5 * ny * step);
  g.validate();
  return g;
}

const AlphaLevel& AlphaDecomposition::level(int n) const {
  if (n < 1 || n > n_levels()) throw ConfigError(fmt::format("level {} out of range", n));
  return levels[static_cast<std::size_t>(n - 1)];
}

double AlphaDecomposition::never_covered_mass() const {
  if (levels.empty()) return total_mass;
  double m = 0.0;
  for (auto c : levels.back().slits) m += cell_mass[c];
  return m;
}

std::vector<int> AlphaDecomposition::first_level() const {
  std::vector<int> cell_level(grid.cells(), 0);
  for (int n = n_levels(); n >= 1; --n)
    for (auto c : level(n).cells) cell_level[c] = n;
  std::vector<int> out(atom_cell.size());
  for (std::size_t i = 0; i < atom_cell.size(); ++i) out[i] = cell_level[atom_cell[i]];
  return out;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

bool on_boundary(const GridSpec& g, std::size_t c) {
  const int ix = g.column(c), iy = g.row(c);
  return ix == 0 || iy == 0 || ix == g.nx - 1 || iy == g.ny - 1;
}

template <class F>
void for_each_neighbor(const GridSpec& g, std::size_t c, F&& f) {
  const int ix = g.column(c), iy = g.row(c);
  if (ix > 0) f(g.index(ix - 1, iy));
  if (ix + 1 < g.nx) f(g.index(ix + 1, iy));
  if (iy > 0) f(g.index(ix, iy - 1));
  if (iy + 1 < g.ny) f(g.index(ix, iy + 1));
}

// Complement cells not reachable from the outside, grouped by component,
// each component ascending, components ordered by their smallest cell.
std::vector<std::vector<std::size_t>> enclosed_holes(const GridSpec& g, const std::vector<char>& in_f) {
  const std::size_t n = g.cells();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack;
  for (std::size_t c = 0; c < n; ++c)
    if (!in_f[c] && on_boundary(g, c)) {
      seen[c] = 1;
      stack.push_back(c);
    }
  while (!stack.empty()) {
    const auto c = stack.back();
    stack.pop_back();
    for_each_neighbor(g, c, [&](std::size_t d) {
      if (!in_f[d] && !seen[d]) {
        seen[d] = 1;
        stack.push_back(d);
      }
    });
  }
  std::vector<std::vector<std::size_t>> holes;
  for (std::size_t c = 0; c < n; ++c) {
    if (in_f[c] || seen[c]) continue;
    std::vector<std::size_t> comp{c};
    seen[c] = 1;
    for (std::size_t k = 0; k < comp.size(); ++k)
      for_each_neighbor(g, comp[k], [&](std::size_t d) {
        if (!in_f[d] && !seen[d]) {
          seen[d] = 1;
          comp.push_back(d);
        }
      });
    std::sort(comp.begin(), comp.end());
    holes.push_back(std::move(comp));
  }
  return holes;
}

// Cheapest set of F cells (by mass) whose removal joins `hole` to the
// outside, moving only through cells allowed by `removable`.
std::vector<std::size_t> cheapest_channel(const GridSpec& g, const std::vector<char>& in_f,
                                          const std::vector<char>& removable,
                                          const std::vector<double>& mass,
                                          const std::vector<std::size_t>& hole) {
  const std::size_t n = g.cells();
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> prev(n, none);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto c : hole) {
    dist[c] = 0.0;
    pq.emplace(0.0, c);
  }
  std::size_t exit_cell = none;
  while (!pq.empty()) {
    const auto [d, c] = pq.top();
    pq.pop();
    if (d > dist[c]) continue;
    if (on_boundary(g, c)) {
      exit_cell = c;
      break;
    }
    for_each_neighbor(g, c, [&](std::size_t e) {
      if (in_f[e] && !removable[e]) return;
      const double nd = d + (in_f[e] ? mass[e] : 0.0);
      if (nd < dist[e]) {
        dist[e] = nd;
        prev[e] = c;
        pq.emplace(nd, e);
      }
    });
  }
  if (exit_cell == none) return {none};
  std::vector<std::size_t> path;
  for (auto c = exit_cell; c != none; c = prev[c])
    if (in_f[c]) path.push_back(c);
  return path;
}

}  // namespace

ConnectivityCertificate check_complement_connected(const GridSpec& g, std::span<const std::size_t> cells) {
  const std::size_t n = g.cells();
  std::vector<char> in_f(n, 0);
  for (auto c : cells) in_f.at(c) = 1;
  DisjointSets ds(n + 1);
  const std::size_t outside = n;
  for (std::size_t c = 0; c < n; ++c) {
    if (in_f[c]) continue;
    if (on_boundary(g, c)) ds.unite(c, outside);
    const int ix = g.column(c), iy = g.row(c);
    if (ix + 1 < g.nx && !in_f[c + 1]) ds.unite(c, c + 1);
    if (iy + 1 < g.ny && !in_f[c + static_cast<std::size_t>(g.nx)]) ds.unite(c, c + static_cast<std::size_t>(g.nx));
  }
  ConnectivityCertificate cert;
  cert.labels.assign(n, -1);
  std::vector<int> label_of_root(n + 1, -1);
  label_of_root[ds.find(outside)] = 0;
  int next = 1;
  for (std::size_t c = 0; c < n; ++c) {
    if (in_f[c]) continue;
    const auto r = ds.find(c);
    if (label_of_root[r] < 0) label_of_root[r] = next++;
    cert.labels[c] = label_of_root[r];
  }
  cert.components = next;
  cert.connected = next == 1;
  return cert;
}

ConnectivityCertificate check_complement_connected(const AlphaDecomposition& decomp, int level) {
  return check_complement_connected(decomp.grid, decomp.level(level).cells);
}

int largest_full_square(const GridSpec& g, std::span<const std::size_t> cells) {
  std::vector<char> in_f(g.cells(), 0);
  for (auto c : cells) in_f.at(c) = 1;
  std::vector<int> side(g.cells(), 0);
  int best = 0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const auto c = g.index(ix, iy);
      if (!in_f[c]) continue;
      int s = 1;
      if (ix > 0 && iy > 0)
        s = 1 + std::min({side[g.index(ix - 1, iy)], side[g.index(ix, iy - 1)], side[g.index(ix - 1, iy - 1)]});
      side[c] = s;
      best = std::max(best, s);
    }
  return best;
}

namespace {

AlphaDecomposition bin_measure(const DiscreteMeasure& mu, const GridSpec& grid) {
  grid.validate();
  AlphaDecomposition d;
  d.grid = grid;
  d.total_mass = mu.total_mass();
  d.measure_id = mu.id();
  d.cell_mass.assign(grid.cells(), 0.0);
  d.atom_cell.resize(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto c = grid.cell_of(mu.point(i));
    if (!c) throw ConfigError(fmt::format("atom {} lies outside the grid rectangle", i));
    d.atom_cell[i] = *c;
    d.cell_mass[*c] += mu.weight(i);
  }
  for (std::size_t c = 0; c < grid.cells(); ++c)
    if (d.cell_mass[c] > 0.0) d.region.push_back(c);
  return d;
}

}  // namespace

AlphaDecomposition decomposition_from_cells(const DiscreteMeasure& mu, const GridSpec& grid,
                                            std::vector<std::size_t> cells) {
  AlphaDecomposition d = bin_measure(mu, grid);
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  AlphaLevel lv;
  std::vector<char> in_f(grid.cells(), 0);
  double kept = 0.0;
  for (auto c : cells) {
    in_f.at(c) = 1;
    kept += d.cell_mass[c];
  }
  for (auto c : d.region)
    if (!in_f[c]) {
      lv.slits.push_back(c);
      lv.removed_mass += d.cell_mass[c];
    }
  lv.cells = std::move(cells);
  lv.coverage = d.total_mass > 0.0 ? kept / d.total_mass : 1.0;
  d.levels.push_back(std::move(lv));
  return d;
}

AlphaDecomposition slit_decomposition(const DiscreteMeasure& mu, const GridSpec& grid, double eps,
                                      int n_levels) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  if (n_levels < 1) throw ConfigError("at least one level is required");
  AlphaDecomposition d = bin_measure(mu, grid);
  d.eps = eps;
  const std::size_t n = grid.cells();
  const double total = d.total_mass;

  std::vector<char> in_region(n, 0);
  for (auto c : d.region) in_region[c] = 1;

  // Cells that may still be removed: region cells outside F_{n-1}.
  std::vector<char> removable = in_region;
  std::vector<int> prev_columns(static_cast<std::size_t>(grid.nx));
  std::iota(prev_columns.begin(), prev_columns.end(), 0);
  int prev_pitch = 2;

  for (int level = 1; level <= n_levels; ++level) {
    const double budget = eps * std::ldexp(1.0, -level) * total;
    std::vector<double> column_mass(static_cast<std::size_t>(grid.nx), 0.0);
    for (std::size_t c = 0; c < n; ++c)
      if (removable[c] && d.cell_mass[c] <= budget) column_mass[static_cast<std::size_t>(grid.column(c))] += d.cell_mass[c];

    AlphaLevel lv;
    lv.budget = budget;
    for (int pitch = std::max(prev_pitch, 2);; pitch *= 2) {
      const bool single_band = pitch >= grid.nx;
      std::vector<int> columns;
      for (int b = 0; b * pitch < grid.nx; ++b) {
        int pick = -1;
        for (int col : prev_columns) {
          if (col < b * pitch || col >= (b + 1) * pitch) continue;
          if (pick < 0 || column_mass[static_cast<std::size_t>(col)] < column_mass[static_cast<std::size_t>(pick)])
            pick = col;
        }
        if (pick >= 0) columns.push_back(pick);
      }
      auto attempt = [&](const std::vector<int>& cols) {
        std::vector<char> in_f = in_region;
        std::vector<char> col_on(static_cast<std::size_t>(grid.nx), 0);
        for (int col : cols) col_on[static_cast<std::size_t>(col)] = 1;
        for (std::size_t c = 0; c < n; ++c)
          if (removable[c] && col_on[static_cast<std::size_t>(grid.column(c))] && d.cell_mass[c] <= budget) in_f[c] = 0;
        std::vector<std::size_t> channels;
        while (true) {
          const auto holes = enclosed_holes(grid, in_f);
          if (holes.empty()) break;
          const auto path = cheapest_channel(grid, in_f, removable, d.cell_mass, holes.front());
          if (path.size() == 1 && path[0] == std::numeric_limits<std::size_t>::max())
            throw InfeasibleError(fmt::format("level {}: an enclosed hole cannot be opened to the outside", level));
          if (path.empty()) break;  // cannot happen: a hole touches F
          for (auto c : path) {
            in_f[c] = 0;
            channels.push_back(c);
          }
        }
        std::sort(channels.begin(), channels.end());
        return std::make_pair(std::move(in_f), std::move(channels));
      };
      auto [in_f, channels] = attempt(columns);
      double removed = 0.0;
      for (auto c : d.region)
        if (!in_f[c]) removed += d.cell_mass[c];
      const bool fits = removed <= budget;
      if (!fits && single_band && !columns.empty()) {
        // The coarsest comb is still too heavy: drop the comb.
        columns.clear();
        std::tie(in_f, channels) = attempt(columns);
        removed = 0.0;
        for (auto c : d.region)
          if (!in_f[c]) removed += d.cell_mass[c];
      }
      if (fits || single_band) {
        lv.pitch = columns.empty() ? 0 : pitch;
        lv.slit_columns = columns;
        lv.channel_cells = std::move(channels);
        lv.removed_mass = removed;
        lv.within_budget = removed <= budget;
        for (std::size_t c = 0; c < n; ++c) {
          if (in_f[c]) lv.cells.push_back(c);
          else if (in_region[c]) lv.slits.push_back(c);
        }
        prev_pitch = std::max(pitch, prev_pitch);
        break;
      }
    }
    lv.coverage = total > 0.0 ? (total - lv.removed_mass) / total : 1.0;
    if (lv.removed_mass > eps * total)
      throw InfeasibleError(fmt::format("level {} removes {} of the mass, more than eps", level,
                                        lv.removed_mass / total));
    removable.assign(n, 0);
    for (auto c : lv.slits) removable[c] = 1;
    prev_columns = lv.slit_columns;
    d.levels.push_back(std::move(lv));
  }
  const double last_budget = d.levels.back().budget;
  for (auto c : d.region)
    if (d.cell_mass[c] > last_budget) d.exempt.push_back(c);
  return d;
}

ConjugateFit approx_conjugate_on(const AlphaDecomposition& decomp, const DiscreteMeasure& mu, int level,
                                 int degree_cap) {
  if (decomp.measure_id != mu.id()) throw BindingError("decomposition was built for another measure");
  const auto& lv = decomp.level(level);
  std::vector<char> in_f(decomp.grid.cells(), 0);
  for (auto c : lv.cells) in_f[c] = 1;
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (in_f[decomp.atom_cell[i]]) atoms.push_back(Atom{mu.atom(i).point, 1.0});
  ConjugateFit out;
  out.atoms = atoms.size();
  if (atoms.empty()) {
    out.q = Polynomial::monomial({});
    out.met = true;
    return out;
  }
  for (auto& a : atoms) a.weight = 1.0 / static_cast<double>(out.atoms);
  const DiscreteMeasure sub(std::move(atoms));
  double rmax = 0.0;
  for (std::size_t i = 0; i < sub.size(); ++i) rmax = std::max(rmax, std::abs(sub.point(i)));
  out.delta = level * rmax;
  out.target = std::exp(-out.delta);
  const auto target = SampledFunction::from(sub, [](Complex z) { return std::conj(z); });
  const int cap = std::max(1, degree_cap);
  WeightedSpan span(sub, cap);
  span.lawson.accept_below = out.target;
  span.lawson.reject_above = out.target;
  std::optional<ApproxResult> best;
  for (int deg = 1; deg <= cap; ++deg) {
    auto r = span.fit(target, NormSpec::sup(), deg);
    out.trail.emplace_back(deg, r.residual);
    if (!best || r.residual < best->residual) {
      best = r;
      out.degree = deg;
    }
    if (r.residual < out.target) break;
    if (span.columns(deg) == span.columns(cap) && deg > 1 && span.columns(deg) == span.columns(deg - 1)) break;
  }
  out.q = best->poly;
  out.sup_err = best->residual;
  out.met = out.sup_err < out.target;
  return out;
}

}  // namespace cyclab
