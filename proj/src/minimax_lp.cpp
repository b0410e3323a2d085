#include "cyclab/minimax_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cyclab {

// Inequality form: x = (c, s), G = [A, -1; -A, -1], h = (t, -t), minimize s.
// Slacks sig = h - G x > 0 and multipliers z > 0, both split into the upper
// (first n) and lower (last n) halves.
SpanFit<double> fit_sup_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& t, const MinimaxLpOptions& opt) {
  const Eigen::Index n = A.rows(), m = A.cols();
  if (n == 0) throw ConfigError("sup fit on an empty atom set");
  if (t.size() != n) throw ContractError("target length differs from the span rows");
  SpanFit<double> best;
  best.converged = false;

  Eigen::VectorXd c = m > 0 ? Eigen::VectorXd(A.householderQr().solve(t)) : Eigen::VectorXd(0);
  Eigen::VectorXd r = t - A * c;
  const double rmax = r.cwiseAbs().maxCoeff();
  best.coeffs = c;
  best.residual = rmax;
  if (rmax == 0.0) {
    best.converged = true;
    return best;
  }
  double s = 1.1 * rmax + 1e-8 * (1.0 + t.cwiseAbs().maxCoeff());
  Eigen::VectorXd sp = r.array() + s, sm = s - r.array();  // slacks
  Eigen::VectorXd zp = Eigen::VectorXd::Constant(n, 0.5 / static_cast<double>(n)), zm = zp;
  const double N = 2.0 * static_cast<double>(n);

  Eigen::MatrixXd M(m + 1, m + 1);
  Eigen::MatrixXd B(n, m);
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    // Residuals of G^T z + f = 0 and G x + sig = h.
    Eigen::VectorXd rd(m + 1);
    rd.head(m) = A.transpose() * (zp - zm);
    rd[m] = 1.0 - zp.sum() - zm.sum();
    const Eigen::VectorXd Ac = A * c;
    const Eigen::VectorXd rpp = Ac.array() - s + sp.array() - t.array();
    const Eigen::VectorXd rpm = -Ac.array() - s + sm.array() + t.array();
    const double mu = (sp.dot(zp) + sm.dot(zm)) / N;

    const double dual = t.dot(zm - zp);
    best.lower_bound = std::max(best.lower_bound, std::min(dual, best.residual));
    if (best.residual - best.lower_bound <= opt.gap_tol * best.residual) {
      best.converged = true;
      break;
    }

    const Eigen::VectorXd wp = zp.cwiseQuotient(sp), wm = zm.cwiseQuotient(sm);
    const Eigen::VectorXd wsum = wp + wm;
    B = A.array().colwise() * wsum.array().sqrt();
    M.setZero();
    M.topLeftCorner(m, m).selfadjointView<Eigen::Lower>().rankUpdate(B.transpose());
    M.block(m, 0, 1, m) = ((wm - wp).transpose() * A);
    M(m, m) = wsum.sum();
    const double reg = 1e-14 * std::max(M.diagonal().maxCoeff(), 1.0);
    M.diagonal().array() += reg;
    const Eigen::LDLT<Eigen::MatrixXd, Eigen::Lower> ldlt(M);

    struct Step {
      Eigen::VectorXd dx, dzp, dzm, dsp, dsm;
    };
    auto solve = [&](const Eigen::VectorXd& rcp, const Eigen::VectorXd& rcm) {
      const Eigen::VectorXd up = wp.cwiseProduct(rpp) + rcp.cwiseQuotient(sp);
      const Eigen::VectorXd um = wm.cwiseProduct(rpm) + rcm.cwiseQuotient(sm);
      Eigen::VectorXd rhs(m + 1);
      rhs.head(m) = -rd.head(m) - A.transpose() * (up - um);
      rhs[m] = -rd[m] + up.sum() + um.sum();
      Step st;
      st.dx = ldlt.solve(rhs);
      const Eigen::VectorXd Adc = A * st.dx.head(m);
      const double ds = st.dx[m];
      st.dzp = wp.cwiseProduct((Adc.array() - ds).matrix() + rpp) + rcp.cwiseQuotient(sp);
      st.dzm = wm.cwiseProduct((-Adc.array() - ds).matrix() + rpm) + rcm.cwiseQuotient(sm);
      st.dsp = (rcp - sp.cwiseProduct(st.dzp)).cwiseQuotient(zp);
      st.dsm = (rcm - sm.cwiseProduct(st.dzm)).cwiseQuotient(zm);
      return st;
    };
    auto max_step = [&](const Step& st) {
      double a = 1.0;
      auto limit = [&a](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
        for (Eigen::Index i = 0; i < v.size(); ++i)
          if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
      };
      limit(sp, st.dsp);
      limit(sm, st.dsm);
      limit(zp, st.dzp);
      limit(zm, st.dzm);
      return a;
    };

    const Eigen::VectorXd rcp0 = -sp.cwiseProduct(zp), rcm0 = -sm.cwiseProduct(zm);
    const Step aff = solve(rcp0, rcm0);
    const double aa = max_step(aff);
    const double mu_aff = ((sp + aa * aff.dsp).dot(zp + aa * aff.dzp) + (sm + aa * aff.dsm).dot(zm + aa * aff.dzm)) / N;
    const double sigma = std::pow(mu_aff / mu, 3.0);
    const Eigen::VectorXd rcp = rcp0 - aff.dsp.cwiseProduct(aff.dzp) + Eigen::VectorXd::Constant(n, sigma * mu);
    const Eigen::VectorXd rcm = rcm0 - aff.dsm.cwiseProduct(aff.dzm) + Eigen::VectorXd::Constant(n, sigma * mu);
    const Step st = solve(rcp, rcm);
    const double a = std::min(1.0, 0.99 * max_step(st));

    c += a * st.dx.head(m);
    s += a * st.dx[m];
    sp += a * st.dsp;
    sm += a * st.dsm;
    zp += a * st.dzp;
    zm += a * st.dzm;

    const double u = (t - A * c).cwiseAbs().maxCoeff();
    if (u < best.residual) {
      best.residual = u;
      best.coeffs = c;
    }
  }
  best.iterations = it;
  return best;
}

}  // namespace cyclab
