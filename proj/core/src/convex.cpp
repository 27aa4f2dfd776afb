#include "indist/convex.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>

#include "indist/errors.hpp"

namespace indist {
namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A smooth convex objective on the free variables.
struct Objective {
  std::function<double(const Vec&)> value;
  std::function<void(const Vec&, Vec&, Mat&)> derivatives;
};

// minimize phi(z) s.t. rows.z <= rhs, z > 0, and sum over each block = 1.
// Rows come in pairs (r, -r), one pair per two-sided constraint.
struct ConvexProblem {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end)
  Mat rows;
  Vec rhs;
  Objective objective;
  // phi without the sqrt floor, at z clipped to be nonnegative.
  std::function<long double(const Vec&)> exact_value;
  // Lagrange dual value for row multipliers lam >= 0, given rows^T lam and
  // lam.rhs; the block multipliers are optimized inside. A lower bound on
  // the optimum for any lam.
  std::function<long double(const Vec&, long double)> dual_value;
};

// Minimizes a unimodal function of t on [lo, hi].
template <class F>
long double golden_min(F&& f, long double lo, long double hi) {
  const long double r = 0.6180339887498948482L;
  long double a = lo, b = hi;
  long double c = b - r * (b - a), d = a + r * (b - a);
  long double fc = f(c), fd = f(d);
  for (int i = 0; i < 200; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

struct SolveResult {
  Vec z;
  SolverDiagnostics diagnostics;
};

// Primal-dual interior point. The positivity bounds are folded into the
// inequality block as -z <= 0. Step lengths come from a backtracking search
// on the residual norm, which stays meaningful far along the central path.
SolveResult solve_primal_dual(const ConvexProblem& pb, Vec z,
                              const SolverConfig& cfg) {
  const Eigen::Index n = static_cast<Eigen::Index>(pb.n);
  const Eigen::Index nb = static_cast<Eigen::Index>(pb.blocks.size());
  const Eigen::Index mf = pb.rows.rows();
  const Eigen::Index m = mf + n;
  Mat g_mat(m, n);
  g_mat.topRows(mf) = pb.rows;
  g_mat.bottomRows(n) = -Mat::Identity(n, n);
  Vec h(m);
  h.head(mf) = pb.rhs;
  h.tail(n).setZero();
  Mat eq = Mat::Zero(nb, n);
  for (Eigen::Index b = 0; b < nb; ++b) {
    auto [lo, hi] = pb.blocks[static_cast<std::size_t>(b)];
    for (auto j = lo; j < hi; ++j) eq(b, static_cast<Eigen::Index>(j)) = 1.0;
  }
  const Vec ones = Vec::Ones(nb);

  Vec s = h - g_mat * z;
  if ((s.array() <= 0.0).any()) {
    throw SolverError("starting point is not strictly feasible");
  }
  Vec lam = s.cwiseInverse();
  Vec nu = Vec::Zero(nb);
  Vec grad(n);
  Mat hess(n, n);

  struct Residual {
    Vec dual, cent, pri;
    double norm() const {
      return std::sqrt(dual.squaredNorm() + cent.squaredNorm() +
                       pri.squaredNorm());
    }
  };
  auto residual = [&](const Vec& zz, const Vec& ll, const Vec& vv,
                      double t) -> Residual {
    Vec gr(n);
    Mat unused(n, n);
    pb.objective.derivatives(zz, gr, unused);
    Vec ss = h - g_mat * zz;
    return {gr + g_mat.transpose() * ll + eq.transpose() * vv,
            ll.cwiseProduct(ss).array() - 1.0 / t, eq * zz - ones};
  };

  SolverDiagnostics diag;
  const double mu = 10.0;
  int stalled = 0;
  double rel_dual = 0.0, pri = 0.0, gap = 0.0;
  double certified = std::numeric_limits<double>::infinity();
  for (;;) {
    pb.objective.derivatives(z, grad, hess);
    s = h - g_mat * z;
    gap = s.dot(lam);
    Vec r_dual = grad + g_mat.transpose() * lam + eq.transpose() * nu;
    rel_dual = r_dual.cwiseAbs().maxCoeff() / (1.0 + grad.cwiseAbs().maxCoeff());
    pri = (eq * z - ones).cwiseAbs().maxCoeff();
    // Where the optimum has p_x = q_x = 0 the objective is not smooth and
    // the stationarity residual decays slowly, so the primal-dual gap
    // against the Lagrange dual is tracked as well.
    const Vec lam_f = lam.head(mf).cwiseMax(0.0);
    const long double dual =
        pb.dual_value(pb.rows.transpose() * lam_f,
                      static_cast<long double>(lam_f.dot(pb.rhs)));
    certified = std::max(
        0.0, static_cast<double>(pb.exact_value(z) - dual));
    if (pri <= 1e-13 &&
        (certified <= cfg.gap_tolerance ||
         (gap <= cfg.gap_tolerance && rel_dual <= cfg.gap_tolerance))) {
      diag.status = "solved";
      break;
    }
    if (diag.iterations >= cfg.max_iterations || stalled >= 8) {
      diag.status = "stalled";
      break;
    }
    ++diag.iterations;
    const double t = mu * static_cast<double>(m) / gap;
    Vec r_cent = lam.cwiseProduct(s).array() - 1.0 / t;
    Vec r_pri = eq * z - ones;

    // Family rows stay in augmented form, one row per (r, -r) pair; only
    // the bounds -z <= 0 are eliminated, adding a diagonal to the Hessian.
    // Forming G^T D G loses the block sums once slacks reach about 1e-10,
    // and keeping both rows of a pair is singular when both are tight.
    const Eigen::Index mp = mf / 2;
    const Eigen::Index na = n + mp + nb;
    const Vec d = lam.cwiseQuotient(s);
    Mat kkt = Mat::Zero(na, na);
    kkt.topLeftCorner(n, n) = hess;
    for (Eigen::Index j = 0; j < n; ++j) kkt(j, j) += d(mf + j);
    Vec rhs(na);
    rhs.head(n) = -r_dual - r_cent.tail(n).cwiseQuotient(s.tail(n));
    for (Eigen::Index k = 0; k < mp; ++k) {
      const Eigen::Index i = 2 * k, j = 2 * k + 1;
      const double w = d(i) + d(j);
      kkt.block(0, n + k, n, 1) = pb.rows.row(i).transpose();
      kkt.block(n + k, 0, 1, n) = pb.rows.row(i);
      kkt(n + k, n + k) = -1.0 / w;
      rhs(n + k) = (r_cent(i) / s(i) - r_cent(j) / s(j)) / w;
    }
    kkt.block(0, n + mp, n, nb) = eq.transpose();
    kkt.block(n + mp, 0, nb, n) = eq;
    rhs.tail(nb) = -r_pri;
    // Symmetric equilibration: the diagonal spans many orders of magnitude.
    Vec scale = Vec::Ones(na);
    for (int pass = 0; pass < 10; ++pass) {
      for (Eigen::Index i = 0; i < na; ++i) {
        const double c =
            (scale.asDiagonal() * kkt.col(i)).cwiseAbs().maxCoeff() * scale(i);
        if (c > 0.0) scale(i) /= std::sqrt(c);
      }
    }
    Eigen::FullPivLU<Mat> lu(scale.asDiagonal() * kkt * scale.asDiagonal());
    // Small pivots here are real, not rank loss.
    lu.setThreshold(std::numeric_limits<double>::min());
    auto solve_kkt = [&](const Vec& r) -> Vec {
      return scale.cwiseProduct(lu.solve(scale.cwiseProduct(r)));
    };
    Vec sol = solve_kkt(rhs);
    for (int pass = 0; pass < 3; ++pass) sol += solve_kkt(rhs - kkt * sol);
    Vec dz = sol.head(n);
    Vec dnu = sol.tail(nb);
    // lam*s = 1/t linearized with ds = -G dz. The pair unknown is
    // dlam_i - dlam_j; the looser row is recovered from dz, where its small
    // d keeps the error small, and the tighter one from the difference.
    Vec dlam = (-r_cent + lam.cwiseProduct(g_mat * dz)).cwiseQuotient(s);
    for (Eigen::Index k = 0; k < mp; ++k) {
      const Eigen::Index i = 2 * k, j = 2 * k + 1;
      if (d(i) >= d(j)) {
        dlam(i) = sol(n + k) + dlam(j);
      } else {
        dlam(j) = dlam(i) - sol(n + k);
      }
    }

    double a = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (dlam(i) < 0) a = std::min(a, -lam(i) / dlam(i));
    }
    a *= 0.99;
    while (a > 1e-20 && ((h - g_mat * (z + a * dz)).array() <= 0.0).any()) {
      a *= 0.5;
    }
    const double r0 = Residual{r_dual, r_cent, r_pri}.norm();
    while (a > 1e-20 &&
           residual(z + a * dz, lam + a * dlam, nu + a * dnu, t).norm() >
               (1.0 - 0.01 * a) * r0) {
      a *= 0.5;
    }
    if (a <= 1e-20) {
      diag.status = "stalled";
      break;
    }
    stalled = a < 1e-10 ? stalled + 1 : 0;
    z += a * dz;
    lam += a * dlam;
    nu += a * dnu;
  }
  diag.outer_iterations = diag.iterations;
  diag.duality_gap = certified;
  diag.kkt_residual =
      std::min(std::max({rel_dual, pri, gap}), std::max(certified, pri));
  if (diag.kkt_residual > cfg.kkt_tolerance) {
    throw SolverError("solver stopped (" + diag.status +
                      ") with KKT residual " + std::to_string(diag.kkt_residual));
  }
  diag.status = "solved";
  return {z, diag};
}

// Family rows that can actually move: constant functions are dropped since
// f.p is fixed on the simplex.
std::vector<std::size_t> active_functions(const Family& family) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& v = family[i].values();
    for (std::size_t x = 1; x < v.size(); ++x) {
      if (v[x] != v[0]) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

bool exactly_feasible(const Family& family, const ProbDist& reference,
                      const ProbDist& candidate, const Rational& eps) {
  for (const auto& f : family.functions()) {
    if (advantage_exact(f, reference, candidate) > eps) return false;
  }
  return true;
}

// The constraint set pins p when {f.p : f in F} plus total mass determine
// p uniquely; at eps = 0 the only feasible point is then the reference.
bool pinned_at_zero(const Family& family, std::size_t n) {
  Mat a(static_cast<Eigen::Index>(family.size() + 1),
        static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t x = 0; x < n; ++x) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(x)) =
          family[i].reals()[x];
    }
  }
  a.row(static_cast<Eigen::Index>(family.size())).setOnes();
  Eigen::FullPivLU<Mat> lu(a);
  lu.setThreshold(1e-12);
  return static_cast<std::size_t>(lu.rank()) == n;
}

void append_side(const Family& family, const std::vector<std::size_t>& fs,
                 const std::vector<double>& ref, double eps,
                 std::size_t offset, std::size_t n_total, Mat& rows, Vec& rhs) {
  const Eigen::Index start = rows.rows();
  rows.conservativeResize(start + 2 * static_cast<Eigen::Index>(fs.size()),
                          static_cast<Eigen::Index>(n_total));
  rhs.conservativeResize(start + 2 * static_cast<Eigen::Index>(fs.size()));
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const auto& f = family[fs[k]].reals();
    double fx = 0.0;
    for (std::size_t x = 0; x < ref.size(); ++x) fx += f[x] * ref[x];
    const Eigen::Index r = start + 2 * static_cast<Eigen::Index>(k);
    rows.row(r).setZero();
    rows.row(r + 1).setZero();
    for (std::size_t x = 0; x < ref.size(); ++x) {
      rows(r, static_cast<Eigen::Index>(offset + x)) = f[x];
      rows(r + 1, static_cast<Eigen::Index>(offset + x)) = -f[x];
    }
    rhs(r) = fx + eps;
    rhs(r + 1) = -fx + eps;
  }
}

// Interior start: mix the reference with uniform by a weight below eps.
std::vector<double> interior_start(const std::vector<double>& ref, double eps) {
  const double theta = std::min(0.5, eps / 2.0);
  std::vector<double> p(ref.size());
  const double u = 1.0 / static_cast<double>(ref.size());
  for (std::size_t x = 0; x < ref.size(); ++x) {
    p[x] = (1.0 - theta) * ref[x] + theta * u;
  }
  return p;
}

double min_slack(const Family& family, const std::vector<double>& ref,
                 const std::vector<double>& w, double eps) {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& f : family.functions()) {
    double a = 0.0;
    for (std::size_t x = 0; x < ref.size(); ++x) {
      a += f.reals()[x] * (ref[x] - w[x]);
    }
    s = std::min(s, eps - std::abs(a));
  }
  return s;
}

double floored(double v, double tau) { return v > tau ? v : tau; }

// Solver output back onto the simplex: the iterate meets the block sums
// only up to the primal tolerance.
std::vector<double> normalized(std::vector<double> w) {
  long double total = 0;
  for (auto& v : w) {
    v = std::max(v, 0.0);
    total += v;
  }
  for (auto& v : w) v = static_cast<double>(v / total);
  return w;
}

}  // namespace

double hellinger_objective(const std::vector<double>& p,
                           const std::vector<double>& q, double tau) {
  long double s = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    s += std::sqrt(static_cast<long double>(floored(p[x], tau)) *
                   floored(q[x], tau));
  }
  return static_cast<double>(1.0L - s);
}

void hellinger_gradient(const std::vector<double>& p,
                        const std::vector<double>& q, double tau,
                        std::vector<double>& grad_p,
                        std::vector<double>& grad_q) {
  grad_p.resize(p.size());
  grad_q.resize(q.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double a = floored(p[x], tau), b = floored(q[x], tau);
    grad_p[x] = p[x] > tau ? -0.5 * std::sqrt(b / a) : 0.0;
    grad_q[x] = q[x] > tau ? -0.5 * std::sqrt(a / b) : 0.0;
  }
}

double sqrt_sum_objective(const std::vector<double>& p, double tau) {
  long double s = 0;
  for (double v : p) s += std::sqrt(static_cast<long double>(floored(v, tau)));
  return static_cast<double>(s);
}

void sqrt_sum_gradient(const std::vector<double>& p, double tau,
                       std::vector<double>& grad) {
  grad.resize(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    grad[x] = p[x] > tau ? 0.5 / std::sqrt(floored(p[x], tau)) : 0.0;
  }
}

PseudoDistanceResult pseudo_hellinger(const ProbDist& x0, const ProbDist& x1,
                                      const Family& family, double eps,
                                      const SolverConfig& cfg) {
  require_same_domain(x0.domain(), x1.domain());
  if (!family.empty()) require_same_domain(x0.domain(), family.domain());
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw ValidationError("epsilon must lie in [0,1)");
  }
  const std::size_t n = x0.size();
  const Rational eps_q = rational_from_double(eps);
  const auto r0 = x0.reals(), r1 = x1.reals();

  auto finish = [&](ProbDist w0, ProbDist w1, SolverDiagnostics diag) {
    PseudoDistanceResult out{0.0, 0.0, std::move(w0), std::move(w1), std::move(diag)};
    out.delta_sq = std::max(0.0, hellinger_sq(out.witness0.reals(),
                                              out.witness1.reals()));
    out.delta_star = std::sqrt(out.delta_sq);
    out.diagnostics.min_slack = {
        min_slack(family, r0, out.witness0.reals(), eps),
        min_slack(family, r1, out.witness1.reals(), eps)};
    return out;
  };

  // A common feasible point exists iff the mixture is one.
  ProbDist d = mixture(x0, x1);
  if (exactly_feasible(family, x0, d, eps_q) &&
      exactly_feasible(family, x1, d, eps_q)) {
    SolverDiagnostics diag;
    diag.status = "common_point";
    return finish(d, d, diag);
  }

  const bool pin = eps == 0.0 && pinned_at_zero(family, n);
  if (pin) {
    SolverDiagnostics diag;
    diag.status = "pinned";
    return finish(x0, x1, diag);
  }
  // Exact equality constraints have no interior; relax them below the
  // reported feasibility tolerance.
  const double eps_eff = eps > 0.0 ? eps : 1e-10;
  const auto fs = active_functions(family);
  const double tau = cfg.sqrt_floor;

  ConvexProblem pb;
  pb.n = 2 * n;
  pb.blocks = {{0, n}, {n, 2 * n}};
  pb.rows.resize(0, static_cast<Eigen::Index>(2 * n));
  append_side(family, fs, r0, eps_eff, 0, 2 * n, pb.rows, pb.rhs);
  append_side(family, fs, r1, eps_eff, n, 2 * n, pb.rows, pb.rhs);
  const Eigen::Index kn = static_cast<Eigen::Index>(n);
  pb.objective.value = [&](const Vec& z) {
    long double s = 0;
    for (Eigen::Index x = 0; x < kn; ++x) {
      s += std::sqrt(static_cast<long double>(floored(z(x), tau)) *
                     floored(z(kn + x), tau));
    }
    return static_cast<double>(1.0L - s);
  };
  pb.objective.derivatives = [&](const Vec& z, Vec& g, Mat& h) {
    h.setZero();
    for (Eigen::Index x = 0; x < kn; ++x) {
      const double a = floored(z(x), tau), b = floored(z(kn + x), tau);
      const double sa = std::sqrt(a), sb = std::sqrt(b);
      g(x) = -0.5 * sb / sa;
      g(kn + x) = -0.5 * sa / sb;
      h(x, x) = 0.25 * sb / (a * sa);
      h(kn + x, kn + x) = 0.25 * sa / (b * sb);
      h(x, kn + x) = h(kn + x, x) = -0.25 / (sa * sb);
    }
  };

  pb.exact_value = [&](const Vec& z) {
    long double acc = 0;
    for (Eigen::Index x = 0; x < kn; ++x) {
      acc += std::sqrt(static_cast<long double>(std::max(z(x), 0.0)) *
                       std::max(z(kn + x), 0.0));
    }
    return 1.0L - acc;
  };
  // inf over p, q >= 0 of -sqrt(pq) + a p + b q is 0 when a, b > 0 and
  // 4ab >= 1, else -inf. For a given shift nu0 on p the cheapest feasible
  // shift on q is max_x 1/(4(cp + nu0)) - cq.
  pb.dual_value = [&](const Vec& c, long double lam_rhs) {
    const long double base = -static_cast<long double>(c.head(kn).minCoeff());
    auto shift_cost = [&](long double t) {
      const long double nu0 = base + std::exp(t);
      long double nu1 = -std::numeric_limits<long double>::infinity();
      for (Eigen::Index x = 0; x < kn; ++x) {
        nu1 = std::max(nu1, 1.0L / (4.0L * (c(x) + nu0)) - c(kn + x));
      }
      return nu0 + nu1;
    };
    return 1.0L - lam_rhs - golden_min(shift_cost, -80.0L, 30.0L);
  };

  auto p0 = interior_start(r0, eps_eff), q0 = interior_start(r1, eps_eff);
  Vec z(2 * kn);
  for (Eigen::Index x = 0; x < kn; ++x) {
    z(x) = p0[static_cast<std::size_t>(x)];
    z(kn + x) = q0[static_cast<std::size_t>(x)];
  }
  SolveResult res = solve_primal_dual(pb, z, cfg);
  std::vector<double> w0(n), w1(n);
  for (std::size_t x = 0; x < n; ++x) {
    w0[x] = res.z(static_cast<Eigen::Index>(x));
    w1[x] = res.z(kn + static_cast<Eigen::Index>(x));
  }
  return finish(ProbDist::from_reals(x0.domain(), normalized(w0)),
                ProbDist::from_reals(x1.domain(), normalized(w1)),
                res.diagnostics);
}

PseudoEntropyResult pseudo_renyi(const ProbDist& x0, const Family& family,
                                 double eps, const SolverConfig& cfg) {
  if (!family.empty()) require_same_domain(x0.domain(), family.domain());
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw ValidationError("epsilon must lie in [0,1)");
  }
  const std::size_t n = x0.size();
  const Rational eps_q = rational_from_double(eps);
  const auto r0 = x0.reals();
  const double log_n = std::log2(static_cast<double>(n));

  auto finish = [&](ProbDist w, SolverDiagnostics diag) {
    PseudoEntropyResult out{0.0, 0.0, std::move(w), std::move(diag)};
    out.r_star = renyi_half_entropy(out.witness).value;
    out.gap = std::max(0.0, log_n - out.r_star);
    out.diagnostics.min_slack = {min_slack(family, r0, out.witness.reals(), eps)};
    return out;
  };

  ProbDist u = ProbDist::uniform(n);
  u = ProbDist(x0.domain(), u.mass());
  if (exactly_feasible(family, x0, u, eps_q)) {
    SolverDiagnostics diag;
    diag.status = "common_point";
    return finish(u, diag);
  }
  if (eps == 0.0 && pinned_at_zero(family, n)) {
    SolverDiagnostics diag;
    diag.status = "pinned";
    return finish(x0, diag);
  }
  const double eps_eff = eps > 0.0 ? eps : 1e-10;
  const auto fs = active_functions(family);
  const double tau = cfg.sqrt_floor;

  ConvexProblem pb;
  pb.n = n;
  pb.blocks = {{0, n}};
  pb.rows.resize(0, static_cast<Eigen::Index>(n));
  append_side(family, fs, r0, eps_eff, 0, n, pb.rows, pb.rhs);
  const Eigen::Index kn = static_cast<Eigen::Index>(n);
  // Maximizing sum sqrt p is minimizing its negation.
  pb.objective.value = [&](const Vec& z) {
    long double s = 0;
    for (Eigen::Index x = 0; x < kn; ++x) {
      s += std::sqrt(static_cast<long double>(floored(z(x), tau)));
    }
    return static_cast<double>(-s);
  };
  pb.objective.derivatives = [&](const Vec& z, Vec& g, Mat& h) {
    h.setZero();
    for (Eigen::Index x = 0; x < kn; ++x) {
      const double a = floored(z(x), tau), sa = std::sqrt(a);
      g(x) = -0.5 / sa;
      h(x, x) = 0.25 / (a * sa);
    }
  };
  pb.exact_value = [&](const Vec& z) {
    long double acc = 0;
    for (Eigen::Index x = 0; x < kn; ++x) {
      acc += std::sqrt(static_cast<long double>(std::max(z(x), 0.0)));
    }
    return -acc;
  };
  // inf over p >= 0 of -sqrt(p) + a p is -1/(4a) for a > 0.
  pb.dual_value = [&](const Vec& c, long double lam_rhs) {
    const long double base = -static_cast<long double>(c.minCoeff());
    auto shift_cost = [&](long double t) {
      const long double nu = base + std::exp(t);
      long double acc = nu;
      for (Eigen::Index x = 0; x < kn; ++x) acc += 1.0L / (4.0L * (c(x) + nu));
      return acc;
    };
    return -lam_rhs - golden_min(shift_cost, -80.0L, 30.0L);
  };

  auto p0 = interior_start(r0, eps_eff);
  Vec z(kn);
  for (Eigen::Index x = 0; x < kn; ++x) z(x) = p0[static_cast<std::size_t>(x)];
  SolveResult res = solve_primal_dual(pb, z, cfg);
  std::vector<double> w(n);
  for (std::size_t x = 0; x < n; ++x) w[x] = res.z(static_cast<Eigen::Index>(x));
  return finish(ProbDist::from_reals(x0.domain(), normalized(w)),
                res.diagnostics);
}

}  // namespace indist
