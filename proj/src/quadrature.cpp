#include "agmmh/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "agmmh/kernels.hpp"

namespace agmmh {

namespace {

constexpr std::size_t kMaxRefinements = 4;

struct Accum {
  double s0 = 0.0;
  double s1[2] = {0.0, 0.0};
  double s2[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

Vector grid_nodes(double lo, double hi, std::size_t n) {
  Vector x(n + 1);
  const double h = (hi - lo) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) x[i] = lo + h * static_cast<double>(i);
  x[n] = hi;
  return x;
}

Vector trapezoid_weights(double lo, double hi, std::size_t n) {
  const double h = (hi - lo) / static_cast<double>(n);
  Vector w(n + 1, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

QuadratureResult compute(const TargetModel& target, const Box& box,
                         std::size_t n) {
  const std::size_t d = target.dim;
  const Vector xs = grid_nodes(box.lo[0], box.hi[0], n);
  const Vector wx = trapezoid_weights(box.lo[0], box.hi[0], n);
  const std::size_t cols = xs.size();

  const std::size_t rows = (d == 2) ? cols : 1;
  const Vector ys = (d == 2) ? grid_nodes(box.lo[1], box.hi[1], n) : Vector{0.0};
  const Vector wy = (d == 2) ? trapezoid_weights(box.lo[1], box.hi[1], n) : Vector{1.0};

  // Pass 1: log-densities over the whole grid (row-major), global max shift.
  std::vector<double> logp(rows * cols);
  Vector point(d);
  for (std::size_t r = 0; r < rows; ++r) {
    if (d == 2) point[1] = ys[r];
    for (std::size_t c = 0; c < cols; ++c) {
      point[0] = xs[c];
      logp[r * cols + c] = target.log_density_at(point);
    }
  }
  const double shift = kernels::max(logp);
  if (!std::isfinite(shift))
    throw std::runtime_error("quadrature_moments: density vanishes on the whole box");

  // wxx[i] = wx[i] * xs[i], for first/second x-moment rows.
  Vector wxx(cols);
  kernels::mul(wx, xs, wxx);

  Accum acc;
  std::vector<double> prow(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* lrow = logp.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) prow[c] = std::exp(lrow[c] - shift);

    const double s0 = kernels::dot(wx, prow);
    const double s1x = kernels::dot(wxx, prow);
    const double s2xx = kernels::dot3(wxx, prow, xs);

    const double wr = wy[r];
    acc.s0 += wr * s0;
    acc.s1[0] += wr * s1x;
    acc.s2[0][0] += wr * s2xx;
    if (d == 2) {
      const double y = ys[r];
      acc.s1[1] += wr * y * s0;
      acc.s2[0][1] += wr * y * s1x;
      acc.s2[1][1] += wr * y * y * s0;
    }
  }
  if (d == 2) acc.s2[1][0] = acc.s2[0][1];

  if (!(acc.s0 > 0.0))
    throw std::runtime_error("quadrature_moments: zero total mass on the box");

  QuadratureResult res;
  res.z = std::exp(shift + std::log(acc.s0));
  res.mean.assign(d, 0.0);
  res.cov = Matrix(d, d);
  for (std::size_t k = 0; k < d; ++k) res.mean[k] = acc.s1[k] / acc.s0;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      res.cov(k, l) = acc.s2[k][l] / acc.s0 - res.mean[k] * res.mean[l];
  res.intervals = n;
  return res;
}

double max_change(const QuadratureResult& a, const QuadratureResult& b) {
  double delta = std::fabs(a.z - b.z);
  for (std::size_t k = 0; k < a.mean.size(); ++k)
    delta = std::max(delta, std::fabs(a.mean[k] - b.mean[k]));
  for (std::size_t i = 0; i < a.cov.data().size(); ++i)
    delta = std::max(delta, std::fabs(a.cov.data()[i] - b.cov.data()[i]));
  return delta;
}

}  // namespace

QuadratureResult quadrature_moments(const TargetModel& target, const Box& box,
                                    std::size_t intervals, double tol) {
  box.validate();
  if (box.dim() != target.dim)
    throw std::invalid_argument("quadrature_moments: box/target dimension mismatch");
  if (target.dim < 1 || target.dim > 2)
    throw std::invalid_argument("quadrature_moments: only 1-D and 2-D targets supported");
  if (intervals < 2) throw std::invalid_argument("quadrature_moments: need at least 2 intervals");
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature_moments: tol must be positive");

  QuadratureResult prev = compute(target, box, intervals);
  std::size_t n = intervals;
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t refinement = 0; refinement < kMaxRefinements; ++refinement) {
    n *= 2;
    const std::size_t nodes = (target.dim == 2) ? (n + 1) * (n + 1) : n + 1;
    if (nodes > (std::size_t{1} << 24))
      throw std::runtime_error(
          "quadrature_moments: no convergence before the refinement grid became "
          "too large; start from a finer initial grid or widen the tolerance");
    QuadratureResult next = compute(target, box, n);
    delta = max_change(next, prev);
    if (delta < tol) return next;
    prev = next;
  }
  char msg[160];
  std::snprintf(msg, sizeof msg,
                "quadrature_moments: no convergence after %zu refinements "
                "(last grid %zu, residual change %.3e, tol %.3e)",
                kMaxRefinements, n, delta, tol);
  throw std::runtime_error(msg);
}

}  // namespace agmmh
