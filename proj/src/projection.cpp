#include "sacb/projection.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sacb/error.hpp"
#include "sacb/local_poly.hpp"
#include "sacb/multi_index.hpp"

namespace sacb {

namespace {

struct Window {
  std::vector<double> lo;  // in u coordinates
  std::vector<double> hi;
};

Window window_in_bin(const Box& bin, double h, std::span<const double> x) {
  const int d = bin.dim();
  Window w{std::vector<double>(d), std::vector<double>(d)};
  for (int i = 0; i < d; ++i) {
    w.lo[i] = std::max(-1.0, (bin.lo[i] - x[i]) / h);
    w.hi[i] = std::min(1.0, (bin.hi[i] - x[i]) / h);
    if (w.hi[i] < w.lo[i]) w.hi[i] = w.lo[i];
  }
  return w;
}

// Visits the tensor midpoint nodes of the window, passing u and the cell volume.
template <typename Visit>
void for_each_node(const Window& w, int n, Visit&& visit) {
  const int d = static_cast<int>(w.lo.size());
  std::vector<double> step(d);
  double cell = 1.0;
  for (int i = 0; i < d; ++i) {
    step[i] = (w.hi[i] - w.lo[i]) / n;
    cell *= step[i];
  }
  if (cell <= 0.0) return;
  std::vector<int> k(d, 0);
  std::vector<double> u(d);
  while (true) {
    for (int i = 0; i < d; ++i) u[i] = w.lo[i] + (k[i] + 0.5) * step[i];
    visit(std::span<const double>(u), cell);
    int i = d - 1;
    while (i >= 0 && ++k[i] == n) k[i--] = 0;
    if (i < 0) break;
  }
}

struct Moments {
  Eigen::MatrixXd gram;
  Eigen::VectorXd rhs;
};

Moments moments(const ScalarField* f, const Box& bin, int degree, double h, const ScalarField& density,
                std::span<const double> x, int nodes) {
  const int d = bin.dim();
  const auto idx = enumerate_multi_indices(d, degree);
  const auto m = static_cast<Eigen::Index>(idx.size());
  Moments out{Eigen::MatrixXd::Zero(m, m), Eigen::VectorXd::Zero(m)};
  Eigen::VectorXd phi(m);
  std::vector<double> y(d);
  for_each_node(window_in_bin(bin, h, x), nodes, [&](std::span<const double> u, double cell) {
    for (int i = 0; i < d; ++i) y[i] = x[i] + h * u[i];
    const double w = density(y) * cell;
    if (w == 0.0) return;
    for (Eigen::Index a = 0; a < m; ++a) phi[a] = monomial(u, idx[a]);
    out.gram.selfadjointView<Eigen::Lower>().rankUpdate(phi, w);
    if (f) out.rhs += (w * (*f)(y)) * phi;
  });
  out.gram = out.gram.selfadjointView<Eigen::Lower>();
  return out;
}

Eigen::LLT<Eigen::MatrixXd> factor_checked(const Eigen::MatrixXd& gram) {
  const double scale = gram.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw Error(ErrorKind::ill_conditioned, "empty integration window");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= kDegeneracyTolerance * scale)
    throw Error(ErrorKind::ill_conditioned, "moment matrix is singular to working tolerance");
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::ill_conditioned, "Cholesky factorization failed");
  return llt;
}

void check_args(const Box& bin, int degree, double h) {
  if (bin.dim() < 1) throw std::invalid_argument("projection: empty bin");
  if (degree < 0) throw std::invalid_argument("projection: negative degree");
  if (!(h > 0.0)) throw std::invalid_argument("projection: bandwidth must be positive");
}

std::vector<Point> probe_points(const Box& bin, int per_axis) {
  const int d = bin.dim();
  std::vector<Point> out;
  std::vector<int> k(d, 0);
  while (true) {
    Point p(d);
    for (int i = 0; i < d; ++i)
      p[i] = per_axis == 1 ? 0.5 * (bin.lo[i] + bin.hi[i])
                           : bin.lo[i] + (bin.hi[i] - bin.lo[i]) * k[i] / (per_axis - 1);
    out.push_back(std::move(p));
    int i = d - 1;
    while (i >= 0 && ++k[i] == per_axis) k[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace

double projection_at(const ScalarField& f, const Box& bin, int degree, double h, const ScalarField& density,
                     std::span<const double> x, QuadratureOptions opts) {
  check_args(bin, degree, h);
  const Moments mo = moments(&f, bin, degree, h, density, x, opts.nodes_per_axis);
  return factor_checked(mo.gram).solve(mo.rhs)[0];
}

ScalarField project_to_polynomial(ScalarField f, Box bin, int degree, double h, ScalarField density,
                                  QuadratureOptions opts) {
  check_args(bin, degree, h);
  // Corners carry the smallest windows, so they are where conditioning fails first.
  for (const auto& p : probe_points(bin, 2)) {
    const Moments mo = moments(nullptr, bin, degree, h, density, p, opts.nodes_per_axis);
    factor_checked(mo.gram);
  }
  return [f = std::move(f), bin = std::move(bin), degree, h, density = std::move(density), opts](
             std::span<const double> x) {
    if (!bin.contains(x)) throw Error(ErrorKind::out_of_domain, "point outside the projection bin");
    return projection_at(f, bin, degree, h, density, x, opts);
  };
}

ScalarField brute_force_projection(ScalarField f, Box bin, int degree, double h, ScalarField density, int grid_n) {
  check_args(bin, degree, h);
  const int d = bin.dim();
  const auto idx = enumerate_multi_indices(d, degree);
  if (grid_n < 1 || static_cast<std::size_t>(grid_n) < static_cast<std::size_t>(degree) + 1)
    throw Error(ErrorKind::insufficient_grid, "grid too coarse for the requested degree");
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(grid_n);

  std::vector<double> grid(total * d);
  std::vector<double> fv(total), pv(total);
  {
    std::vector<int> k(d, 0);
    std::vector<double> y(d);
    for (std::size_t r = 0; r < total; ++r) {
      for (int i = 0; i < d; ++i) y[i] = bin.lo[i] + (bin.hi[i] - bin.lo[i]) * (k[i] + 0.5) / grid_n;
      std::copy(y.begin(), y.end(), grid.begin() + r * d);
      fv[r] = f(y);
      pv[r] = density(y);
      int i = d - 1;
      while (i >= 0 && ++k[i] == grid_n) k[i--] = 0;
    }
  }
  return [grid = std::move(grid), fv = std::move(fv), pv = std::move(pv), idx, d, h, total](
             std::span<const double> x) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < total; ++r) {
      bool inside = pv[r] > 0.0;
      for (int i = 0; i < d && inside; ++i) inside = std::abs(grid[r * d + i] - x[i]) <= h;
      if (inside) rows.push_back(r);
    }
    const auto m = static_cast<Eigen::Index>(idx.size());
    if (rows.size() < idx.size()) throw Error(ErrorKind::insufficient_grid, "too few grid points in window");
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), m);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    std::vector<double> u(d);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const std::size_t r = rows[k];
      const double sw = std::sqrt(pv[r]);
      for (int i = 0; i < d; ++i) u[i] = (grid[r * d + i] - x[i]) / h;
      for (Eigen::Index c = 0; c < m; ++c) a(static_cast<Eigen::Index>(k), c) = sw * monomial(u, idx[c]);
      b[static_cast<Eigen::Index>(k)] = sw * fv[r];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < m) throw Error(ErrorKind::insufficient_grid, "grid points do not determine the fit");
    return Eigen::VectorXd(qr.solve(b))[0];
  };
}

double projection_bias_constant(const Box& bin, int degree, double h, const ScalarField& density, double beta,
                                double lipschitz, QuadratureOptions opts, int probe_per_axis) {
  check_args(bin, degree, h);
  const int d = bin.dim();
  const auto idx = enumerate_multi_indices(d, degree);
  const auto m = static_cast<Eigen::Index>(idx.size());
  double worst = 0.0;
  std::vector<double> y(d);
  Eigen::VectorXd phi(m);
  for (const auto& x : probe_points(bin, probe_per_axis)) {
    const Moments mo = moments(nullptr, bin, degree, h, density, x, opts.nodes_per_axis);
    const Eigen::VectorXd row = factor_checked(mo.gram).solve(Eigen::VectorXd::Unit(m, 0));
    double lebesgue = 0.0;
    for_each_node(window_in_bin(bin, h, x), opts.nodes_per_axis, [&](std::span<const double> u, double cell) {
      for (int i = 0; i < d; ++i) y[i] = x[i] + h * u[i];
      const double w = density(y) * cell;
      if (w == 0.0) return;
      for (Eigen::Index a = 0; a < m; ++a) phi[a] = monomial(u, idx[a]);
      double norm2 = 0.0;
      for (double ui : u) norm2 += ui * ui;
      lebesgue += w * std::abs(row.dot(phi)) * std::pow(norm2, 0.5 * beta);
    });
    worst = std::max(worst, lebesgue);
  }
  return lipschitz * worst;
}

}  // namespace sacb
