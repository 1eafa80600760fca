#include "sacb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sacb/error.hpp"

namespace sacb {

namespace {

std::vector<Point> lattice(int d, int n) {
  std::vector<Point> pts;
  std::vector<int> k(d, 0);
  while (true) {
    Point p(d);
    for (int i = 0; i < d; ++i) p[i] = n == 1 ? 0.5 : static_cast<double>(k[i]) / (n - 1);
    pts.push_back(std::move(p));
    int i = d - 1;
    while (i >= 0 && ++k[i] == n) k[i--] = 0;
    if (i < 0) break;
  }
  return pts;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

PropertyReport check_holder(const ProblemInstance& inst, double beta, double lipschitz, int grid_n) {
  if (grid_n < 2) throw std::invalid_argument("check_holder: grid_n must be >= 2");
  if (!(beta > 0.0 && beta <= 2.0)) throw std::invalid_argument("check_holder: beta must lie in (0,2]");
  const int d = inst.d;
  const auto pts = lattice(d, grid_n);
  const bool smooth = beta > 1.0;
  constexpr double kStep = 1e-4;
  const double tol = smooth ? 1e-3 : 1e-12;

  PropertyReport rep;
  rep.margin_of_violation = std::numeric_limits<double>::infinity();
  for (Arm arm : {Arm::one, Arm::two}) {
    std::vector<double> val(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) val[k] = inst.payoff(arm, pts[k]);
    std::vector<double> grad;
    if (smooth) {
      grad.resize(pts.size() * d);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        for (int i = 0; i < d; ++i) {
          Point a = pts[k], b = pts[k];
          a[i] = std::max(0.0, a[i] - kStep);
          b[i] = std::min(1.0, b[i] + kStep);
          grad[k * d + i] = (inst.payoff(arm, b) - inst.payoff(arm, a)) / (b[i] - a[i]);
        }
      }
    }
    for (std::size_t a = 0; a < pts.size(); ++a) {
      for (std::size_t b = 0; b < pts.size(); ++b) {
        if (a == b) continue;
        double residual = val[b] - val[a];
        if (smooth)
          for (int i = 0; i < d; ++i) residual -= grad[a * d + i] * (pts[b][i] - pts[a][i]);
        const double slack = lipschitz * std::pow(distance(pts[a], pts[b]), beta) + tol - std::abs(residual);
        if (slack < rep.margin_of_violation) {
          rep.margin_of_violation = slack;
          rep.witness = pts[a];
          rep.witness_other = pts[b];
        }
      }
    }
  }
  rep.holds = rep.margin_of_violation >= 0.0;
  return rep;
}

PropertyReport check_margin(const ProblemInstance& inst, double alpha, double c0, int grid_n,
                            std::span<const double> deltas) {
  if (grid_n < 1) throw std::invalid_argument("check_margin: grid_n must be >= 1");
  const int d = inst.d;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(grid_n);
  const double cell = std::pow(1.0 / grid_n, d);
  std::vector<std::pair<double, double>> gap_mass;  // (gap, probability mass)
  gap_mass.reserve(total);
  std::vector<int> k(d, 0);
  Point x(d);
  for (std::size_t r = 0; r < total; ++r) {
    for (int i = 0; i < d; ++i) x[i] = (k[i] + 0.5) / grid_n;
    const double g = std::abs(inst.f1(x) - inst.f2(x));
    if (g > 0.0) gap_mass.emplace_back(g, inst.covariates.density(x) * cell);
    int i = d - 1;
    while (i >= 0 && ++k[i] == grid_n) k[i--] = 0;
  }
  std::sort(gap_mass.begin(), gap_mass.end());
  std::vector<double> cumulative(gap_mass.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < gap_mass.size(); ++j) cumulative[j] = acc += gap_mass[j].second;

  const double tol = 2.0 * d * inst.covariates.density_upper() / grid_n;
  PropertyReport rep;
  rep.margin_of_violation = std::numeric_limits<double>::infinity();
  for (double delta : deltas) {
    const auto it = std::upper_bound(gap_mass.begin(), gap_mass.end(), std::make_pair(delta, std::numeric_limits<double>::infinity()));
    const auto n = static_cast<std::size_t>(it - gap_mass.begin());
    const double p = n == 0 ? 0.0 : cumulative[n - 1];
    const double slack = c0 * std::pow(delta, alpha) + tol - p;
    if (slack < rep.margin_of_violation) {
      rep.margin_of_violation = slack;
      rep.witness = {delta};
      std::ostringstream os;
      os << "P(0<gap<=" << delta << ") = " << p << " vs bound " << c0 * std::pow(delta, alpha);
      rep.detail = os.str();
    }
  }
  rep.holds = rep.margin_of_violation >= 0.0;
  return rep;
}

PropertyReport check_self_similarity(const ProblemInstance& inst, double beta, double b, double l0, int l_max,
                                     double q, int degree, SelfSimilarityOptions opts) {
  if (!(q > 1.0)) throw Error(ErrorKind::invalid_base, "base must exceed 1");
  const int d = inst.d;
  const ScalarField density = inst.covariates.density_field();
  const int first = std::max(0, static_cast<int>(std::ceil(l0 - 1e-12)));
  PropertyReport rep;
  rep.margin_of_violation = std::numeric_limits<double>::infinity();
  std::ostringstream detail;
  for (int level = first; level <= l_max; ++level) {
    const double h = std::pow(q, -level);
    const int per_axis = static_cast<int>(std::ceil(1.0 / h - 1e-9));
    double best = 0.0;
    Point best_x;
    std::vector<int> c(d, 0);
    while (true) {
      Box bin{std::vector<double>(d), std::vector<double>(d)};
      for (int i = 0; i < d; ++i) {
        bin.lo[i] = c[i] * h;
        bin.hi[i] = std::min(1.0, (c[i] + 1) * h);
      }
      for (Arm arm : {Arm::one, Arm::two}) {
        const ScalarField f = arm == Arm::one ? inst.f1 : inst.f2;
        std::vector<int> k(d, 0);
        Point x(d);
        while (true) {
          for (int i = 0; i < d; ++i)
            x[i] = bin.lo[i] + (bin.hi[i] - bin.lo[i]) * k[i] / std::max(1, opts.points_per_bin - 1);
          const double dev = std::abs(projection_at(f, bin, degree, h, density, x, opts.quadrature) - f(x));
          if (dev > best) {
            best = dev;
            best_x = x;
          }
          int i = d - 1;
          while (i >= 0 && ++k[i] == opts.points_per_bin) k[i--] = 0;
          if (i < 0) break;
        }
      }
      int i = d - 1;
      while (i >= 0 && ++c[i] == per_axis) c[i--] = 0;
      if (i < 0) break;
    }
    const double target = b * std::pow(h, beta);
    const double slack = best - target * (1.0 - opts.relative_tolerance);
    detail << "level " << level << ": sup deviation " << best << " vs " << target << "\n";
    if (slack < rep.margin_of_violation) {
      rep.margin_of_violation = slack;
      rep.witness = best_x;
    }
  }
  rep.holds = rep.margin_of_violation >= 0.0;
  rep.detail = detail.str();
  return rep;
}

}  // namespace sacb
