#include "sacb/local_poly.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sacb {

PolynomialEstimate::PolynomialEstimate(Point center, double h, int degree, std::vector<double> scaled_coeffs,
                                       bool degenerate, std::size_t support)
    : center_(std::move(center)),
      h_(h),
      degree_(degree),
      coeffs_(std::move(scaled_coeffs)),
      degenerate_(degenerate),
      support_(support) {}

double PolynomialEstimate::value() const { return degenerate_ ? 0.0 : coeffs_.front(); }

double PolynomialEstimate::operator()(std::span<const double> x) const {
  if (degenerate_) return 0.0;
  const int d = static_cast<int>(center_.size());
  std::vector<double> u(d);
  for (int i = 0; i < d; ++i) u[i] = (x[i] - center_[i]) / h_;
  const auto idx = enumerate_multi_indices(d, degree_);
  double v = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) v += coeffs_[k] * monomial(u, idx[k]);
  return v;
}

double PolynomialEstimate::coefficient(const MultiIndex& s) const {
  if (degenerate_) return 0.0;
  const auto idx = enumerate_multi_indices(static_cast<int>(center_.size()), degree_);
  const auto it = std::find(idx.begin(), idx.end(), s);
  if (it == idx.end()) return 0.0;
  int order = 0;
  for (int k : s) order += k;
  return coeffs_[static_cast<std::size_t>(it - idx.begin())] / std::pow(h_, order);
}

LocalFitter::LocalFitter(int d, std::span<const double> xs, std::span<const double> ys) : d_(d) {
  if (d < 1 || xs.size() != ys.size() * static_cast<std::size_t>(d))
    throw std::invalid_argument("LocalFitter: shape mismatch");
  canonicalize(xs, ys);
}

LocalFitter::LocalFitter(std::span<const Sample> data) {
  d_ = data.empty() ? 1 : static_cast<int>(data.front().x.size());
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(data.size() * d_);
  ys.reserve(data.size());
  for (const auto& s : data) {
    if (static_cast<int>(s.x.size()) != d_) throw std::invalid_argument("LocalFitter: mixed dimensions");
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.push_back(s.y);
  }
  canonicalize(xs, ys);
}

void LocalFitter::canonicalize(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = ys.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (int i = 0; i < d_; ++i) {
      const double xa = xs[a * d_ + i];
      const double xb = xs[b * d_ + i];
      if (xa != xb) return xa < xb;
    }
    return ys[a] < ys[b];
  });
  xs_.resize(n * d_);
  ys_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::copy_n(xs.begin() + order[k] * d_, d_, xs_.begin() + k * d_);
    ys_[k] = ys[order[k]];
  }
}

std::pair<std::size_t, std::size_t> LocalFitter::candidates(double c0, double h) const {
  const std::size_t n = ys_.size();
  // first index with x0 >= c0 - h, tested the same way as the window check
  std::size_t a = 0, b = n;
  while (a < b) {
    const std::size_t m = (a + b) / 2;
    const double x0 = xs_[m * d_];
    if (x0 < c0 && std::abs(x0 - c0) > h) a = m + 1;
    else b = m;
  }
  const std::size_t lo = a;
  b = n;
  while (a < b) {
    const std::size_t m = (a + b) / 2;
    const double x0 = xs_[m * d_];
    if (x0 <= c0 || std::abs(x0 - c0) <= h) a = m + 1;
    else b = m;
  }
  return {lo, a};
}

PolynomialEstimate LocalFitter::fit(std::span<const double> center, double h, int degree) const {
  if (static_cast<int>(center.size()) != d_) throw std::invalid_argument("fit: center dimension mismatch");
  if (!(h > 0.0)) throw std::invalid_argument("fit: bandwidth must be positive");
  if (degree < 0) throw std::invalid_argument("fit: negative degree");
  Point c(center.begin(), center.end());
  const auto [lo, hi] = candidates(center[0], h);

  auto in_window = [&](std::size_t k) {
    for (int i = 0; i < d_; ++i)
      if (std::abs(xs_[k * d_ + i] - center[i]) > h) return false;
    return true;
  };

  if (degree == 0) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = lo; k < hi; ++k) {
      if (!in_window(k)) continue;
      sum += ys_[k];
      ++count;
    }
    if (count == 0) return PolynomialEstimate(std::move(c), h, 0, {0.0}, true, 0);
    return PolynomialEstimate(std::move(c), h, 0, {sum / static_cast<double>(count)}, false, count);
  }

  const auto idx = enumerate_multi_indices(d_, degree);
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd phi(m);
  std::vector<double> u(d_);
  std::size_t count = 0;
  for (std::size_t k = lo; k < hi; ++k) {
    if (!in_window(k)) continue;
    for (int i = 0; i < d_; ++i) u[i] = (xs_[k * d_ + i] - center[i]) / h;
    for (Eigen::Index a = 0; a < m; ++a) phi[a] = monomial(u, idx[a]);
    q.selfadjointView<Eigen::Lower>().rankUpdate(phi);
    v += ys_[k] * phi;
    ++count;
  }
  q = q.selfadjointView<Eigen::Lower>();
  std::vector<double> zero(static_cast<std::size_t>(m), 0.0);
  const double scale = q.cwiseAbs().maxCoeff();
  if (count == 0 || scale == 0.0) return PolynomialEstimate(std::move(c), h, degree, zero, true, count);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= kDegeneracyTolerance * scale)
    return PolynomialEstimate(std::move(c), h, degree, zero, true, count);
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  if (llt.info() != Eigen::Success) return PolynomialEstimate(std::move(c), h, degree, zero, true, count);
  const Eigen::VectorXd xi = llt.solve(v);
  return PolynomialEstimate(std::move(c), h, degree, std::vector<double>(xi.data(), xi.data() + m), false, count);
}

double LocalFitter::value(std::span<const double> center, double h, int degree) const {
  return fit(center, h, degree).value();
}

PolynomialEstimate fit_local_polynomial(std::span<const Sample> data, std::span<const double> center, double h,
                                        int degree) {
  return LocalFitter(data).fit(center, h, degree);
}

}  // namespace sacb
