#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sacb/multi_index.hpp"
#include "sacb/types.hpp"

namespace sacb {

struct Sample {
  Point x;
  double y = 0.0;
};

// Local polynomial fit around a center. Coefficients are kept in the scaled
// variable u = (x - center) / h.
class PolynomialEstimate {
 public:
  PolynomialEstimate() = default;
  PolynomialEstimate(Point center, double h, int degree, std::vector<double> scaled_coeffs, bool degenerate,
                     std::size_t support);

  bool degenerate() const { return degenerate_; }
  double value() const;
  double operator()(std::span<const double> x) const;
  // Coefficient of (x - center)^s.
  double coefficient(const MultiIndex& s) const;

  int degree() const { return degree_; }
  double bandwidth() const { return h_; }
  const Point& center() const { return center_; }
  std::size_t support() const { return support_; }

 private:
  Point center_;
  double h_ = 1.0;
  int degree_ = 0;
  std::vector<double> coeffs_;
  bool degenerate_ = true;
  std::size_t support_ = 0;
};

inline constexpr double kDegeneracyTolerance = 1e-10;

// Holds samples in a canonical order so repeated fits are cheap and
// independent of insertion order.
class LocalFitter {
 public:
  // xs is row-major with d entries per sample.
  LocalFitter(int d, std::span<const double> xs, std::span<const double> ys);
  explicit LocalFitter(std::span<const Sample> data);

  int dim() const { return d_; }
  std::size_t size() const { return ys_.size(); }

  PolynomialEstimate fit(std::span<const double> center, double h, int degree) const;
  // Value at the center; 0 for a degenerate fit.
  double value(std::span<const double> center, double h, int degree) const;

 private:
  void canonicalize(std::span<const double> xs, std::span<const double> ys);
  std::pair<std::size_t, std::size_t> candidates(double c0, double h) const;

  int d_ = 1;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

PolynomialEstimate fit_local_polynomial(std::span<const Sample> data, std::span<const double> center, double h,
                                        int degree);

}  // namespace sacb
