#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "svyor/errors.hpp"

namespace svyor {

// Knot layout for a B-spline basis of degree m (m = 1 gives step functions,
// m = 2 piecewise linear, ...). The clamped sequence repeats each boundary
// knot m times, so the basis has dimension q = m + K where K is the number
// of interior knots.
struct KnotVector {
  std::vector<double> interior;  // strictly increasing, inside (low, high)
  double boundary_low = 0.0;
  double boundary_high = 1.0;
  int degree = 1;          // m >= 1
  int collapsed_knots = 0; // interior knots dropped because of ties

  int dimension() const noexcept {
    return degree + static_cast<int>(interior.size());
  }

  // Full clamped sequence: low repeated m times, interior, high repeated m
  // times. Length K + 2m.
  std::vector<double> clamped_sequence() const {
    std::vector<double> t;
    t.reserve(interior.size() + 2 * static_cast<std::size_t>(degree));
    t.insert(t.end(), static_cast<std::size_t>(degree), boundary_low);
    t.insert(t.end(), interior.begin(), interior.end());
    t.insert(t.end(), static_cast<std::size_t>(degree), boundary_high);
    return t;
  }
};

// Places K interior knots at the j/(K+1) quantiles of the population values,
// j = 1..K, with boundary knots at the min and max. Quantiles use the
// type-1 (order statistic at ceil(p*N)) definition so results are
// reproducible. Coincident or boundary-touching interior knots are
// collapsed, reducing K; the count of dropped knots is recorded on the
// returned KnotVector.
inline KnotVector place_knots(std::span<const double> z_population,
                              int interior_knots, int degree) {
  if (z_population.empty()) {
    throw InputError("knot placement requires a non-empty set of values");
  }
  if (interior_knots < 0) {
    throw InputError("number of interior knots must be >= 0");
  }
  if (degree < 1) {
    throw InputError("spline degree must be >= 1");
  }

  const auto [lo_it, hi_it] =
      std::minmax_element(z_population.begin(), z_population.end());
  KnotVector kv;
  kv.boundary_low = *lo_it;
  kv.boundary_high = *hi_it;
  kv.degree = degree;

  if (interior_knots == 0) return kv;

  if (kv.boundary_low == kv.boundary_high) {
    throw DegenerateAuxiliary(
        "auxiliary variable is constant; interior knots cannot be placed");
  }

  std::vector<double> sorted(z_population.begin(), z_population.end());
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());

  kv.interior.reserve(static_cast<std::size_t>(interior_knots));
  for (int j = 1; j <= interior_knots; ++j) {
    const double p = static_cast<double>(j) / (interior_knots + 1);
    auto idx = static_cast<std::size_t>(std::ceil(p * count));
    idx = std::clamp<std::size_t>(idx, 1, sorted.size());
    const double knot = sorted[idx - 1];
    const bool inside = knot > kv.boundary_low && knot < kv.boundary_high;
    const bool new_value = kv.interior.empty() || knot > kv.interior.back();
    if (inside && new_value) {
      kv.interior.push_back(knot);
    } else {
      ++kv.collapsed_knots;
    }
  }
  return kv;
}

// B-spline basis functions B_1..B_q evaluated by the Cox-de Boor triangular
// recurrence on the clamped knot sequence. Values are nonnegative, sum to
// one, and at most m consecutive entries are nonzero at any point. Interval
// membership is half-open [t_j, t_{j+1}) with the last interval closed, so
// degree 1 yields exact post-stratification indicators.
class BSplineBasis {
 public:
  explicit BSplineBasis(KnotVector knots) : knots_(std::move(knots)) {
    if (knots_.degree < 1) {
      throw InputError("spline degree must be >= 1");
    }
    if (!std::is_sorted(knots_.interior.begin(), knots_.interior.end())) {
      throw InputError("interior knots must be non-decreasing");
    }
    for (double k : knots_.interior) {
      if (!(k > knots_.boundary_low && k < knots_.boundary_high)) {
        throw InputError("interior knots must lie strictly between the "
                         "boundary knots");
      }
    }
    if (knots_.boundary_low > knots_.boundary_high) {
      throw InputError("boundary knots out of order");
    }
    degenerate_point_ = knots_.boundary_low == knots_.boundary_high;
    if (degenerate_point_ && !(knots_.degree == 1 && knots_.interior.empty())) {
      throw DegenerateAuxiliary(
          "boundary knots coincide; only the constant basis (degree 1, no "
          "interior knots) is defined on a single point");
    }
    t_ = knots_.clamped_sequence();
  }

  int dimension() const noexcept { return knots_.dimension(); }
  int degree() const noexcept { return knots_.degree; }
  const KnotVector& knots() const noexcept { return knots_; }

  // Length-q basis vector at z; z is clamped into the knot range.
  Eigen::VectorXd evaluate(double z) const {
    const int q = dimension();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(q);
    if (degenerate_point_) {
      out(0) = 1.0;
      return out;
    }
    z = std::clamp(z, knots_.boundary_low, knots_.boundary_high);

    const int m = knots_.degree;
    const int span = find_span(z);

    // Triangular recurrence over the m basis functions alive on this span.
    std::vector<double> values(static_cast<std::size_t>(m), 0.0);
    std::vector<double> left(static_cast<std::size_t>(m), 0.0);
    std::vector<double> right(static_cast<std::size_t>(m), 0.0);
    values[0] = 1.0;
    for (int j = 1; j < m; ++j) {
      left[static_cast<std::size_t>(j)] = z - t_[static_cast<std::size_t>(span + 1 - j)];
      right[static_cast<std::size_t>(j)] = t_[static_cast<std::size_t>(span + j)] - z;
      double saved = 0.0;
      for (int r = 0; r < j; ++r) {
        const double denom = right[static_cast<std::size_t>(r + 1)] +
                             left[static_cast<std::size_t>(j - r)];
        const double tmp = values[static_cast<std::size_t>(r)] / denom;
        values[static_cast<std::size_t>(r)] =
            saved + right[static_cast<std::size_t>(r + 1)] * tmp;
        saved = left[static_cast<std::size_t>(j - r)] * tmp;
      }
      values[static_cast<std::size_t>(j)] = saved;
    }

    const int first = span - m + 1;
    for (int r = 0; r < m; ++r) {
      out(first + r) = values[static_cast<std::size_t>(r)];
    }
    return out;
  }

  // Row i is evaluate(z_i); shape |z| x q.
  Eigen::MatrixXd matrix(std::span<const double> z) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(z.size()), dimension());
    for (std::size_t i = 0; i < z.size(); ++i) {
      out.row(static_cast<Eigen::Index>(i)) = evaluate(z[i]).transpose();
    }
    return out;
  }

 private:
  // Largest span index i in [m-1, m+K-1] with t_i <= z < t_{i+1}; the final
  // span also absorbs z == boundary_high.
  int find_span(double z) const {
    const int m = knots_.degree;
    const int last = m + static_cast<int>(knots_.interior.size()) - 1;
    if (z >= knots_.boundary_high) return last;
    const auto it = std::upper_bound(knots_.interior.begin(),
                                     knots_.interior.end(), z);
    return m - 1 +
           static_cast<int>(std::distance(knots_.interior.begin(), it));
  }

  KnotVector knots_;
  std::vector<double> t_;
  bool degenerate_point_ = false;
};

// Population basis totals t_b = sum_U b(z_i): the calibration targets.
inline Eigen::VectorXd basis_totals(const BSplineBasis& basis,
                                    std::span<const double> z_population) {
  Eigen::VectorXd totals = Eigen::VectorXd::Zero(basis.dimension());
  for (double z : z_population) totals += basis.evaluate(z);
  return totals;
}

}  // namespace svyor
