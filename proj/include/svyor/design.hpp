#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "svyor/errors.hpp"

namespace svyor {

// A sampling design reports first- and second-order inclusion probabilities.
// Estimators address units by position in the vector they are given (sample
// position for the estimate-stage functions, population position for the
// population-level ones); designs with unequal probabilities would key these
// off stored unit labels. Only SRSWOR ships as a concrete design.
template <typename D>
concept SamplingDesign = requires(const D& d, std::size_t i, std::size_t j) {
  { d.population_size() } -> std::convertible_to<std::size_t>;
  { d.sample_size() } -> std::convertible_to<std::size_t>;
  { d.first_order(i) } -> std::convertible_to<double>;
  { d.joint(i, j) } -> std::convertible_to<double>;
};

// Simple random sampling without replacement:
//   pi_i  = n/N,
//   pi_ij = n(n-1) / (N(N-1))   for i != j, and pi_ii = pi_i.
class Srswor {
 public:
  Srswor(std::size_t population_size, std::size_t sample_size)
      : N_(population_size), n_(sample_size) {
    if (N_ == 0 || n_ == 0 || n_ > N_) {
      throw InputError("SRSWOR design requires 1 <= n <= N (got n=" +
                       std::to_string(n_) + ", N=" + std::to_string(N_) + ")");
    }
    pi_ = static_cast<double>(n_) / static_cast<double>(N_);
    pi_joint_ = (N_ == 1) ? pi_
                          : pi_ * static_cast<double>(n_ - 1) /
                                static_cast<double>(N_ - 1);
  }

  std::size_t population_size() const noexcept { return N_; }
  std::size_t sample_size() const noexcept { return n_; }
  double first_order(std::size_t /*i*/ = 0) const noexcept { return pi_; }
  double joint(std::size_t i, std::size_t j) const noexcept {
    return i == j ? pi_ : pi_joint_;
  }
  double sampling_fraction() const noexcept { return pi_; }

 private:
  std::size_t N_;
  std::size_t n_;
  double pi_;
  double pi_joint_;
};

// Distinct 0-based unit labels, ascending.
using SampleIndex = std::vector<std::size_t>;

// Draws a uniformly distributed size-n subset of {0..N-1}. Deterministic for
// a given seed on a given platform.
inline SampleIndex draw(const Srswor& design, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> all(design.population_size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  SampleIndex out;
  out.reserve(design.sample_size());
  std::sample(all.begin(), all.end(), std::back_inserter(out),
              design.sample_size(), rng);
  return out;
}

// Horvitz-Thompson total: sum_{i in s} v_i / pi_i.
template <SamplingDesign D>
double ht_total(std::span<const double> values, const D& design) {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    total += values[i] / design.first_order(i);
  }
  return total;
}

// Row-wise HT total of a matrix whose rows are per-unit vectors.
template <SamplingDesign D>
Eigen::VectorXd ht_total(const Eigen::MatrixXd& values, const D& design) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(values.cols());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    total += values.row(i).transpose() /
             design.first_order(static_cast<std::size_t>(i));
  }
  return total;
}

namespace detail {

inline void require_sample_for_variance(std::size_t n) {
  if (n < 2) {
    throw DesignTooSmall(
        "variance estimation requires a sample of at least 2 units (got " +
        std::to_string(n) + ")");
  }
}

}  // namespace detail

// Matrix-valued HT variance estimator of the vector total sum_s v_i / pi_i,
// computed in the Sen-Yates-Grundy rearrangement (valid for fixed-size
// designs, nonnegative-definite by construction):
//   (1/2) sum_i sum_j (pi_i pi_j - pi_ij)/pi_ij (a_i - a_j)(a_i - a_j)',
// with a_i = v_i / pi_i.
template <SamplingDesign D>
Eigen::MatrixXd ht_variance_estimate_matrix(const Eigen::MatrixXd& values,
                                            const D& design) {
  const std::size_t n = static_cast<std::size_t>(values.rows());
  detail::require_sample_for_variance(n);
  const Eigen::Index k = values.cols();

  Eigen::MatrixXd expanded(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    expanded.row(i) = values.row(static_cast<Eigen::Index>(i)) /
                      design.first_order(i);
  }

  Eigen::MatrixXd var = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double pij = design.joint(i, j);
      if (pij <= 0.0) {
        throw DesignTooSmall("joint inclusion probability is zero; "
                             "the HT variance estimator is undefined");
      }
      const double c =
          (design.first_order(i) * design.first_order(j) - pij) / pij;
      const Eigen::RowVectorXd diff = expanded.row(i) - expanded.row(j);
      var.noalias() += c * diff.transpose() * diff;
    }
  }
  return var;
}

template <SamplingDesign D>
double ht_variance_estimate(std::span<const double> values, const D& design) {
  Eigen::MatrixXd m(values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = values[i];
  return ht_variance_estimate_matrix(m, design)(0, 0);
}

// Raw Horvitz-Thompson double sum, retained as a cross-check on the SYG
// rearrangement (the two coincide for SRSWOR):
//   sum_i sum_j (pi_ij - pi_i pi_j)/pi_ij (v_i/pi_i)(v_j/pi_j).
template <SamplingDesign D>
double ht_variance_estimate_raw(std::span<const double> values,
                                const D& design) {
  const std::size_t n = values.size();
  detail::require_sample_for_variance(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = values[i] / design.first_order(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double pij = design.joint(i, j);
      const double c = (pij - design.first_order(i) * design.first_order(j)) / pij;
      var += c * ai * (values[j] / design.first_order(j));
    }
  }
  return var;
}

// Design variance of the HT total computed over the full population:
//   sum_U sum_U (pi_ij - pi_i pi_j)(v_i/pi_i)(v_j/pi_j),
// evaluated in the SYG rearrangement (exact for fixed-size designs).
// For SRSWOR this equals N^2 (1 - f) S^2 / n with S^2 the population
// variance.
template <SamplingDesign D>
double ht_variance_population(std::span<const double> values, const D& design) {
  const std::size_t N = values.size();
  if (N == 0) return 0.0;
  std::vector<double> a(N);
  for (std::size_t i = 0; i < N; ++i) a[i] = values[i] / design.first_order(i);

  double var = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      const double c = design.first_order(i) * design.first_order(j) -
                       design.joint(i, j);
      const double diff = a[i] - a[j];
      var += c * diff * diff;
    }
  }
  return var;
}

// Matrix version of the population design variance, for vector totals.
template <SamplingDesign D>
Eigen::MatrixXd ht_variance_population_matrix(const Eigen::MatrixXd& values,
                                              const D& design) {
  const std::size_t N = static_cast<std::size_t>(values.rows());
  const Eigen::Index k = values.cols();
  Eigen::MatrixXd expanded(N, k);
  for (std::size_t i = 0; i < N; ++i) {
    expanded.row(i) = values.row(static_cast<Eigen::Index>(i)) /
                      design.first_order(i);
  }
  Eigen::MatrixXd var = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      const double c = design.first_order(i) * design.first_order(j) -
                       design.joint(i, j);
      const Eigen::RowVectorXd diff = expanded.row(i) - expanded.row(j);
      var.noalias() += c * diff.transpose() * diff;
    }
  }
  return var;
}

}  // namespace svyor
