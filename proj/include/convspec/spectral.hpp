#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "convspec/group.hpp"
#include "convspec/measure.hpp"

namespace convspec {

inline constexpr std::size_t kDefaultDenseCap = 4000;
inline constexpr double kDefaultClusterTol = 1e-6;

// Compression of the left-convolution operator f -> mu * f to the ball of
// the given radius generated by the symmetrized support of mu. Entry (i, j)
// is mu(x_i x_j^{-1}); the matrix is exactly Hermitian because the source
// coefficients are rational and mu is self-adjoint. Stored sparsely: each
// support element s of mu links column j to row index(s x_j).
class TruncatedOperator {
  public:
    TruncatedOperator(Measure mu, int radius, std::vector<GroupElement> ball,
                      std::vector<std::vector<std::pair<int, std::complex<double>>>> columns,
                      bool real_entries);

    const Measure& mu() const { return mu_; }
    int radius() const { return radius_; }
    const std::vector<GroupElement>& ball() const { return ball_; }
    std::size_t size() const { return ball_.size(); }
    bool real_entries() const { return real_entries_; }

    // y = M x through the sparse column lists.
    std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& x) const;

    Eigen::MatrixXcd dense(std::size_t dense_cap = kDefaultDenseCap) const;
    Eigen::MatrixXd dense_real(std::size_t dense_cap = kDefaultDenseCap) const;

  private:
    Measure mu_;
    int radius_ = 0;
    std::vector<GroupElement> ball_;
    std::vector<std::vector<std::pair<int, std::complex<double>>>> columns_;
    bool real_entries_ = true;
};

// Requires mu self-adjoint and radius >= 1; the ball cap bounds the
// compression size.
TruncatedOperator build_truncation(const Measure& mu, int radius,
                                   std::size_t ball_cap = kDefaultBallCap);

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    std::vector<double> weights;      // |<delta_e, v_j>|^2, aligned with eigenvalues
};

// Dense Hermitian eigensolve; weights are the squared overlaps of the
// normalized eigenvectors with the delta function at the identity (ball
// index 0), so they sum to 1.
EigenDecomposition eigendecompose(const TruncatedOperator& op,
                                  std::size_t dense_cap = kDefaultDenseCap);

struct MomentRow {
    int n = 0;
    double exact_value = 0.0;
    double matrix_value = 0.0;
    double abs_diff = 0.0;
    double rel_diff = 0.0;  // abs_diff / max(1, |exact|)
};

// Compares <delta_e, M^n delta_e> with the exact convolution-power value at
// the identity for n = 0..nmax. Exact agreement is expected while n stays
// within the radius, because paths of length n from the identity do not
// reach the truncation boundary. Requires nmax <= radius.
std::vector<MomentRow> moment_crosscheck(const TruncatedOperator& op, int nmax,
                                         std::size_t support_cap = kDefaultSupportCap);

struct RadiusSlice {
    int radius = 0;
    std::size_t ball_size = 0;
    EigenDecomposition eigen;
};

struct PointMassCluster {
    double location = 0.0;                  // weight-averaged eigenvalue position
    std::vector<double> weight_per_radius;  // max member weight per radius, 0 if absent
    bool present_in_all = false;
    bool decreasing = false;
};

struct PointMassEstimate {
    std::vector<int> radii;
    std::vector<PointMassCluster> clusters;
    std::vector<double> max_weight_per_radius;
    bool max_weight_decreasing = false;
    // Heuristic verdict; never a proof of spectral type.
    std::string label;
};

// Clusters eigenvalues across at least three radii (single linkage at the
// given tolerance) and tracks how much delta_e weight each cluster carries
// as the radius grows.
PointMassEstimate point_mass_estimate(const std::vector<RadiusSlice>& slices,
                                      double cluster_tol = kDefaultClusterTol);

// Total delta_e weight on eigenvalues with |lambda| < tol. Requires tol > 0.
double kernel_weight(const EigenDecomposition& eigen, double tol);

// Default kernel tolerance: 1e-9 times the l1 norm of the measure.
double default_kernel_tol(const Measure& mu);

struct SpectralOptions {
    std::vector<int> radii = {4, 6, 8};
    std::size_t ball_cap = kDefaultBallCap;
    std::size_t dense_cap = kDefaultDenseCap;
    double cluster_tol = kDefaultClusterTol;
    double kernel_tol = 0.0;  // <= 0 selects the default rule
    int moment_nmax = -1;     // < 0 selects min(radius, 8)
};

struct SpectralReport {
    std::vector<RadiusSlice> slices;
    std::vector<std::vector<MomentRow>> moments;  // aligned with slices
    std::vector<double> weight_sum_per_radius;
    double hull_min = 0.0;
    double hull_max = 0.0;
    double norm_l1 = 0.0;
    bool hull_within_norm = false;
    PointMassEstimate point_masses;
    double kernel_tol = 0.0;
    double kernel_weight_at_largest = 0.0;
    std::vector<double> kernel_weight_per_radius;
};

// Full heuristic pipeline over the radius schedule: truncations,
// eigensolves, moment cross-checks, point-mass trend, kernel weight.
SpectralReport run_spectral_analysis(const Measure& mu, const SpectralOptions& opts = {});

}  // namespace convspec
