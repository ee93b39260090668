#include "convspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

namespace convspec {

namespace {

constexpr double kTrendSlack = 1e-12;

std::complex<double> to_complex(const ComplexRational& c) {
    return {c.re_double(), c.im_double()};
}

bool strictly_decreasing_trend(const std::vector<double>& w) {
    if (w.size() < 2) return false;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        if (w[k + 1] > w[k] + kTrendSlack) return false;
    }
    return w.back() < w.front() - kTrendSlack;
}

}  // namespace

TruncatedOperator::TruncatedOperator(
    Measure mu, int radius, std::vector<GroupElement> ball,
    std::vector<std::vector<std::pair<int, std::complex<double>>>> columns, bool real_entries)
    : mu_(std::move(mu)),
      radius_(radius),
      ball_(std::move(ball)),
      columns_(std::move(columns)),
      real_entries_(real_entries) {}

std::vector<std::complex<double>> TruncatedOperator::apply(
    const std::vector<std::complex<double>>& x) const {
    if (x.size() != ball_.size()) {
        throw ValidationError("vector length does not match the ball size");
    }
    std::vector<std::complex<double>> y(ball_.size(), {0.0, 0.0});
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (x[j] == std::complex<double>(0.0, 0.0)) continue;
        for (const auto& [i, v] : columns_[j]) {
            y[static_cast<std::size_t>(i)] += v * x[j];
        }
    }
    return y;
}

Eigen::MatrixXcd TruncatedOperator::dense(std::size_t dense_cap) const {
    if (ball_.size() > dense_cap) {
        std::ostringstream os;
        os << "ball size " << ball_.size() << " exceeds the dense matrix cap " << dense_cap;
        throw CapExceededError(os.str());
    }
    const auto n = static_cast<Eigen::Index>(ball_.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        for (const auto& [i, v] : columns_[j]) {
            m(i, static_cast<Eigen::Index>(j)) = v;
        }
    }
    return m;
}

Eigen::MatrixXd TruncatedOperator::dense_real(std::size_t dense_cap) const {
    if (!real_entries_) {
        throw ValidationError("matrix has complex entries; use the complex form");
    }
    if (ball_.size() > dense_cap) {
        std::ostringstream os;
        os << "ball size " << ball_.size() << " exceeds the dense matrix cap " << dense_cap;
        throw CapExceededError(os.str());
    }
    const auto n = static_cast<Eigen::Index>(ball_.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        for (const auto& [i, v] : columns_[j]) {
            m(i, static_cast<Eigen::Index>(j)) = v.real();
        }
    }
    return m;
}

TruncatedOperator build_truncation(const Measure& mu, int radius, std::size_t ball_cap) {
    if (radius < 0) throw ValidationError("radius must be nonnegative");
    if (!is_selfadjoint(mu)) {
        throw ValidationError("truncation requires a self-adjoint measure");
    }
    std::vector<GroupElement> gens;
    gens.reserve(mu.support_size());
    bool real_entries = true;
    for (const auto& [x, c] : mu.coeffs()) {
        gens.push_back(x);
        if (!(c.im == 0)) real_entries = false;
    }
    std::vector<GroupElement> b = ball(mu.spec(), gens, radius, ball_cap);
    std::map<GroupElement, int, ElementLess> index;
    for (std::size_t i = 0; i < b.size(); ++i) {
        index.emplace(b[i], static_cast<int>(i));
    }
    std::vector<std::vector<std::pair<int, std::complex<double>>>> columns(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        for (const auto& [s, c] : mu.coeffs()) {
            GroupElement x = multiply(s, b[j]);
            auto it = index.find(x);
            if (it != index.end()) {
                columns[j].emplace_back(it->second, to_complex(c));
            }
        }
    }
    return TruncatedOperator(mu, radius, std::move(b), std::move(columns), real_entries);
}

EigenDecomposition eigendecompose(const TruncatedOperator& op, std::size_t dense_cap) {
    EigenDecomposition out;
    const std::size_t n = op.size();
    if (op.real_entries()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense_real(dense_cap));
        if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver failed");
        out.eigenvalues.resize(n);
        out.weights.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            out.eigenvalues[j] = es.eigenvalues()(static_cast<Eigen::Index>(j));
            const double overlap = es.eigenvectors()(0, static_cast<Eigen::Index>(j));
            out.weights[j] = overlap * overlap;
        }
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.dense(dense_cap));
        if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver failed");
        out.eigenvalues.resize(n);
        out.weights.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            out.eigenvalues[j] = es.eigenvalues()(static_cast<Eigen::Index>(j));
            out.weights[j] = std::norm(es.eigenvectors()(0, static_cast<Eigen::Index>(j)));
        }
    }
    return out;
}

std::vector<MomentRow> moment_crosscheck(const TruncatedOperator& op, int nmax,
                                         std::size_t support_cap) {
    if (nmax < 0) throw ValidationError("moment order must be nonnegative");
    if (nmax > op.radius()) {
        std::ostringstream os;
        os << "moment order " << nmax << " exceeds the truncation radius " << op.radius()
           << "; the exactness window ends there";
        throw ValidationError(os.str());
    }
    std::vector<MomentRow> rows;
    rows.reserve(static_cast<std::size_t>(nmax) + 1);

    std::vector<std::complex<double>> v(op.size(), {0.0, 0.0});
    v[0] = {1.0, 0.0};
    Measure power = Measure::delta(identity(op.mu().spec()));
    for (int n = 0; n <= nmax; ++n) {
        if (n > 0) {
            power = convolve(op.mu(), power, support_cap);
            v = op.apply(v);
        }
        MomentRow row;
        row.n = n;
        row.exact_value = power.at(identity(op.mu().spec())).re_double();
        row.matrix_value = v[0].real();
        row.abs_diff = std::abs(row.exact_value - row.matrix_value);
        row.rel_diff = row.abs_diff / std::max(1.0, std::abs(row.exact_value));
        rows.push_back(row);
    }
    return rows;
}

PointMassEstimate point_mass_estimate(const std::vector<RadiusSlice>& slices, double cluster_tol) {
    if (slices.size() < 3) {
        throw ValidationError("point-mass trends require at least 3 radii");
    }
    if (cluster_tol <= 0) throw ValidationError("cluster tolerance must be positive");

    std::vector<RadiusSlice> ordered = slices;
    std::sort(ordered.begin(), ordered.end(),
              [](const RadiusSlice& a, const RadiusSlice& b) { return a.radius < b.radius; });

    PointMassEstimate out;
    for (const RadiusSlice& s : ordered) out.radii.push_back(s.radius);

    struct Entry {
        double lambda;
        double weight;
        std::size_t slice;
    };
    std::vector<Entry> pool;
    for (std::size_t si = 0; si < ordered.size(); ++si) {
        const auto& e = ordered[si].eigen;
        for (std::size_t j = 0; j < e.eigenvalues.size(); ++j) {
            pool.push_back({e.eigenvalues[j], e.weights[j], si});
        }
    }
    std::sort(pool.begin(), pool.end(),
              [](const Entry& a, const Entry& b) { return a.lambda < b.lambda; });

    std::vector<std::pair<std::size_t, std::size_t>> ranges;  // [begin, end) into pool
    std::size_t begin = 0;
    for (std::size_t k = 1; k <= pool.size(); ++k) {
        if (k == pool.size() || pool[k].lambda - pool[k - 1].lambda > cluster_tol) {
            ranges.emplace_back(begin, k);
            begin = k;
        }
    }

    for (const auto& [lo, hi] : ranges) {
        PointMassCluster cluster;
        cluster.weight_per_radius.assign(ordered.size(), 0.0);
        std::vector<bool> present(ordered.size(), false);
        double wsum = 0.0;
        double lsum = 0.0;
        double plain = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            const Entry& e = pool[k];
            present[e.slice] = true;
            cluster.weight_per_radius[e.slice] =
                std::max(cluster.weight_per_radius[e.slice], e.weight);
            wsum += e.weight;
            lsum += e.lambda * e.weight;
            plain += e.lambda;
        }
        cluster.location = wsum > 0 ? lsum / wsum : plain / static_cast<double>(hi - lo);
        cluster.present_in_all =
            std::all_of(present.begin(), present.end(), [](bool p) { return p; });
        cluster.decreasing = strictly_decreasing_trend(cluster.weight_per_radius);
        out.clusters.push_back(std::move(cluster));
    }

    out.max_weight_per_radius.assign(ordered.size(), 0.0);
    for (std::size_t si = 0; si < ordered.size(); ++si) {
        for (double w : ordered[si].eigen.weights) {
            out.max_weight_per_radius[si] = std::max(out.max_weight_per_radius[si], w);
        }
    }
    out.max_weight_decreasing = strictly_decreasing_trend(out.max_weight_per_radius);

    const PointMassCluster* persistent = nullptr;
    for (const PointMassCluster& c : out.clusters) {
        if (c.present_in_all && !c.decreasing && c.weight_per_radius.back() > 1e-6) {
            if (!persistent || c.weight_per_radius.back() > persistent->weight_per_radius.back()) {
                persistent = &c;
            }
        }
    }
    std::ostringstream label;
    if (persistent) {
        label << "weight " << persistent->weight_per_radius.back() << " persists near lambda = "
              << persistent->location << ": consistent with a point mass (heuristic)";
    } else if (out.max_weight_decreasing) {
        label << "max point weight decreases with radius: consistent with absence of point mass "
                 "(heuristic)";
    } else {
        label << "no stable weight trend detected (heuristic)";
    }
    out.label = label.str();
    return out;
}

double kernel_weight(const EigenDecomposition& eigen, double tol) {
    if (tol <= 0) throw ValidationError("kernel tolerance must be positive");
    double w = 0.0;
    for (std::size_t j = 0; j < eigen.eigenvalues.size(); ++j) {
        if (std::abs(eigen.eigenvalues[j]) < tol) w += eigen.weights[j];
    }
    return w;
}

double default_kernel_tol(const Measure& mu) {
    const double n = norm_l1_double(mu);
    return n > 0 ? 1e-9 * n : 1e-9;
}

SpectralReport run_spectral_analysis(const Measure& mu, const SpectralOptions& opts) {
    std::vector<int> radii = opts.radii;
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    if (radii.empty()) throw ValidationError("the radius schedule is empty");

    SpectralReport rep;
    rep.norm_l1 = norm_l1_double(mu);
    rep.kernel_tol = opts.kernel_tol > 0 ? opts.kernel_tol : default_kernel_tol(mu);

    bool first = true;
    for (int r : radii) {
        TruncatedOperator op = build_truncation(mu, r, opts.ball_cap);
        RadiusSlice slice;
        slice.radius = r;
        slice.ball_size = op.size();
        slice.eigen = eigendecompose(op, opts.dense_cap);

        double wsum = 0.0;
        for (double w : slice.eigen.weights) wsum += w;
        rep.weight_sum_per_radius.push_back(wsum);

        if (!slice.eigen.eigenvalues.empty()) {
            const double lo = slice.eigen.eigenvalues.front();
            const double hi = slice.eigen.eigenvalues.back();
            rep.hull_min = first ? lo : std::min(rep.hull_min, lo);
            rep.hull_max = first ? hi : std::max(rep.hull_max, hi);
            first = false;
        }

        const int nmax =
            opts.moment_nmax < 0 ? std::min(r, 8) : std::min(opts.moment_nmax, r);
        rep.moments.push_back(moment_crosscheck(op, nmax));
        rep.kernel_weight_per_radius.push_back(kernel_weight(slice.eigen, rep.kernel_tol));
        rep.slices.push_back(std::move(slice));
    }
    rep.hull_within_norm =
        rep.hull_min >= -rep.norm_l1 - 1e-9 && rep.hull_max <= rep.norm_l1 + 1e-9;
    rep.kernel_weight_at_largest = rep.kernel_weight_per_radius.back();
    if (rep.slices.size() >= 3) {
        rep.point_masses = point_mass_estimate(rep.slices, opts.cluster_tol);
    } else {
        rep.point_masses.label = "point-mass trends require at least 3 radii";
        for (const RadiusSlice& s : rep.slices) rep.point_masses.radii.push_back(s.radius);
    }
    return rep;
}

}  // namespace convspec
