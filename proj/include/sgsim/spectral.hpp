#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "sgsim/graph.hpp"

namespace sgsim {

inline constexpr double kDefaultTol = 1e-7;
// Relative eigenvalue threshold below which pencil directions count as kernel.
inline constexpr double kKernelRelTol = 1e-9;

struct SupportResult {
    double sigma = 0.0;                  // sup over x ⊥ 1 of R(num,x)/R(den,x); may be +inf
    Vector witness_direction;            // direction attaining (near-)maximal quotient
    bool finite() const { return std::isfinite(sigma); }
};

struct ConditionResult {
    double kappa = 1.0;
    double sigma_gh = 0.0;
    double sigma_hg = 0.0;
};

// Eigenvalues of the pencil (L_num, L_den) restricted to the complement of the
// all-ones kernel, realized as the spectrum of L_den^{†/2} L_num L_den^{†/2}.
// The denominator factorization is computed once so many numerators can be
// tested against the same host cheaply (the brute-force oracles rely on this).
class SupportSolver {
public:
    explicit SupportSolver(const Graph& denominator) : den_(denominator), n_(denominator.vertex_count()) {
        if (!is_connected(den_))
            throw std::invalid_argument("support: denominator graph must be connected");
        Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian(den_));
        if (es.info() != Eigen::Success) throw std::runtime_error("support: eigensolver failed");
        const Vector& ev = es.eigenvalues();
        double lmax = ev.size() ? ev.maxCoeff() : 0.0;
        double cutoff = kKernelRelTol * std::max(lmax, 1.0);
        Vector inv_sqrt = Vector::Zero(ev.size());
        int kernel_dim = 0;
        for (int i = 0; i < ev.size(); ++i) {
            if (ev[i] <= cutoff)
                ++kernel_dim;
            else
                inv_sqrt[i] = 1.0 / std::sqrt(ev[i]);
        }
        if (kernel_dim != 1 && n_ > 1)
            throw std::runtime_error("support: unexpected kernel dimension for connected graph");
        pinv_sqrt_ = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
    }

    const Graph& denominator() const { return den_; }

    // sigma(numerator, den) with a pulled-back witness direction.
    SupportResult support_of(const Graph& numerator) const {
        check_size(numerator);
        Eigen::SelfAdjointEigenSolver<Matrix> es(pencil(numerator, nullptr));
        if (es.info() != Eigen::Success) throw std::runtime_error("support: eigensolver failed");
        SupportResult r;
        const int top = static_cast<int>(es.eigenvalues().size()) - 1;
        r.sigma = top >= 0 ? std::max(es.eigenvalues()[top], 0.0) : 0.0;
        r.witness_direction = top >= 0 ? Vector(pinv_sqrt_ * es.eigenvectors().col(top)) : Vector::Zero(n_);
        return r;
    }

    double sigma_of(const Graph& numerator) const { return support_of(numerator).sigma; }

    // sigma with the numerator relabeled through `image`, skipping graph
    // reconstruction. Used by the permutation sweeps.
    double sigma_of_mapped(const Graph& numerator, const std::vector<int>& image) const {
        return extreme_eigenvalues(numerator, &image).first;
    }

    // Max and min non-kernel pencil eigenvalues in one decomposition, for
    // kappa(den, num) = lambda_max / lambda_min when the numerator is connected.
    std::pair<double, double> extreme_eigenvalues(const Graph& numerator,
                                                  const std::vector<int>* image = nullptr) const {
        check_size(numerator);
        Eigen::SelfAdjointEigenSolver<Matrix> es(pencil(numerator, image), Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw std::runtime_error("support: eigensolver failed");
        const Vector& ev = es.eigenvalues();
        double lmax = std::max(ev[ev.size() - 1], 0.0);
        // One zero eigenvalue belongs to the shared all-ones kernel; the next
        // one up is the true minimum over the complement.
        double lmin = ev.size() >= 2 ? std::max(ev[1], 0.0) : 0.0;
        return {lmax, lmin};
    }

private:
    Matrix pencil(const Graph& numerator, const std::vector<int>* image) const {
        Matrix m = Matrix::Zero(n_, n_);
        for (const Edge& e : numerator.edges()) {
            int a = image ? (*image)[e.u] : e.u;
            int b = image ? (*image)[e.v] : e.v;
            Vector q = pinv_sqrt_.col(a) - pinv_sqrt_.col(b);
            m.selfadjointView<Eigen::Lower>().rankUpdate(q, e.w);
        }
        return Matrix(m.selfadjointView<Eigen::Lower>());
    }

    void check_size(const Graph& numerator) const {
        if (numerator.vertex_count() != n_)
            throw std::invalid_argument("support: graphs must share the vertex count");
    }

    Graph den_;
    int n_;
    Matrix pinv_sqrt_;
};

namespace detail {
// Disconnected-denominator policy: +inf with an indicator witness when some
// numerator edge crosses a denominator component, hard error otherwise.
inline SupportResult disconnected_denominator_support(const Graph& num, const Graph& den) {
    auto comp = connected_component_labels(den);
    for (const Edge& e : num.edges()) {
        if (comp[e.u] != comp[e.v]) {
            SupportResult r;
            r.sigma = std::numeric_limits<double>::infinity();
            r.witness_direction = Vector::Zero(num.vertex_count());
            for (int v = 0; v < num.vertex_count(); ++v)
                if (comp[v] == comp[e.u]) r.witness_direction[v] = 1.0;
            return r;
        }
    }
    throw std::invalid_argument("support: ambiguous kernel (denominator disconnected, no crossing edge)");
}
}  // namespace detail

// sigma(G, H): smallest factor c with R(G,x) <= c R(H,x) for all x ⊥ 1.
inline SupportResult support(const Graph& g, const Graph& h, double tol = kDefaultTol) {
    (void)tol;
    if (g.vertex_count() != h.vertex_count())
        throw std::invalid_argument("support: graphs must share the vertex count");
    if (!is_connected(h)) return detail::disconnected_denominator_support(g, h);
    return SupportSolver(h).support_of(g);
}

// The PSD-order relation: R(G,x) <= R(H,x) for all x.
inline bool precedes(const Graph& g, const Graph& h, double tol = kDefaultTol) {
    if (!is_connected(g) || !is_connected(h))
        throw std::invalid_argument("precedes: both graphs must be connected");
    return support(g, h, tol).sigma <= 1.0 + tol;
}

inline ConditionResult condition(const Graph& g, const Graph& h, double tol = kDefaultTol) {
    if (!is_connected(g) || !is_connected(h))
        throw std::invalid_argument("condition: both graphs must be connected");
    (void)tol;
    SupportSolver on_h(h);
    SupportSolver on_g(g);
    ConditionResult r;
    r.sigma_gh = on_h.sigma_of(g);
    r.sigma_hg = on_g.sigma_of(h);
    r.kappa = r.sigma_gh * r.sigma_hg;
    return r;
}

// x^T L_G^† x via the spectral decomposition restricted off the kernel. If x
// is not orthogonal to the all-ones vector it is projected; the norm of the
// removed component is reported through `removed_component` when asked for.
inline double laplacian_pinv_quadform(const Graph& g, const Vector& x,
                                      double* removed_component = nullptr) {
    if (!is_connected(g))
        throw std::invalid_argument("laplacian_pinv_quadform: graph must be connected");
    if (x.size() != g.vertex_count())
        throw std::invalid_argument("laplacian_pinv_quadform: vector length mismatch");
    const int n = g.vertex_count();
    Vector proj = x.array() - x.mean();
    if (removed_component) *removed_component = std::abs(x.mean()) * std::sqrt(static_cast<double>(n));
    Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian(g));
    if (es.info() != Eigen::Success) throw std::runtime_error("pinv_quadform: eigensolver failed");
    const Vector& ev = es.eigenvalues();
    double cutoff = kKernelRelTol * std::max(ev[ev.size() - 1], 1.0);
    double out = 0.0;
    for (int i = 0; i < n; ++i) {
        if (ev[i] <= cutoff) continue;
        double c = es.eigenvectors().col(i).dot(proj);
        out += c * c / ev[i];
    }
    return out;
}

inline double effective_resistance(const Graph& g, int u, int v) {
    if (u == v) return 0.0;
    Vector x = Vector::Zero(g.vertex_count());
    x[u] = 1.0;
    x[v] = -1.0;
    return laplacian_pinv_quadform(g, x);
}

}  // namespace sgsim
