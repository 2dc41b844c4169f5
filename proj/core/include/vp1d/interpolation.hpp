#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace vp1d {

enum class InterpKind { lagrange, spline };

struct CubicWeights {
    double wm1, w0, w1, w2;
};

/// 4-point Lagrange weights for stencil offsets {-1,0,1,2} at fraction
/// theta in [0,1). w0 is completed to a partition of unity so constant
/// data reproduces bit-exactly.
inline CubicWeights cubic_lagrange_weights(double theta) {
    const double t = theta;
    CubicWeights w;
    w.wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w.w1 = -t * (t + 1.0) * (t - 2.0) / 2.0;
    w.w2 = t * (t * t - 1.0) / 6.0;
    w.w0 = 1.0 - w.wm1 - w.w1 - w.w2;
    return w;
}

/// Interpolates one uniformly sampled row at arbitrary fractional node
/// coordinates. Data outside the row is taken as `exterior` (the solver
/// interpolates the deviation field, which vanishes there).
class RowInterpolator {
  public:
    RowInterpolator(InterpKind kind, std::size_t n) : kind_(kind), n_(n) {
        if (kind_ == InterpKind::spline) {
            m_.resize(n_);
            diag_.resize(n_);
            rhs_.resize(n_);
        }
    }

    /// spline: factor once per row, then evaluate many times
    void prepare(std::span<const double> row) {
        row_ = row;
        if (kind_ != InterpKind::spline || n_ < 4) return;
        // natural cubic spline: M_{i-1} + 4 M_i + M_{i+1} = 6 (y_{i-1} - 2 y_i + y_{i+1})
        // in node units (h = 1), M_0 = M_{n-1} = 0; Thomas sweep
        const std::size_t n = n_;
        m_[0] = 0.0;
        m_[n - 1] = 0.0;
        diag_[1] = 4.0;
        rhs_[1] = 6.0 * (row[0] - 2.0 * row[1] + row[2]);
        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double l = 1.0 / diag_[i - 1];
            diag_[i] = 4.0 - l;
            rhs_[i] = 6.0 * (row[i - 1] - 2.0 * row[i] + row[i + 1]) - l * rhs_[i - 1];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = (rhs_[i] - m_[i + 1]) / diag_[i];
            if (i == 1) break;
        }
    }

    /// value at fractional node coordinate xi (node units)
    double at(double xi, double exterior = 0.0) const {
        const double jf = std::floor(xi);
        const long j = static_cast<long>(jf);
        const double theta = xi - jf;
        const long n = static_cast<long>(n_);
        if (j < -1 || j > n - 1) return exterior;
        if (kind_ == InterpKind::spline && n_ >= 4 && j >= 0 && j + 1 < n) {
            const double a = row_[static_cast<std::size_t>(j)];
            const double b = row_[static_cast<std::size_t>(j + 1)];
            const double ma = m_[static_cast<std::size_t>(j)];
            const double mb = m_[static_cast<std::size_t>(j + 1)];
            const double t = theta, u = 1.0 - theta;
            return u * a + t * b + ((u * u * u - u) * ma + (t * t * t - t) * mb) / 6.0;
        }
        const CubicWeights w = cubic_lagrange_weights(theta);
        auto val = [&](long k) -> double {
            return (k >= 0 && k < n) ? row_[static_cast<std::size_t>(k)] : exterior;
        };
        return w.wm1 * val(j - 1) + w.w0 * val(j) + w.w1 * val(j + 1) + w.w2 * val(j + 2);
    }

  private:
    InterpKind kind_;
    std::size_t n_;
    std::span<const double> row_;
    std::vector<double> m_, diag_, rhs_;
};

/// One cubic-Lagrange point evaluation on a uniformly sampled array with
/// the stencil clamped at the ends (degrades towards one-sided there).
inline double cubic_point(std::span<const double> y, double xi) {
    const long n = static_cast<long>(y.size());
    if (n == 0) return 0.0;
    if (n == 1) return y[0];
    long j = static_cast<long>(std::floor(xi));
    if (j < 0) j = 0;
    if (j > n - 2) j = n - 2;
    double theta = xi - static_cast<double>(j);
    const CubicWeights w = cubic_lagrange_weights(theta);
    auto val = [&](long k) -> double {
        if (k < 0) k = 0;
        if (k > n - 1) k = n - 1;
        return y[static_cast<std::size_t>(k)];
    };
    return w.wm1 * val(j - 1) + w.w0 * val(j) + w.w1 * val(j + 1) + w.w2 * val(j + 2);
}

} // namespace vp1d
