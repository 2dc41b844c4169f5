#pragma once

#include <vector>

#include "vp1d/fields.hpp"
#include "vp1d/profiles.hpp"
#include "vp1d/series.hpp"

namespace vp1d {

/// Closed-form constants of the exterior solution plus the recorded
/// histories the support-radius formula needs.
struct TheoryParams {
    double E0 = 0.0;
    double omega = 0.0;
    double R = 0.0;

    // recorded per-step histories (optional; empty for formula-only use)
    std::vector<double> t;
    std::vector<double> r_t;
    std::vector<double> c1;
    std::vector<double> qg;

    /// R(t) from the recorded series (linear between samples); R when no
    /// history is stored and t = 0
    double radius_at(double time) const;
};

TheoryParams make_theory_params(const BackgroundProfile& bg, const InitialData& init,
                                const SpatialGrid& xgrid, const VelocityGrid& vgrid,
                                QuadratureRule rule = QuadratureRule::trapezoid);

/// E(t, x) = E0 sign(x) cos(omega t), valid for |x| > R(t); sign(0) = +1
double exterior_field(double t, double x, const TheoryParams& params);

/// f(t, x, v) = F(v + E0 sign(x)/omega * sin(omega t)), |x| > R(t)
double exterior_distribution(double t, double x, double v, const TheoryParams& params,
                             const BackgroundProfile& bg);

struct ExteriorSolution {
    TheoryParams params;
    BackgroundProfile bg;
    double field(double t, double x) const { return exterior_field(t, x, params); }
    double distribution(double t, double x, double v) const {
        return exterior_distribution(t, x, v, params, bg);
    }
};

/// R(t) = R + t Qg(t) + double time integral of ||E||inf, rebuilt from the
/// (t_k, ||E||inf_k, Qg_k) history by trapezoid sums.
class SupportRadius {
  public:
    SupportRadius(double R, std::vector<double> times, std::vector<double> e_inf,
                  std::vector<double> qg);
    double operator()(double t) const;

  private:
    double R_;
    std::vector<double> t_, qg_, c1_, int_c1_;
};

/// convenience: support radius at time t from a recorded series
double support_radius(double t, double R, const RunSeries& series);

struct Lemma1Report {
    bool ok = true;
    double min_margin = 0.0; // min over steps of bound - Qg
    double worst_time = 0.0;
};

/// Qg(t) <= Qg(0) + C1(t) + dv at every recorded time
Lemma1Report lemma1_check(const RunSeries& series, double dv);

struct FitReport {
    double a = 0.0;     // cos coefficient
    double b = 0.0;     // sin coefficient
    double omega = 0.0; // fitted angular frequency
    double rms = 0.0;   // fit residual
    bool degenerate = false;
};

/// Least-squares fit of a probe series to a cos(w t) + b sin(w t) with the
/// frequency free: zero-crossing initialization, Gauss-Newton refinement.
/// Throws interior_point_error when the probe is not exterior at the final
/// time and insufficient_history_error when less than one period is
/// recorded.
FitReport theorem2_fit(const std::vector<double>& times, const std::vector<double>& values,
                       double probe_x, const TheoryParams& params,
                       double noise_floor = 1e-13);

struct Theorem1Report {
    bool ok = true;
    double worst_value = 0.0;
    double worst_x = 0.0;
    double worst_time = 0.0;
};

/// max over |x| > R(t) + 2 dx of |rho| <= threshold at each snapshot (the
/// 2 dx buffer skirts the unquantified transition across |x| = R(t))
Theorem1Report theorem1_check(const std::vector<FieldState>& snapshots,
                              const TheoryParams& params, double threshold);

} // namespace vp1d
