#ifndef MOBIUS_ANALYSIS_H
#define MOBIUS_ANALYSIS_H

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mobius/noise_sim.h"

namespace mobius {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    /// Standard error of the slope; 0 for an exact two-point fit.
    double slope_stderr = 0.0;
};

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

/// Points with P_fail below this value are dropped before the low-p fit.
inline constexpr double kLowPDiscard = 5e-6;

struct LowPPerD {
    int d = 0;
    double gradient = 0.0;   // G(d)
    double intercept = 0.0;  // A(d)
    size_t points = 0;
};

/// P_fail = beta (N p)^(alpha d + gamma), with natural logs throughout.
struct LowPFit {
    double alpha = 0.0;
    double gamma = 0.0;
    double N = 0.0;
    double beta = 0.0;
    std::vector<LowPPerD> per_d;
    double discard_threshold = kLowPDiscard;
    size_t discarded_points = 0;
    /// Two-sided 95% Student-t interval on alpha from the G(d) regression.
    std::pair<double, double> alpha_band{0.0, 0.0};
};

LowPFit fit_lowp(std::span<const MCResult> data, double discard_threshold = kLowPDiscard);

/// Evaluates the low-p ansatz.
double lowp_model(const LowPFit &fit, int d, double p);

struct ThresholdFit {
    double p_c = 0.0;
    double nu0 = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    std::pair<double, double> window{0.07, 0.11};
    /// Root of the (weighted) residual sum of squares.
    double residual = 0.0;
    /// Residual norm after each accepted solver iteration.
    std::vector<double> trace;
    size_t points = 0;
    size_t discarded_points = 0;  // outside the window
    bool weighted = false;
};

struct ThresholdOptions {
    double p_c0 = 0.09;
    double nu0 = 1.5;
    std::pair<double, double> window{0.07, 0.11};
    int max_iterations = 1000;
    double step_tolerance = 1e-10;
};

/// f(x) = A x^2 + B x + C with x = (p - p_c) d^(1/nu0).
double threshold_model(const ThresholdFit &fit, int d, double p);

class FitError : public std::runtime_error {
   public:
    FitError(const std::string &what, std::vector<double> trace = {})
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const std::vector<double> &trace() const { return trace_; }

   private:
    std::vector<double> trace_;
};

ThresholdFit fit_threshold(std::span<const MCResult> data, const ThresholdOptions &options = {});

}  // namespace mobius

#endif
