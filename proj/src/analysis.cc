#include "mobius/analysis.h"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unsupported/Eigen/LevenbergMarquardt>

namespace mobius {

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("linear_fit: xs and ys differ in length");
    }
    const size_t n = xs.size();
    if (n < 2) {
        throw std::invalid_argument("linear_fit: need at least two points");
    }
    double mx = 0.0;
    double my = 0.0;
    for (size_t i = 0; i < n; i++) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (size_t i = 0; i < n; i++) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("linear_fit: all xs are equal");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (size_t i = 0; i < n; i++) {
        double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        sse += r * r;
    }
    fit.r2 = syy == 0.0 ? 1.0 : 1.0 - sse / syy;
    fit.slope_stderr = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
    return fit;
}

LowPFit fit_lowp(std::span<const MCResult> data, double discard_threshold) {
    LowPFit out;
    out.discard_threshold = discard_threshold;
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_d;
    std::set<int> seen;
    for (const MCResult &r : data) {
        seen.insert(r.d);
        if (r.p_fail < discard_threshold || r.p_fail <= 0.0) {
            out.discarded_points++;
            continue;
        }
        by_d[r.d].first.push_back(std::log(r.p));
        by_d[r.d].second.push_back(std::log(r.p_fail));
    }
    if (seen.size() < 3) {
        throw std::invalid_argument("fit_lowp: need at least three distinct d");
    }
    std::vector<double> ds;
    std::vector<double> gs;
    std::vector<double> as;
    for (int d : seen) {
        auto it = by_d.find(d);
        size_t have = it == by_d.end() ? 0 : it->second.first.size();
        if (have < 3) {
            throw std::invalid_argument(
                "fit_lowp: d=" + std::to_string(d) + " has " + std::to_string(have) +
                " points above the discard threshold, need 3");
        }
        LinearFit f = linear_fit(it->second.first, it->second.second);
        out.per_d.push_back({d, f.slope, f.intercept, have});
        ds.push_back(d);
        gs.push_back(f.slope);
        as.push_back(f.intercept);
    }

    LinearFit g = linear_fit(ds, gs);
    LinearFit a = linear_fit(ds, as);
    out.alpha = g.slope;
    out.gamma = g.intercept;
    if (out.alpha == 0.0) {
        throw std::invalid_argument("fit_lowp: zero gradient slope, N undefined");
    }
    double log_n = a.slope / out.alpha;
    out.N = std::exp(log_n);
    out.beta = std::exp(a.intercept - out.gamma * log_n);

    double half = 0.0;
    if (ds.size() > 2) {
        boost::math::students_t dist(static_cast<double>(ds.size() - 2));
        half = boost::math::quantile(boost::math::complement(dist, 0.025)) * g.slope_stderr;
    }
    out.alpha_band = {out.alpha - half, out.alpha + half};
    return out;
}

double lowp_model(const LowPFit &fit, int d, double p) {
    return fit.beta * std::pow(fit.N * p, fit.alpha * d + fit.gamma);
}

double threshold_model(const ThresholdFit &fit, int d, double p) {
    double x = (p - fit.p_c) * std::pow(static_cast<double>(d), 1.0 / fit.nu0);
    return fit.A * x * x + fit.B * x + fit.C;
}

namespace {

struct Point {
    double d;
    double p;
    double y;
    double w;  // sqrt of the least-squares weight
};

// Weighted residuals r_i = w_i (f(x_i) - y_i) over (p_c, nu0, A, B, C).
struct CrossingFunctor : Eigen::DenseFunctor<double> {
    const std::vector<Point> *pts;

    CrossingFunctor(const std::vector<Point> &points)
        : Eigen::DenseFunctor<double>(5, static_cast<int>(points.size())), pts(&points) {}

    int operator()(const Eigen::VectorXd &t, Eigen::VectorXd &fvec) const {
        for (size_t i = 0; i < pts->size(); i++) {
            const Point &q = (*pts)[i];
            double x = (q.p - t[0]) * std::pow(q.d, 1.0 / t[1]);
            fvec[i] = q.w * (t[2] * x * x + t[3] * x + t[4] - q.y);
        }
        return 0;
    }

    int df(const Eigen::VectorXd &t, Eigen::MatrixXd &jac) const {
        for (size_t i = 0; i < pts->size(); i++) {
            const Point &q = (*pts)[i];
            double scale = std::pow(q.d, 1.0 / t[1]);
            double x = (q.p - t[0]) * scale;
            double dfdx = 2.0 * t[2] * x + t[3];
            jac(i, 0) = q.w * dfdx * -scale;
            jac(i, 1) = q.w * dfdx * x * std::log(q.d) * (-1.0 / (t[1] * t[1]));
            jac(i, 2) = q.w * x * x;
            jac(i, 3) = q.w * x;
            jac(i, 4) = q.w;
        }
        return 0;
    }
};

}  // namespace

ThresholdFit fit_threshold(std::span<const MCResult> data, const ThresholdOptions &options) {
    auto [lo, hi] = options.window;
    if (!(lo < hi)) {
        throw std::invalid_argument("fit_threshold: empty window");
    }
    std::vector<Point> pts;
    std::set<int> ds;
    bool all_have_stderr = true;
    size_t outside = 0;
    // Grid points built by repeated addition land a few ulps off the edges.
    const double slack = 1e-9 * (hi - lo);
    for (const MCResult &r : data) {
        if (r.p < lo - slack || r.p > hi + slack) {
            outside++;
            continue;
        }
        pts.push_back({static_cast<double>(r.d), r.p, r.p_fail, 1.0});
        ds.insert(r.d);
        all_have_stderr = all_have_stderr && r.std_err > 0.0;
    }
    if (ds.size() < 3) {
        throw std::invalid_argument("fit_threshold: need at least three distinct d inside the window");
    }
    if (pts.size() < 5) {
        throw std::invalid_argument("fit_threshold: need at least five points inside the window");
    }
    if (all_have_stderr) {
        size_t k = 0;
        for (const MCResult &r : data) {
            if (r.p >= lo && r.p <= hi) {
                pts[k++].w = 1.0 / r.std_err;
            }
        }
    }

    // Quadratic coefficients start from the linear least-squares solution at
    // the initial (p_c, nu0).
    Eigen::MatrixXd X(pts.size(), 3);
    Eigen::VectorXd y(pts.size());
    for (size_t i = 0; i < pts.size(); i++) {
        double x = (pts[i].p - options.p_c0) * std::pow(pts[i].d, 1.0 / options.nu0);
        X(i, 0) = pts[i].w * x * x;
        X(i, 1) = pts[i].w * x;
        X(i, 2) = pts[i].w;
        y[i] = pts[i].w * pts[i].y;
    }
    Eigen::Vector3d abc = X.colPivHouseholderQr().solve(y);

    Eigen::VectorXd theta(5);
    theta << options.p_c0, options.nu0, abc[0], abc[1], abc[2];

    CrossingFunctor functor(pts);
    Eigen::LevenbergMarquardt<CrossingFunctor> lm(functor);
    lm.setXtol(options.step_tolerance);
    lm.setFtol(1e-15);
    lm.setMaxfev(options.max_iterations);

    std::vector<double> trace;
    Eigen::LevenbergMarquardtSpace::Status status = lm.minimizeInit(theta);
    if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters) {
        throw FitError("fit_threshold: improper solver input");
    }
    trace.push_back(lm.fnorm());
    int iterations = 0;
    do {
        status = lm.minimizeOneStep(theta);
        trace.push_back(lm.fnorm());
        iterations++;
    } while (status == Eigen::LevenbergMarquardtSpace::Running && iterations < options.max_iterations);

    if (status == Eigen::LevenbergMarquardtSpace::Running ||
        status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation ||
        status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters) {
        throw FitError("fit_threshold: no convergence after " + std::to_string(iterations) + " iterations",
                       trace);
    }
    if (!theta.allFinite() || theta[1] <= 0.0) {
        throw FitError("fit_threshold: solver left the valid parameter region", trace);
    }
    if (theta[0] <= lo || theta[0] >= hi) {
        throw FitError("fit_threshold: crossing estimate outside the fit window", trace);
    }

    ThresholdFit fit;
    fit.p_c = theta[0];
    fit.nu0 = theta[1];
    fit.A = theta[2];
    fit.B = theta[3];
    fit.C = theta[4];
    fit.window = options.window;
    fit.residual = lm.fnorm();
    fit.trace = std::move(trace);
    fit.points = pts.size();
    fit.discarded_points = outside;
    fit.weighted = all_have_stderr;
    return fit;
}

}  // namespace mobius
