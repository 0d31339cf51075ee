#include "rhlab/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "rhlab/error.hpp"

namespace rhlab {

void SpectrumMeasurement::validate() const {
    if (freqs.empty()) throw DomainError("spectrum measurement is empty");
    for (std::size_t k = 1; k < freqs.size(); ++k)
        if (!(freqs[k] > freqs[k - 1])) throw DomainError("measured mode frequencies must be strictly ascending");
    if (!(trap_freq > 0.0)) throw DomainError("trap frequency must be positive");
    if (!weights.empty()) {
        if (weights.size() != freqs.size()) throw DomainError("one fit weight per measured mode is required");
        for (double w : weights)
            if (!(w > 0.0)) throw DomainError("fit weights must be positive");
    }
}

Vec model_spectrum(const ChainGeometry& geom) { return collective_modes(motional_model(geom)).freqs; }

Mat fit_jacobian(const ChainGeometry& geom) {
    const MotionalModel m = motional_model(geom);
    const ModeSpectrum spec = collective_modes(m);
    const int n = geom.n_ions();
    const auto z = geom.positions();
    const double k = geom.coulomb_constant();
    const double wx = geom.trap_freq;
    const Vec& w = m.local_freqs;
    const Mat& t = m.hoppings;

    Mat jac = Mat::Zero(n, n - 1);
    for (int s = 0; s < n - 1; ++s) {
        auto spans = [s](int i, int j) { return std::min(i, j) <= s && s < std::max(i, j); };

        Vec dw = Vec::Zero(n);
        for (int i = 0; i < n; ++i) {
            double ds = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i && spans(i, j)) ds += -3.0 / std::pow(std::abs(z[i] - z[j]), 4);
            dw[i] = -k * ds / (2.0 * w[i]);
        }

        Mat dt = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                double rel = -0.5 * (dw[i] / w[i] + dw[j] / w[j]);
                if (spans(i, j)) rel -= 3.0 / std::abs(z[i] - z[j]);
                dt(i, j) = t(i, j) * rel;
            }

        Mat dm = dt - (dt * t + t * dt) / (2.0 * wx);
        dm.diagonal() = dw - (t.cwiseProduct(dt)).rowwise().sum() / wx;

        for (int mode = 0; mode < n; ++mode) {
            const auto v = spec.vectors.col(mode);
            jac(mode, s) = v.dot(dm * v);
        }
    }
    return jac;
}

namespace {

struct Problem {
    const SpectrumMeasurement& meas;
    ChainGeometry geom;
    std::vector<int> param_of_spacing;  // spacing index -> parameter index
    int n_params = 0;
    Vec sqrt_w;

    std::vector<double> spacings(const Vec& p) const {
        std::vector<double> s(param_of_spacing.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::exp(p[param_of_spacing[i]]);
        return s;
    }

    // Weighted residual; nullopt for geometries that are not stable chains.
    std::optional<Vec> residual(const Vec& p, ChainGeometry* out = nullptr) const {
        ChainGeometry g = geom;
        g.spacings = spacings(p);
        Vec model;
        try {
            model = model_spectrum(g);
        } catch (const DomainError&) {
            return std::nullopt;
        }
        if (!model.allFinite()) return std::nullopt;
        if (out) *out = g;
        const Vec target = Eigen::Map<const Vec>(meas.freqs.data(), static_cast<Eigen::Index>(meas.freqs.size()));
        return sqrt_w.cwiseProduct(model - target);
    }

    Mat jacobian(const ChainGeometry& g) const {
        const Mat js = fit_jacobian(g);
        Mat jp = Mat::Zero(js.rows(), n_params);
        for (std::size_t i = 0; i < param_of_spacing.size(); ++i)
            jp.col(param_of_spacing[i]) += js.col(static_cast<Eigen::Index>(i)) * g.spacings[i];
        return sqrt_w.asDiagonal() * jp;
    }
};

// Largest |J_pᵀ r| / ‖J_p‖: the residual projected onto each parameter direction.
double projected_gradient(const Mat& j, const Vec& r) {
    double g = 0.0;
    for (int c = 0; c < j.cols(); ++c) {
        const double norm = j.col(c).norm();
        if (norm > 0.0) g = std::max(g, std::abs(j.col(c).dot(r)) / norm);
    }
    return g;
}

struct RunResult {
    Vec params;
    double cost = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
};

RunResult levenberg_marquardt(const Problem& prob, Vec p, const FitOptions& opt) {
    RunResult out;
    ChainGeometry g;
    auto r0 = prob.residual(p, &g);
    if (!r0) return out;
    Vec r = *r0;
    double cost = 0.5 * r.squaredNorm();
    double lambda = 1e-3;

    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        const Mat j = prob.jacobian(g);
        if (projected_gradient(j, r) < opt.gradient_tolerance) {
            out.converged = true;
            break;
        }
        const Mat jtj = j.transpose() * j;
        const Vec grad = j.transpose() * r;

        bool accepted = false;
        bool stalled = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
            Mat a = jtj;
            a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-30);
            const Vec step = a.ldlt().solve(-grad);
            const Vec trial = p + step;
            ChainGeometry gt;
            const auto rt = prob.residual(trial, &gt);
            const double ct = rt ? 0.5 * rt->squaredNorm() : std::numeric_limits<double>::infinity();
            if (ct < cost) {
                p = trial;
                r = *rt;
                g = gt;
                stalled = step.lpNorm<Eigen::Infinity>() < 1e-14;
                cost = ct;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
            } else {
                lambda *= 4.0;
            }
        }
        if (!accepted || stalled) break;  // no further descent available
    }
    if (!out.converged) {
        const Mat j = prob.jacobian(g);
        out.converged = projected_gradient(j, r) < opt.gradient_tolerance;
    }
    out.params = p;
    out.cost = cost;
    out.iterations = it;
    return out;
}

}  // namespace

SpacingFit fit_spacings(const SpectrumMeasurement& meas, const ChainGeometry& geom_template, bool symmetric,
                        const FitOptions& options) {
    meas.validate();
    const int n = meas.n_ions();
    SpacingFit fit;
    if (n == 1) {
        fit.converged = true;
        fit.residual = std::abs(meas.freqs[0] - meas.trap_freq);
        return fit;
    }

    Problem prob{meas, geom_template, {}, 0, Vec::Ones(n)};
    prob.geom.trap_freq = meas.trap_freq;
    if (!meas.weights.empty())
        for (int k = 0; k < n; ++k) prob.sqrt_w[k] = std::sqrt(meas.weights[k]);

    const int n_spacings = n - 1;
    prob.param_of_spacing.resize(n_spacings);
    for (int i = 0; i < n_spacings; ++i)
        prob.param_of_spacing[i] = symmetric ? std::min(i, n_spacings - 1 - i) : i;
    prob.n_params = symmetric ? (n_spacings + 1) / 2 : n_spacings;

    std::vector<double> init = options.initial.value_or(std::vector<double>(n_spacings, um(5.4)));
    if (static_cast<int>(init.size()) != n_spacings)
        throw DomainError("initial guess needs " + std::to_string(n_spacings) + " spacings");

    auto to_params = [&](const std::vector<double>& s) {
        Vec p = Vec::Zero(prob.n_params);
        Vec count = Vec::Zero(prob.n_params);
        for (int i = 0; i < n_spacings; ++i) {
            p[prob.param_of_spacing[i]] += std::log(s[i]);
            count[prob.param_of_spacing[i]] += 1.0;
        }
        return Vec(p.cwiseQuotient(count));
    };

    std::vector<Vec> starts{to_params(init)};
    // The spectrum fixes the chain only up to mirror images and a few isolated
    // near-isospectral geometries; tilted and bowed starts reach the global minimum.
    if (!options.initial && n_spacings > 1) {
        std::vector<std::pair<double, double>> shapes{{0.0, 0.05}, {0.0, -0.05}};
        if (!symmetric)
            for (double tilt : {0.03, -0.03, 0.08, -0.08})
                for (double bow : {0.0, 0.05, -0.05}) shapes.emplace_back(tilt, bow);
        for (const auto& [tilt, bow] : shapes) {
            std::vector<double> s = init;
            for (int i = 0; i < n_spacings; ++i) {
                const double x = 2.0 * i / (n_spacings - 1) - 1.0;
                s[i] *= 1.0 + tilt * x + bow * (x * x - 1.0 / 3.0);
            }
            starts.push_back(to_params(s));
        }
    }

    if (!options.initial && n_spacings > 1) {
        std::mt19937_64 rng(options.seed);
        std::uniform_real_distribution<double> jitter(-options.random_spread, options.random_spread);
        for (int k = 0; k < options.random_starts; ++k) {
            std::vector<double> s = init;
            for (double& x : s) x *= 1.0 + jitter(rng);
            if (symmetric)
                for (int i = 0; i < n_spacings / 2; ++i) s[n_spacings - 1 - i] = s[i];
            starts.push_back(to_params(s));
        }
    }

    // A fit this close is exact to rounding; later starts cannot improve it.
    const double exact_cost = 0.5 * n * std::pow(options.exact_residual, 2);
    RunResult best;
    for (const Vec& start : starts) {
        RunResult rr = levenberg_marquardt(prob, start, options);
        if (rr.cost < best.cost) best = rr;
        if (best.converged && best.cost < exact_cost) break;
    }
    if (!std::isfinite(best.cost)) throw NumericalError("spacing fit: initial geometry is not a stable chain");

    fit.spacings = prob.spacings(best.params);
    fit.converged = best.converged;
    fit.iterations = best.iterations;

    ChainGeometry g = prob.geom;
    g.spacings = fit.spacings;
    const Vec model = model_spectrum(g);
    double ss = 0.0;
    for (int k = 0; k < n; ++k) ss += std::pow(model[k] - meas.freqs[k], 2);
    fit.residual = std::sqrt(ss / n);

    if (std::abs(meas.freqs.back() - meas.trap_freq) > options.com_tolerance) {
        std::ostringstream os;
        os << "top measured mode differs from the trap frequency by " << to_hz(meas.freqs.back() - meas.trap_freq)
           << " Hz; the center-of-mass mode should sit at the trap frequency";
        fit.warnings.push_back(os.str());
    }
    if (!fit.converged) fit.warnings.push_back("spacing fit did not converge; returning best-so-far");
    return fit;
}

}  // namespace rhlab
