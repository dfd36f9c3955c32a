#include "berryphase/berry_engine.hpp"

#include "berryphase/errors.hpp"
#include "berryphase/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace berry {

namespace {

using Quadrature = boost::math::quadrature::gauss<double, 7>;

struct Chord {
    double lambda, alpha1, alpha2, beta1, beta2;
};

Chord chord_between(const ParamPoint& a, const ParamPoint& b) {
    return {b.lambda() - a.lambda(), b.alpha.real() - a.alpha.real(), b.alpha.imag() - a.alpha.imag(),
            b.beta.real() - a.beta.real(), b.beta.imag() - a.beta.imag()};
}

double contract(const OneForm& w, const Chord& d) {
    return w.lambda * d.lambda + w.alpha1 * d.alpha1 + w.alpha2 * d.alpha2 + w.beta1 * d.beta1 + w.beta2 * d.beta2;
}

void require_level(int n) {
    if (n < 0) throw InvalidArgument("level index must be >= 0, got " + std::to_string(n));
}

}  // namespace

std::vector<std::vector<double>> segment_arguments(const ParamLoop& loop, const StateBuilder& build,
                                                   std::size_t level_count, double min_overlap,
                                                   const InnerProduct& product) {
    const auto k_count = static_cast<std::size_t>(loop.segments());
    std::vector<std::vector<StateVector>> states(k_count);
    detail::parallel_for(k_count, [&](std::size_t k) {
        states[k] = build(loop[static_cast<int>(k)]);
        if (states[k].size() != level_count) {
            throw InvalidArgument("state builder returned the wrong number of levels");
        }
    });

    std::vector<std::vector<double>> args(level_count, std::vector<double>(k_count));
    for (std::size_t k = 0; k < k_count; ++k) {
        // The closing point reuses the stored states of point 0.
        const auto& next = states[(k + 1) % k_count];
        for (std::size_t j = 0; j < level_count; ++j) {
            const cplx overlap = product(states[k][j], next[j]);
            if (std::abs(overlap) < min_overlap) {
                throw ResolutionError("segment " + std::to_string(k) + " overlap modulus " +
                                      std::to_string(std::abs(overlap)) + " below " + std::to_string(min_overlap) +
                                      "; refine the loop");
            }
            args[j][k] = std::arg(overlap);
        }
    }
    return args;
}

double wilson_phase_from_arguments(const std::vector<double>& arguments) {
    double sum = 0.0;
    for (double a : arguments) sum += a;
    return -sum;
}

std::vector<std::vector<double>> oscillator_segment_arguments(const std::vector<int>& levels, const ParamLoop& loop,
                                                              int dim, const EngineOptions& options) {
    for (int n : levels) require_level(n);
    const auto eig = options.eigenstate_options();
    const StateBuilder build = [&](const ParamPoint& r) { return eigenstates(levels, r, dim, eig); };
    return segment_arguments(loop, build, levels.size(), options.min_overlap);
}

std::vector<double> wilson_loop_phases(const std::vector<int>& levels, const ParamLoop& loop, int dim,
                                       const EngineOptions& options) {
    const auto args = oscillator_segment_arguments(levels, loop, dim, options);
    std::vector<double> out;
    out.reserve(levels.size());
    for (const auto& a : args) out.push_back(wilson_phase_from_arguments(a));
    return out;
}

double wilson_loop_phase(int n, const ParamLoop& loop, int dim, const EngineOptions& options) {
    return wilson_loop_phases({n}, loop, dim, options).front();
}

OneForm displacement_one_form(const ParamPoint& r) {
    const double a1 = r.alpha.real();
    const double a2 = r.alpha.imag();
    return {.lambda = -a1 * a2, .alpha1 = a2, .alpha2 = -a1};
}

OneForm squeeze_one_form(const ParamPoint& r) {
    const double mod = std::abs(r.beta);
    const double sc = sinhc(mod);
    const double b1 = r.beta.real();
    const double b2 = r.beta.imag();
    // (b2/|b|) sinh|b| written as b2 * sinhc(|b|).
    return {.lambda = -b2 * sc * std::cosh(mod), .beta1 = sc * sc * b2, .beta2 = -sc * sc * b1};
}

std::vector<double> chord_integrals(const ParamLoop& loop, const std::function<OneForm(const ParamPoint&)>& form) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(loop.segments()));
    for (int k = 0; k < loop.segments(); ++k) {
        const ParamPoint& a = loop[k];
        const ParamPoint& b = loop[k + 1];
        const Chord d = chord_between(a, b);
        out.push_back(Quadrature::integrate([&](double t) { return contract(form(interpolate(a, b, t)), d); }, 0.0, 1.0));
    }
    return out;
}

double line_integral(const ParamLoop& loop, const std::function<OneForm(const ParamPoint&)>& form) {
    double total = 0.0;
    for (double c : chord_integrals(loop, form)) total += c;
    return total;
}

double closed_form_displacement_phase(const ParamLoop& loop) { return line_integral(loop, displacement_one_form); }

double closed_form_squeeze_phase(int n, const ParamLoop& loop) {
    require_level(n);
    return (n + 0.5) * line_integral(loop, squeeze_one_form);
}

double arg_beta_phase(int n, const ParamLoop& loop) {
    require_level(n);
    const ParamPoint& first = loop[0];
    const double lam0 = first.lambda();
    for (const auto& p : loop.points()) {
        if (std::abs(p.alpha - first.alpha) > 1e-12 || std::abs(p.lambda() - lam0) > 1e-12) {
            throw InvalidArgument("arg_beta_phase requires constant alpha and lambda along the loop");
        }
    }
    double total = 0.0;
    for (int k = 0; k < loop.segments(); ++k) {
        const cplx b0 = loop[k].beta;
        const cplx db = loop[k + 1].beta - b0;
        // Closest approach of the chord to beta = 0.
        double t_star = 0.0;
        if (std::norm(db) > 0.0) t_star = std::clamp(-std::real(std::conj(db) * b0) / std::norm(db), 0.0, 1.0);
        if (std::abs(b0 + t_star * db) < 1e-12) {
            throw DomainError("arg_beta_phase: loop passes through beta = 0 where arg(beta) is undefined");
        }
        total += Quadrature::integrate(
            [&](double t) {
                const cplx beta = b0 + t * db;
                const double sh = std::sinh(std::abs(beta));
                return sh * sh * std::imag(db / beta);
            },
            0.0, 1.0);
    }
    return -(n + 0.5) * total;
}

std::vector<PhaseReport> total_phases(const std::vector<int>& levels, const ParamLoop& loop, int dim,
                                      const EngineOptions& options) {
    const auto gammas = wilson_loop_phases(levels, loop, dim, options);
    std::vector<double> refined;
    const int dim_hi = 2 * dim;
    const bool can_refine = options.check_convergence && dim_hi <= options.max_dim;
    if (can_refine) refined = wilson_loop_phases(levels, loop, dim_hi, options);

    const double gamma_d = closed_form_displacement_phase(loop);
    const double squeeze_unit = line_integral(loop, squeeze_one_form);
    std::vector<PhaseReport> out;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        PhaseReport r;
        r.n = levels[j];
        r.gamma_wilson = gammas[j];
        r.gamma_d = gamma_d;
        r.gamma_s = (levels[j] + 0.5) * squeeze_unit;
        r.gamma_closed = r.gamma_d + r.gamma_s;
        r.discrepancy = std::abs(r.gamma_wilson - r.gamma_closed);
        r.dim = dim;
        r.segments = loop.segments();
        r.converged = can_refine && std::abs(refined[j] - gammas[j]) < options.convergence_tolerance;
        out.push_back(r);
    }
    return out;
}

PhaseReport total_phase(int n, const ParamLoop& loop, int dim, const EngineOptions& options) {
    return total_phases({n}, loop, dim, options).front();
}

double hannay_angle(const ParamLoop& loop, int dim, const EngineOptions& options) {
    const auto g = wilson_loop_phases({0, 1}, loop, dim, options);
    return g[0] - g[1];
}

double linearity_residual(const std::vector<double>& gammas) {
    const auto count = static_cast<double>(gammas.size());
    if (gammas.size() < 2) throw InvalidArgument("linearity check needs at least two levels");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += gammas[i];
        sxx += x * x;
        sxy += x * gammas[i];
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / count;
    double worst = 0.0;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        worst = std::max(worst, std::abs(gammas[i] - (intercept + slope * static_cast<double>(i))));
    }
    return worst;
}

double linearity_check(const ParamLoop& loop, int n_max, int dim, const EngineOptions& options) {
    if (n_max < 1 || n_max > 6) throw InvalidArgument("linearity_check needs 1 <= n_max <= 6");
    std::vector<int> levels;
    for (int n = 0; n <= n_max; ++n) levels.push_back(n);
    return linearity_residual(wilson_loop_phases(levels, loop, dim, options));
}

double curvature_at(const ParamPoint& r, CurvaturePlane plane, int n) {
    require_level(n);
    if (plane == CurvaturePlane::alpha) return -2.0;
    const double mod = std::abs(r.beta);
    if (mod == 0.0) throw DomainError("beta-plane curvature is undefined at beta = 0");
    return -(n + 0.5) * std::sinh(2.0 * mod) / mod;
}

}  // namespace berry
