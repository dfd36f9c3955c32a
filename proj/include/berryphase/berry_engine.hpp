#pragma once

// Berry phases along closed parameter loops: the gauge-invariant discrete
// overlap product, line integrals of the closed-form one-forms, Hannay angles,
// the linearity check and the Berry curvature in the alpha and beta planes.

#include "berryphase/loop.hpp"

#include <functional>
#include <vector>

namespace berry {

struct EngineOptions {
    double tail_tolerance = 1e-10;
    double expm_tolerance = kDefaultExpmTol;
    /// Segment overlaps below this modulus mean the loop is sampled too coarsely.
    double min_overlap = 0.9;
    /// Recompute at twice the dimension to flag truncation convergence.
    bool check_convergence = true;
    double convergence_tolerance = 1e-4;
    int max_dim = 512;

    EigenstateOptions eigenstate_options() const { return {tail_tolerance, expm_tolerance}; }
};

struct PhaseReport {
    int n = 0;
    double gamma_wilson = 0.0;
    double gamma_closed = 0.0;
    double gamma_d = 0.0;
    double gamma_s = 0.0;
    double discrepancy = 0.0;
    int dim = 0;
    int segments = 0;
    bool converged = false;
};

/// Builds the states of several levels at one loop point.
using StateBuilder = std::function<std::vector<StateVector>(const ParamPoint&)>;
using InnerProduct = std::function<cplx(const StateVector&, const StateVector&)>;

/// arg <psi(R_k)|psi(R_{k+1})> for every level and segment, indexed [level][segment].
/// States at the closing point are the stored states of point 0.
std::vector<std::vector<double>> segment_arguments(const ParamLoop& loop, const StateBuilder& build,
                                                   std::size_t level_count, double min_overlap = 0.9,
                                                   const InnerProduct& product = inner);

/// -sum of segment arguments, summed in loop order.
double wilson_phase_from_arguments(const std::vector<double>& arguments);

/// segment_arguments for the oscillator eigenstates |n, R>.
std::vector<std::vector<double>> oscillator_segment_arguments(const std::vector<int>& levels, const ParamLoop& loop,
                                                              int dim, const EngineOptions& options = {});

std::vector<double> wilson_loop_phases(const std::vector<int>& levels, const ParamLoop& loop, int dim,
                                       const EngineOptions& options = {});
double wilson_loop_phase(int n, const ParamLoop& loop, int dim, const EngineOptions& options = {});

/// Coefficients of a one-form on (lambda, alpha1, alpha2, beta1, beta2).
struct OneForm {
    double lambda = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
};

/// alpha2 d alpha1 - alpha1 d alpha2 - alpha1 alpha2 d lambda.
OneForm displacement_one_form(const ParamPoint& r);
/// Unit-weight squeeze one-form: (sinh|b|/|b|)^2 (b2 db1 - b1 db2) - (b2/|b|) sinh|b| cosh|b| d lambda.
OneForm squeeze_one_form(const ParamPoint& r);

/// Integral of a one-form over each chord of the loop, in loop order.
std::vector<double> chord_integrals(const ParamLoop& loop, const std::function<OneForm(const ParamPoint&)>& form);

/// Line integral of a one-form along the straight chords joining consecutive loop points.
double line_integral(const ParamLoop& loop, const std::function<OneForm(const ParamPoint&)>& form);

double closed_form_displacement_phase(const ParamLoop& loop);
double closed_form_squeeze_phase(int n, const ParamLoop& loop);
/// -(n + 1/2) times the integral of sinh^2|beta| d(arg beta); requires constant alpha and lambda, beta != 0.
double arg_beta_phase(int n, const ParamLoop& loop);

std::vector<PhaseReport> total_phases(const std::vector<int>& levels, const ParamLoop& loop, int dim,
                                      const EngineOptions& options = {});
PhaseReport total_phase(int n, const ParamLoop& loop, int dim, const EngineOptions& options = {});

/// gamma_0 - gamma_1 from the discrete overlap product.
double hannay_angle(const ParamLoop& loop, int dim, const EngineOptions& options = {});

/// Max |residual| of a least-squares line through gamma_n, n = 0 .. n_max.
double linearity_residual(const std::vector<double>& gammas);
double linearity_check(const ParamLoop& loop, int n_max, int dim, const EngineOptions& options = {});

enum class CurvaturePlane { alpha, beta };

/// Berry curvature in the (x1, x2) plane, counterclockwise positive.
double curvature_at(const ParamPoint& r, CurvaturePlane plane, int n);

}  // namespace berry
