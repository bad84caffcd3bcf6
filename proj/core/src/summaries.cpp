#include "gcpc/summaries.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gcpc/density.hpp"
#include "gcpc/diagnostics.hpp"
#include "gcpc/quadrature.hpp"
#include "gcpc/specfun.hpp"

namespace gcpc {

double mean_resultant_length(const GcpcParams& params) {
    const double delta = gamma_to_delta(params.gamma);
    if (delta == 0.0) return 0.0;
    if (params.lambda == 1.0) return delta;  // wrapped Cauchy closed form
    const double d2 = delta * delta;
    const double p = (1.0 - d2) / (1.0 + d2);
    try {
        const double rj = specfun::carlson_rj(0.0, 1.0 / params.lambda, 1.0, p * p);
        return 4.0 * delta * (1.0 - d2) /
               (3.0 * pi * std::sqrt(params.lambda) * (1.0 + d2) * (1.0 + d2)) * rj;
    } catch (const std::exception& e) {
        std::ostringstream os;
        os << "mean_resultant_length: elliptic route failed (" << e.what()
           << "); falling back to quadrature at gamma=" << params.gamma
           << " lambda=" << params.lambda;
        log_diagnostic(os.str());
        const GcpcParams centered(0.0, params.gamma, params.lambda);
        auto q = specfun::quad_adaptive(
            [&](double t) { return std::cos(t) * pdf_polar(t, centered); }, -pi, pi,
            1e-12);
        return q.value;
    }
}

double entropy(const GcpcParams& params) {
    const double delta = gamma_to_delta(params.gamma);
    const double one_m = 1.0 - delta * delta;
    const double sl = std::sqrt(params.lambda);
    const double denom = sl * one_m + 1.0 + delta * delta;
    return std::log(8.0 * pi * sl * one_m / (denom * denom));
}

double kl_gcpc_from_cipc(const GcpcParams& params) {
    const double lambda = params.lambda;
    const double gamma = params.gamma;
    const double delta = gamma_to_delta(gamma);
    const double c = params.c();
    const double one_m = 1.0 - delta * delta;
    const double sl = std::sqrt(lambda);

    const WcParams wc(0.0, delta);
    auto integrand = [&](double psi) {
        const double s = std::sin(psi);
        const double scale = std::sqrt(1.0 + (lambda - 1.0) * s * s);
        return wc_pdf(psi, wc) * std::log(c - gamma * std::cos(psi) / scale);
    };
    const auto q = specfun::quad_adaptive(integrand, -pi, pi, 1e-10);

    return -0.5 * std::log(lambda) +
           2.0 * std::log((sl * one_m + 1.0 + delta * delta) / 2.0) - std::log(one_m) +
           q.value;
}

CircularSummary circular_summary(const GcpcParams& params) {
    CircularSummary s;
    s.rho = mean_resultant_length(params);
    s.circ_variance = 1.0 - s.rho;
    s.circ_sd = s.rho > 0.0 ? std::sqrt(-2.0 * std::log(s.rho))
                            : std::numeric_limits<double>::infinity();
    s.entropy = entropy(params);
    return s;
}

}  // namespace gcpc
