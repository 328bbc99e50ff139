#pragma once

namespace vvlab {

/// The concave-cone example: terminal cost -|P_k(x)| in dimension d,
/// evaluated at the origin where the inviscid minimizer is degenerate.
struct RadialCase {
    int k;
    int d;
    double tau;  // T - t
    double eps;

    RadialCase(int k_, int d_, double tau_, double eps_);

    double unit_ball_surface_factor() const;  // C_k = k pi^{k/2} / Gamma(k/2+1)
};

/// Gamma via a Lanczos approximation, relative error below 1e-13 for x > 0.
double gamma_fn(double x);

/// phi^eps at x = 0 minus the inviscid value -tau/2, computed in one
/// cancellation-free expression:
///   gap = eps * [ (k/2) log(2 pi eps tau) - log( C_k I ) ],
///   I = int_0^inf exp(-(r - tau)^2 / (2 eps tau)) r^{k-1} dr,
/// with the 1D integral done by doubling composite quadrature in the log
/// domain to absolute tolerance 1e-12 on the log-integral.
double radial_gap(const RadialCase& c);

/// phi^{k,eps}_{T-tau}(0) = -tau/2 + radial_gap.
double radial_viscous_value(const RadialCase& c);

/// Closed-form expansion value:
///   -tau/2 + ((k-1)/2) eps log eps - ((k-1)/2) eps log tau
///          - eps log[ k sqrt(pi) / (2^{(k-1)/2} Gamma(k/2+1)) ].
double expansion_value(const RadialCase& c);

/// Same expansion without the leading -tau/2, i.e. the predicted gap.
double expansion_gap(const RadialCase& c);

/// Inviscid value -|P_k(x)| - tau/2.
double limit_value(int k, const double* x, int d, double tau);

}  // namespace vvlab
