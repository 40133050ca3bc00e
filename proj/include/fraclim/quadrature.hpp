#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fraclim::quad {

// Gauss-Legendre nodes/weights on [0,1]. Supported orders: 2..16.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

const GaussRule& gauss01(int order);

// Integrate f over [a,b] with a composite Gauss rule (panels uniform).
double integrate(const std::function<double(double)>& f, double a, double b,
                 int order = 16, int panels = 8);

// Integrate f over [a,b] where f has an integrable algebraic singularity at one
// endpoint: dyadic panels shrink geometrically toward it and the remaining tail
// is summed by geometric extrapolation from the measured panel-to-panel ratio.
// (For f ~ c*d^alpha at distance d from the endpoint the panel contributions are
// exactly geometric, so the extrapolated tail is accurate to the deviation from
// the leading power, which shrinks with the panel size.)
double integrate_singular_endpoint(const std::function<double(double)>& f, double a, double b,
                                   bool singular_at_b, int levels = 48, int order = 16);

// Integrate f over [a, +inf) for integrands with (super)exponential decay:
// geometric panels [a+2^k-1, a+2^{k+1}-1] until the contribution is negligible.
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             int order = 16);

} // namespace fraclim::quad
