#pragma once

namespace heatlab {

// log of Kummer's confluent hypergeometric M(a, b, w) for a, b > 0 and
// w >= 0.  All series terms are positive in this range, so the sum is
// evaluated with running rescaling and no cancellation.
double log_kummer_m(double a, double b, double w);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_inc_beta(double a, double b, double x);

// log Beta(a, b)
double log_beta(double a, double b);

// e^{-z} I_nu(z) for nu >= 0, z >= 0.  Stable at large z where I_nu
// itself overflows: beyond z = 30 the library call is replaced by the
// first four terms of the large-argument expansion (relative error a
// few e-7 at the switch point, shrinking like 1/z^4).
double scaled_bessel_i(double nu, double z);

}  // namespace heatlab
