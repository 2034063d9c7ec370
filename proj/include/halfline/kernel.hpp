#pragma once

namespace halfline::kernel {

/// Green's function of u'' = g on [0, inf) with u(0) = 0, u'(inf) = 0:
/// G(t, s) = -min(t, s). Throws std::domain_error for negative arguments.
double green(double t, double s);

/// Q(s) = sup_t |G(t, s)| / (1 + t) = s / (1 + s), attained at t = s.
double kernel_weight_sup(double s);

/// K = sup_t (|A| + |B| t) / (1 + t) = max(|A|, |B|).
double boundary_weight_sup(double A, double B);

}  // namespace halfline::kernel
