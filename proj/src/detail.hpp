#pragma once

#include "hifbe/oracle.hpp"

namespace hifb {

// Stationary point of y -> <grad f(x), y - x> + (1/(p*gamma))|x-y|^p.
Vec forward_value_closed_form_point(const SmoothOracle& f, const Vec& x, double gamma,
                                    double p);

}  // namespace hifb
