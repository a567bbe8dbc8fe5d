#pragma once

#include <span>
#include <vector>

namespace collopt {

/// Real part reconstructed from the imaginary part of a function analytic in
/// the upper half plane:
///   re(x_k) = (1/pi) PV int im(y) / (y - x_k) dy
/// over the sampled window. `grid` must be uniform and strictly increasing.
/// The singular point is removed by subtracting im(x_k), so the remaining
/// integrand is smooth and integrated with the trapezoid rule.
std::vector<double> kramers_kronig_real_part(std::span<const double> grid,
                                             std::span<const double> im,
                                             std::span<const std::size_t> at);

} // namespace collopt
