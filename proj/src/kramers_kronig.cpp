#include "collopt/kramers_kronig.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace collopt {

std::vector<double> kramers_kronig_real_part(std::span<const double> grid,
                                             std::span<const double> im,
                                             std::span<const std::size_t> at)
{
    const std::size_t n = grid.size();
    if (n < 3 || im.size() != n)
        throw std::invalid_argument("kramers_kronig_real_part: need >= 3 matching samples");
    const double h = (grid[n - 1] - grid[0]) / static_cast<double>(n - 1);
    const double lo = grid.front();
    const double hi = grid.back();

    std::vector<double> out;
    out.reserve(at.size());
    for (std::size_t k : at) {
        if (k == 0 || k + 1 >= n)
            throw std::out_of_range("kramers_kronig_real_part: evaluation point must be interior");
        const double x = grid[k];
        const double fk = im[k];
        const double slope = (im[k + 1] - im[k - 1]) / (2.0 * h);

        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double g = (j == k) ? slope : (im[j] - fk) / (grid[j] - x);
            sum += (j == 0 || j + 1 == n) ? 0.5 * g : g;
        }
        const double pv = h * sum + fk * std::log((hi - x) / (x - lo));
        out.push_back(pv / std::numbers::pi);
    }
    return out;
}

} // namespace collopt
