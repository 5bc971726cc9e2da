#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "otima/error.hpp"

namespace otima::oracle {

template <typename F>
QuadratureResult periodic_mean(F&& f, const QuadratureSpec& spec)
{
    spec.validate();
    std::vector<double> nodes;
    std::vector<double> weights;
    const auto level = [&](int m) {
        complex sum{};
        if (spec.scheme == Scheme::gauss_legendre) {
            gauss_legendre(m, nodes, weights);
            for (int i = 0; i < m; ++i) {
                sum += 0.5 * weights[i] * f(0.5 * (nodes[i] + 1.0));
            }
            return sum;
        }
        for (int i = 0; i < m; ++i) {
            sum += f(static_cast<double>(i) / m);
        }
        return sum / static_cast<double>(m);
    };
    int m = spec.count;
    complex previous = level(m);
    while (m < spec.max_count) {
        m *= 2;
        const complex current = level(m);
        const double change = std::abs(current - previous);
        if (change <= spec.tolerance * std::max(1.0, std::abs(current))) {
            return {current, m, change};
        }
        previous = current;
    }
    std::ostringstream msg;
    msg << "periodic quadrature not converged at " << m << " abscissae";
    throw PrecisionError(msg.str());
}

}  // namespace otima::oracle
