#pragma once

#include <vector>

namespace isotorus {

// Shape-preserving piecewise cubic (Fritsch-Carlson slopes). Works on any
// data; where the data are monotone the interpolant is monotone too.
class PchipInterpolant {
public:
    PchipInterpolant() = default;
    PchipInterpolant(std::vector<double> x, std::vector<double> y);

    double operator()(double xq) const;
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_; // nodes, values, node slopes
};

} // namespace isotorus
