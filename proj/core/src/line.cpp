#include "fidmem/line.hpp"

#include <numbers>

namespace fidmem {

namespace {
constexpr double kLn2 = 0.693147180559945309417;
constexpr double kPi = std::numbers::pi;
} // namespace

double LineShape::density(double delta) const
{
    if (kind == LineKind::Lorentzian)
        return 1.0 / (kPi * (1.0 + delta * delta));
    return std::sqrt(kLn2 / kPi) * std::exp(-delta * delta * kLn2);
}

double LineShape::peak_density() const
{
    if (kind == LineKind::Lorentzian)
        return 1.0 / kPi;
    return std::sqrt(kLn2 / kPi);
}

double LineShape::kernel(double t) const
{
    if (kind == LineKind::Lorentzian)
        return std::exp(-std::abs(t));
    return std::exp(-t * t / (4.0 * kLn2));
}

} // namespace fidmem
