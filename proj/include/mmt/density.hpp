#pragma once

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mmt {

// Joint density of the buyer population's model utilities (U1, U2),
// supported on the wedge {0 <= U1 <= U2 <= U}. The uniform kind carries the
// 2/U^2 wedge normalization.
class UtilityDensity {
public:
    enum class Kind { Uniform, Tabulated, Custom };

    static UtilityDensity uniform(double upper);
    // CSV with header "u1,u2,f" and samples on a regular grid; values are
    // bilinearly interpolated and rescaled so the wedge mass is 1.
    static UtilityDensity from_csv(const std::string& path, double upper);
    static UtilityDensity tabulated(std::vector<double> u1_axis, std::vector<double> u2_axis,
                                    std::vector<double> values, double upper);
    // fn must already integrate to 1 over the wedge (checked to 1e-6 unless
    // validate is false, which test fixtures use for degenerate densities).
    static UtilityDensity custom(std::function<double(double, double)> fn, double upper,
                                 bool validate = true);

    Kind kind() const { return kind_; }
    double upper() const { return upper_; }

    // Density value; zero outside the wedge.
    double operator()(double u1, double u2) const;

    // Integral of the density over {u1} x [lo, hi] clipped to the wedge.
    // Closed form for the uniform kind, quadrature otherwise.
    double column_mass(double u1, double lo, double hi) const;

    // Mass of {U1 >= a}.
    double tail_mass_u1(double a) const;

    // Total wedge mass (1 after normalization, up to quadrature tolerance).
    double mass() const;

    // Draw one point. Inverse CDF for the uniform kind, rejection sampling
    // otherwise; throws EfficiencyError when the acceptance rate collapses.
    std::pair<double, double> sample(std::mt19937_64& rng) const;

private:
    UtilityDensity() = default;

    double raw(double u1, double u2) const;

    Kind kind_ = Kind::Uniform;
    double upper_ = 1.0;
    double scale_ = 1.0; // normalization applied on top of raw values
    double bound_ = 0.0; // sup of the normalized density, for rejection sampling
    std::function<double(double, double)> fn_;
    std::vector<double> axis1_, axis2_, values_; // tabulated grid (row-major in u1)
};

} // namespace mmt
