#include "mmt/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mmt/errors.hpp"
#include "mmt/quadrature.hpp"

namespace mmt {

namespace {

double wedge_mass(const UtilityDensity& d) {
    return integrate([&](double u1) { return d.column_mass(u1, u1, d.upper()); }, 0.0, d.upper(),
                     1e-8);
}

} // namespace

UtilityDensity UtilityDensity::uniform(double upper) {
    if (!(upper > 0.0)) throw InvalidInputError("density: upper bound must be > 0");
    UtilityDensity d;
    d.kind_ = Kind::Uniform;
    d.upper_ = upper;
    d.scale_ = 2.0 / (upper * upper);
    d.bound_ = d.scale_;
    return d;
}

UtilityDensity UtilityDensity::tabulated(std::vector<double> u1_axis, std::vector<double> u2_axis,
                                         std::vector<double> values, double upper) {
    if (!(upper > 0.0)) throw InvalidInputError("density: upper bound must be > 0");
    if (u1_axis.size() < 2 || u2_axis.size() < 2)
        throw InvalidInputError("density: tabulated grid needs at least 2 points per axis");
    if (values.size() != u1_axis.size() * u2_axis.size())
        throw InvalidInputError("density: tabulated grid size mismatch");
    if (!std::is_sorted(u1_axis.begin(), u1_axis.end()) ||
        !std::is_sorted(u2_axis.begin(), u2_axis.end()))
        throw InvalidInputError("density: tabulated axes must be sorted");
    for (double v : values)
        if (v < 0.0 || !std::isfinite(v))
            throw InvalidInputError("density: tabulated values must be finite and >= 0");

    UtilityDensity d;
    d.kind_ = Kind::Tabulated;
    d.upper_ = upper;
    d.axis1_ = std::move(u1_axis);
    d.axis2_ = std::move(u2_axis);
    d.values_ = std::move(values);
    d.scale_ = 1.0;
    const double m = wedge_mass(d);
    if (!(m > 0.0)) throw InvalidInputError("density: tabulated density has zero wedge mass");
    d.scale_ = 1.0 / m;
    d.bound_ = *std::max_element(d.values_.begin(), d.values_.end()) * d.scale_;
    return d;
}

UtilityDensity UtilityDensity::custom(std::function<double(double, double)> fn, double upper,
                                      bool validate) {
    if (!(upper > 0.0)) throw InvalidInputError("density: upper bound must be > 0");
    UtilityDensity d;
    d.kind_ = Kind::Custom;
    d.upper_ = upper;
    d.fn_ = std::move(fn);
    d.scale_ = 1.0;
    if (validate) {
        const double m = wedge_mass(d);
        if (std::fabs(m - 1.0) > 1e-6)
            throw InvalidInputError("density: custom density integrates to " + std::to_string(m) +
                                    " over the wedge, expected 1");
    }
    // Crude sup estimate on a grid; only used to seed rejection sampling.
    double bound = 0.0;
    const int K = 256;
    for (int i = 0; i <= K; ++i)
        for (int j = i; j <= K; ++j)
            bound = std::max(bound, d.raw(upper * i / K, upper * j / K));
    d.bound_ = bound * 1.5 + 1e-12;
    return d;
}

UtilityDensity UtilityDensity::from_csv(const std::string& path, double upper) {
    std::ifstream in(path);
    if (!in) throw ParseError("density: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("density: empty file " + path);
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(c); }),
                s.end());
        return s;
    };
    if (strip(line) != "u1,u2,f")
        throw ParseError("density: " + path + " must start with header 'u1,u2,f'");

    std::vector<double> u1s, u2s, fs;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(row, cell, ','))
                throw ParseError("density: " + path + ":" + std::to_string(lineno) +
                                 ": expected 3 fields");
            try {
                vals[k] = std::stod(cell);
            } catch (const std::exception&) {
                throw ParseError("density: " + path + ":" + std::to_string(lineno) +
                                 ": bad number '" + cell + "'");
            }
        }
        u1s.push_back(vals[0]);
        u2s.push_back(vals[1]);
        fs.push_back(vals[2]);
    }
    if (fs.empty()) throw ParseError("density: " + path + " has no data rows");

    std::vector<double> axis1(u1s), axis2(u2s);
    std::sort(axis1.begin(), axis1.end());
    axis1.erase(std::unique(axis1.begin(), axis1.end()), axis1.end());
    std::sort(axis2.begin(), axis2.end());
    axis2.erase(std::unique(axis2.begin(), axis2.end()), axis2.end());
    if (axis1.size() * axis2.size() != fs.size())
        throw ParseError("density: " + path + " is not a full regular grid");

    std::vector<double> grid(fs.size(), -1.0);
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const std::size_t i =
            std::lower_bound(axis1.begin(), axis1.end(), u1s[k]) - axis1.begin();
        const std::size_t j =
            std::lower_bound(axis2.begin(), axis2.end(), u2s[k]) - axis2.begin();
        grid[i * axis2.size() + j] = fs[k];
    }
    if (std::any_of(grid.begin(), grid.end(), [](double v) { return v < 0.0; }))
        throw ParseError("density: " + path + " has duplicate or missing grid nodes");
    return tabulated(std::move(axis1), std::move(axis2), std::move(grid), upper);
}

double UtilityDensity::raw(double u1, double u2) const {
    switch (kind_) {
    case Kind::Uniform:
        return 1.0;
    case Kind::Custom:
        return fn_(u1, u2);
    case Kind::Tabulated: {
        if (u1 < axis1_.front() || u1 > axis1_.back() || u2 < axis2_.front() ||
            u2 > axis2_.back())
            return 0.0;
        auto cell = [](const std::vector<double>& axis, double x) {
            std::size_t i = std::upper_bound(axis.begin(), axis.end(), x) - axis.begin();
            if (i == 0) return std::size_t(0);
            if (i >= axis.size()) return axis.size() - 2;
            return i - 1;
        };
        const std::size_t i = cell(axis1_, u1);
        const std::size_t j = cell(axis2_, u2);
        const double x0 = axis1_[i], x1 = axis1_[i + 1];
        const double y0 = axis2_[j], y1 = axis2_[j + 1];
        const double tx = (u1 - x0) / (x1 - x0);
        const double ty = (u2 - y0) / (y1 - y0);
        const std::size_t w = axis2_.size();
        const double f00 = values_[i * w + j], f01 = values_[i * w + j + 1];
        const double f10 = values_[(i + 1) * w + j], f11 = values_[(i + 1) * w + j + 1];
        return (1 - tx) * ((1 - ty) * f00 + ty * f01) + tx * ((1 - ty) * f10 + ty * f11);
    }
    }
    return 0.0;
}

double UtilityDensity::operator()(double u1, double u2) const {
    if (u1 < 0.0 || u2 < u1 || u2 > upper_) return 0.0;
    return scale_ * raw(u1, u2);
}

double UtilityDensity::column_mass(double u1, double lo, double hi) const {
    if (u1 < 0.0 || u1 > upper_) return 0.0;
    lo = std::max(lo, u1);
    hi = std::min(hi, upper_);
    if (hi <= lo) return 0.0;
    if (kind_ == Kind::Uniform) return scale_ * (hi - lo);
    return integrate([&](double u2) { return (*this)(u1, u2); }, lo, hi, 1e-9);
}

double UtilityDensity::tail_mass_u1(double a) const {
    a = std::max(a, 0.0);
    if (a >= upper_) return 0.0;
    if (kind_ == Kind::Uniform) {
        const double w = upper_ - a;
        return w * w / (upper_ * upper_);
    }
    return integrate([&](double u1) { return column_mass(u1, u1, upper_); }, a, upper_, 1e-8);
}

double UtilityDensity::mass() const { return kind_ == Kind::Uniform ? 1.0 : tail_mass_u1(0.0); }

std::pair<double, double> UtilityDensity::sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (kind_ == Kind::Uniform) {
        // Marginal of U1 on the wedge is 2(U-u)/U^2; invert its CDF, then U2
        // is uniform on [U1, U].
        const double u1 = upper_ * (1.0 - std::sqrt(1.0 - unit(rng)));
        const double u2 = u1 + (upper_ - u1) * unit(rng);
        return {u1, u2};
    }
    // 10^4 consecutive rejections puts the acceptance rate below ~1e-4.
    const int kWindow = 10000;
    for (int tries = 0; tries < kWindow; ++tries) {
        const double u1 = upper_ * unit(rng);
        const double u2 = upper_ * unit(rng);
        if (u2 < u1) continue;
        const double y = bound_ * unit(rng);
        if (y < (*this)(u1, u2)) return {u1, u2};
    }
    throw EfficiencyError("density: rejection sampling acceptance rate below 1e-4");
}

} // namespace mmt
