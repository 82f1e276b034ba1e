// abscat: Aharonov-Bohm scattering off a magnetic vortex in conical space.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Domain types, cone geometry, flux/spin arithmetic and the classical-region
// classification shared by every tier of the engine. All operations here are
// pure functions; values are immutable after construction and safe to share
// across threads.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "abscat/errors.hpp"

namespace abscat {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

using complexd = std::complex<double>;

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double phi) {
    double w = std::remainder(phi, two_pi);
    if (w <= -pi) w += two_pi;
    return w;
}

/// Wrap an angle to [0, 2*pi).
inline double wrap_angle_2pi(double phi) {
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

enum class SpinMode {
    Spinless,
    SpinUp,       // sigma = +1 projection on the vortex axis
    SpinDown,     // sigma = -1
    Unpolarized,  // equal-weight incoherent mixture of the two projections
};

inline const char* to_string(SpinMode s) {
    switch (s) {
        case SpinMode::Spinless: return "none";
        case SpinMode::SpinUp: return "up";
        case SpinMode::SpinDown: return "down";
        case SpinMode::Unpolarized: return "unpolarized";
    }
    return "?";
}

inline SpinMode spin_from_string(const std::string& s) {
    if (s == "none" || s == "spinless") return SpinMode::Spinless;
    if (s == "up") return SpinMode::SpinUp;
    if (s == "down") return SpinMode::SpinDown;
    if (s == "unpolarized") return SpinMode::Unpolarized;
    throw UsageError("unknown spin mode '" + s + "' (expected none|up|down|unpolarized)");
}

/// Physical scenario: flux ratio, cone deficit, core radii, spin mode.
struct ScatterConfig {
    double alpha = 0.0;  ///< flux ratio Phi/Phi_0
    double eta = 0.0;    ///< deficit parameter, eta < 1 (negative values = proficit angle)
    double r_c = 1.0;    ///< core radius
    /// Geodesic core radius; NaN means "equal to r_c" (the interior metric is
    /// unspecified, so the pure phase e^{2ik(r_c - xi_c)} defaults to 1).
    double xi_c = std::numeric_limits<double>::quiet_NaN();
    SpinMode spin = SpinMode::Spinless;

    double geodesic_radius() const { return std::isnan(xi_c) ? r_c : xi_c; }

    void validate() const {
        if (!std::isfinite(alpha)) throw DomainError("ScatterConfig: alpha must be finite");
        if (!(eta < 1.0)) throw DomainError("ScatterConfig: eta must be < 1 (cone closes at eta = 1)");
        if (!(r_c > 0.0) || !std::isfinite(r_c)) throw DomainError("ScatterConfig: core radius r_c must be > 0");
        if (!(geodesic_radius() > 0.0)) throw DomainError("ScatterConfig: geodesic core radius xi_c must be > 0");
    }
};

/// Transverse-plane kinematics. The sole kinematic parameter is the
/// transverse wavenumber k; mass, energy and axial momentum never appear
/// independently.
struct Kinematics {
    double k = 1.0;

    void validate() const {
        if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("Kinematics: wavenumber k must be > 0");
    }
};

/// Dimensionless hardness parameter k * r_c.
inline double hardness(const ScatterConfig& c, Kinematics kin) { return kin.k * c.r_c; }

enum class RegionKind { Shadow, DoubleImage, SingleImage };

inline const char* to_string(RegionKind r) {
    switch (r) {
        case RegionKind::Shadow: return "shadow";
        case RegionKind::DoubleImage: return "double-image";
        case RegionKind::SingleImage: return "single-image";
    }
    return "?";
}

/// Opening angle omega_eta = eta*pi/(1-eta) of the classical caustic/shadow
/// wedge behind the vortex. Sign matches the sign of eta.
inline double opening_angle(double eta) {
    if (!(eta < 1.0)) throw DomainError("opening_angle: eta must be < 1 (cone closes)");
    return eta * pi / (1.0 - eta);
}

/// Classical region of the direction phi (|phi| <= pi) behind the vortex.
/// The classical ray picture covers eta < 1/2 only; beyond that shadow and
/// double image alternate and the closed forms refuse the regime.
inline RegionKind classify_region(double eta, double phi) {
    if (!(eta < 0.5)) throw RegimeError("classify_region: supported for eta < 1/2 only");
    if (!(std::abs(phi) <= pi + 1e-12)) throw DomainError("classify_region: |phi| must be <= pi");
    if (eta == 0.0) return RegionKind::SingleImage;
    const double w = std::abs(opening_angle(eta));
    if (std::abs(phi) < w) return eta < 0.0 ? RegionKind::Shadow : RegionKind::DoubleImage;
    return RegionKind::SingleImage;
}

/// Canonical flux: alpha mod 1 mapped to [-1/2, 1/2). Spinless cross sections
/// in every tier are invariant under alpha -> reduce_flux(alpha) + n.
inline double reduce_flux(double alpha) {
    return alpha - std::floor(alpha + 0.5);
}

/// One spin branch of the effective flux.
struct FluxBranch {
    double alpha_eff;
    double weight;
};

/// Spin rule: the spin connection shifts the flux ratio by -sigma*eta/2 per
/// polarization; unpolarized beams are the equal-weight incoherent mixture.
inline std::vector<FluxBranch> effective_flux(const ScatterConfig& c) {
    c.validate();
    switch (c.spin) {
        case SpinMode::Spinless: return {{c.alpha, 1.0}};
        case SpinMode::SpinUp: return {{c.alpha - 0.5 * c.eta, 1.0}};
        case SpinMode::SpinDown: return {{c.alpha + 0.5 * c.eta, 1.0}};
        case SpinMode::Unpolarized:
            return {{c.alpha - 0.5 * c.eta, 0.5}, {c.alpha + 0.5 * c.eta, 0.5}};
    }
    throw Error("effective_flux: unreachable spin mode");
}

/// Flux branch of a configuration that is required to be single-branch
/// (spinless or polarized, or unpolarized in flat space where the two
/// branches coincide). Amplitude-level operations are coherent per branch.
inline double single_branch_alpha(const ScatterConfig& c) {
    const auto branches = effective_flux(c);
    if (branches.size() == 1) return branches.front().alpha_eff;
    if (branches[0].alpha_eff == branches[1].alpha_eff) return branches[0].alpha_eff;
    throw ConfigError(
        "operation is coherent per spin branch; evaluate the branches of "
        "effective_flux() separately for unpolarized beams");
}

/// Ordered list of evaluation angles.
class AngleGrid {
  public:
    explicit AngleGrid(std::vector<double> angles) : angles_(std::move(angles)) {
        if (angles_.empty()) throw ConfigError("AngleGrid: empty grid");
        for (std::size_t i = 0; i + 1 < angles_.size(); ++i)
            if (!(angles_[i] < angles_[i + 1]))
                throw ConfigError("AngleGrid: angles must be strictly increasing");
        for (double a : angles_)
            if (!std::isfinite(a)) throw ConfigError("AngleGrid: angles must be finite");
    }

    static AngleGrid uniform(double lo, double hi, std::size_t count) {
        if (count < 2) throw ConfigError("AngleGrid::uniform: need at least 2 points");
        if (!(lo < hi)) throw ConfigError("AngleGrid::uniform: need lo < hi");
        std::vector<double> a(count);
        const double h = (hi - lo) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i) a[i] = lo + static_cast<double>(i) * h;
        a.back() = hi;
        return AngleGrid(std::move(a));
    }

    const std::vector<double>& angles() const { return angles_; }
    std::size_t size() const { return angles_.size(); }
    double operator[](std::size_t i) const { return angles_[i]; }

  private:
    std::vector<double> angles_;
};

/// One scattering-amplitude sample: angle, complex amplitude, tier tag and
/// the spin branch it belongs to. `distributional` marks regulated values
/// inside the singular-direction guard of the identity kernel.
struct AmplitudeSample {
    double phi = 0.0;
    complexd f{0.0, 0.0};
    std::string tier;
    double alpha_eff = 0.0;
    double weight = 1.0;
    bool distributional = false;
};

struct XsecRow {
    double phi = 0.0;
    double value = 0.0;  ///< dsigma/dphi (length per radian)
    std::string flag = "ok";
};

/// Grid of (phi, dsigma/dphi) samples plus the grid-trapezoid integral and
/// ordered provenance metadata.
struct CrossSectionTable {
    std::string tier;
    std::vector<XsecRow> rows;
    double integrated = 0.0;
    std::vector<std::pair<std::string, std::string>> metadata;
};

inline double trapezoid_integral(const std::vector<XsecRow>& rows) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double a = std::isfinite(rows[i].value) ? rows[i].value : 0.0;
        const double b = std::isfinite(rows[i + 1].value) ? rows[i + 1].value : 0.0;
        acc += 0.5 * (a + b) * (rows[i + 1].phi - rows[i].phi);
    }
    return acc;
}

}  // namespace abscat
