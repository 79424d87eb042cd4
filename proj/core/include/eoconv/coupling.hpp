#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "eoconv/errors.hpp"
#include "eoconv/modes.hpp"

// Vacuum electro-optic coupling rate from field geometry: mode overlap on an
// axisymmetric (r, z) cross-section, the single-photon microwave field, and
// the selection rule linking azimuthal indices.
//
// Angular frequencies [rad/s] and SI fields/volumes throughout.

namespace eoconv {

// Cell-centred uniform grid over an axisymmetric cross-section.  Samples sit
// at r0 + (i + 1/2) dr, z0 + (j + 1/2) dz, so plain cell sums realise the
// midpoint rule (superalgebraically accurate for smooth decaying profiles).
struct ProfileGrid {
    double r0 = 0.0;     // inner radius of the domain [m]
    double z0 = 0.0;     // lower axial bound [m]
    double dr = 0.0;     // radial cell width [m]
    double dz = 0.0;     // axial cell width [m]
    std::size_t nr = 0;  // radial cell count
    std::size_t nz = 0;  // axial cell count

    [[nodiscard]] double r_at(std::size_t i) const { return r0 + (i + 0.5) * dr; }
    [[nodiscard]] double z_at(std::size_t j) const { return z0 + (j + 0.5) * dz; }

    void validate() const {
        if (!(dr > 0.0) || !(dz > 0.0)) throw DomainError("grid cell widths must be > 0");
        if (nr < 2 || nz < 2) throw DomainError("grid needs at least 2x2 cells");
        if (r0 < 0.0) throw DomainError("grid inner radius must be >= 0");
    }

    [[nodiscard]] bool matches(const ProfileGrid& other) const;
};

// Scalar field sampled on a grid, row-major with z fastest.
struct FieldProfile {
    ProfileGrid grid;
    std::vector<std::complex<double>> values;

    [[nodiscard]] std::complex<double>& at(std::size_t i, std::size_t j) {
        return values[i * grid.nz + j];
    }
    [[nodiscard]] const std::complex<double>& at(std::size_t i, std::size_t j) const {
        return values[i * grid.nz + j];
    }

    void validate() const {
        grid.validate();
        if (values.size() != grid.nr * grid.nz)
            throw GridMismatch("profile value count does not match grid size");
    }
};

// 2*pi * integral of f(r, z) * r dr dz via the midpoint rule with compensated
// (Kahan) accumulation.
[[nodiscard]] double cylindrical_norm(const FieldProfile& profile);

// 2*pi * integral of conj(a) * b * weight * r dr dz; all three share one grid.
[[nodiscard]] std::complex<double> cylindrical_overlap(const FieldProfile& a,
                                                       const FieldProfile& b,
                                                       const FieldProfile& weight);

// Coupling rate from the pump/sideband mode envelopes and the single-photon
// microwave field sampled on the same cross-section [rad/s]:
//   g = (n_pump * n_sb * omega_pump * r33 / 2) * <E_mw>,
// with <E_mw> the microwave field averaged over the normalised optical
// overlap.  For identical envelopes and a uniform microwave field this
// reduces exactly to g_simplified.
[[nodiscard]] double g_from_overlap(const FieldProfile& pump, const FieldProfile& sideband,
                                    const FieldProfile& mw_single_photon_field,
                                    double n_pump, double n_sideband, double omega_pump,
                                    double r33);

// Uniform-field limit: g = n^2 * omega_pump * r33 * e_single_photon / 2 [rad/s].
[[nodiscard]] double g_simplified(double refractive_index, double omega_pump, double r33,
                                  double e_single_photon);

// Vacuum field of one microwave photon confined to `volume` in a dielectric
// with relative permittivity eps_r: sqrt(hbar * omega / (2 eps0 eps_r V)) [V/m].
[[nodiscard]] double single_photon_field(double omega_mw, double eps_r, double volume);

// Inverse of single_photon_field: the confinement volume consistent with a
// measured single-photon field [m^3].
[[nodiscard]] double mode_volume_from_field(double omega_mw, double eps_r,
                                            double e_single_photon);

// Series-capacitor reduction of the field inside a dielectric of thickness
// `thickness` when an air gap `gap` separates it from the electrode:
// factor = thickness / (thickness + eps_r * gap), dimensionless in (0, 1].
[[nodiscard]] double air_gap_factor(double thickness, double gap, double eps_r);

// g scales with the inverse square root of the microwave confinement volume;
// at fixed cross-section that is the disc thickness.
[[nodiscard]] double rescale_g_for_thickness(double g, double thickness_from,
                                             double thickness_to);

// Azimuthal selection rule: sum-frequency and difference-frequency partners
// of a pump with index m_pump driven at microwave index m_mw.
[[nodiscard]] inline std::pair<std::int64_t, std::int64_t>
phase_matched_indices(std::int64_t m_pump, std::int64_t m_mw) {
    return {m_pump + m_mw, m_pump - m_mw};
}

[[nodiscard]] inline bool is_phase_matched(std::int64_t m_pump, std::int64_t m_sideband,
                                           std::int64_t m_mw, Sideband which) {
    return which == Sideband::Plus ? m_sideband == m_pump + m_mw
                                   : m_sideband == m_pump - m_mw;
}

// Gaussian whispering-gallery envelope centred on the rim at (r_peak, 0).
[[nodiscard]] FieldProfile gaussian_wgm_profile(const ProfileGrid& grid, double r_peak,
                                                double sigma_r, double sigma_z);

// Spatially uniform field (e.g. a parallel-plate microwave field).
[[nodiscard]] FieldProfile uniform_profile(const ProfileGrid& grid,
                                           std::complex<double> value);

} // namespace eoconv
