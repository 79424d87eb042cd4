#include "eoconv/coupling.hpp"

#include <cmath>

#include "eoconv/constants.hpp"

namespace eoconv {

namespace {

constexpr double kGridRelTol = 1e-9;

bool close(double a, double b, double scale) {
    return std::abs(a - b) <= kGridRelTol * std::abs(scale);
}

// Compensated accumulator; the overlap sums span many orders of magnitude
// between rim cells and far-field tails.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double value) {
        const double y = value - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace

bool ProfileGrid::matches(const ProfileGrid& other) const {
    return nr == other.nr && nz == other.nz && close(r0, other.r0, r0 + nr * dr) &&
           close(z0, other.z0, std::abs(z0) + nz * dz) && close(dr, other.dr, dr) &&
           close(dz, other.dz, dz);
}

double cylindrical_norm(const FieldProfile& profile) {
    profile.validate();
    const double cell = profile.grid.dr * profile.grid.dz;
    KahanSum acc;
    for (std::size_t i = 0; i < profile.grid.nr; ++i) {
        const double r = profile.grid.r_at(i);
        for (std::size_t j = 0; j < profile.grid.nz; ++j)
            acc.add(std::norm(profile.at(i, j)) * r);
    }
    return kTwoPi * acc.sum * cell;
}

std::complex<double> cylindrical_overlap(const FieldProfile& a, const FieldProfile& b,
                                         const FieldProfile& weight) {
    a.validate();
    b.validate();
    weight.validate();
    if (!a.grid.matches(b.grid) || !a.grid.matches(weight.grid))
        throw GridMismatch("overlap requires all profiles on one grid");
    const double cell = a.grid.dr * a.grid.dz;
    KahanSum re;
    KahanSum im;
    for (std::size_t i = 0; i < a.grid.nr; ++i) {
        const double r = a.grid.r_at(i);
        for (std::size_t j = 0; j < a.grid.nz; ++j) {
            const std::complex<double> term =
                std::conj(a.at(i, j)) * b.at(i, j) * weight.at(i, j) * r;
            re.add(term.real());
            im.add(term.imag());
        }
    }
    return std::complex<double>{re.sum, im.sum} * (kTwoPi * cell);
}

double g_from_overlap(const FieldProfile& pump, const FieldProfile& sideband,
                      const FieldProfile& mw_single_photon_field, double n_pump,
                      double n_sideband, double omega_pump, double r33) {
    if (!(n_pump > 0.0) || !(n_sideband > 0.0))
        throw DomainError("refractive indices must be > 0");
    if (!(omega_pump > 0.0)) throw DomainError("pump frequency must be > 0");
    const double norm_pump = cylindrical_norm(pump);
    const double norm_sb = cylindrical_norm(sideband);
    if (!(norm_pump > 0.0) || !(norm_sb > 0.0))
        throw ZeroNormVolume("optical envelope has zero norm on this grid");
    const std::complex<double> overlap =
        cylindrical_overlap(sideband, pump, mw_single_photon_field);
    const double e_eff = std::abs(overlap) / std::sqrt(norm_pump * norm_sb);
    return 0.5 * n_pump * n_sideband * omega_pump * r33 * e_eff;
}

double g_simplified(double refractive_index, double omega_pump, double r33,
                    double e_single_photon) {
    if (!(refractive_index > 0.0)) throw DomainError("refractive index must be > 0");
    if (!(omega_pump > 0.0)) throw DomainError("pump frequency must be > 0");
    return 0.5 * refractive_index * refractive_index * omega_pump * r33 *
           e_single_photon;
}

double single_photon_field(double omega_mw, double eps_r, double volume) {
    if (!(omega_mw > 0.0)) throw DomainError("microwave frequency must be > 0");
    if (!(eps_r > 0.0)) throw DomainError("relative permittivity must be > 0");
    if (!(volume > 0.0)) throw ZeroNormVolume("microwave mode volume must be > 0");
    return std::sqrt(kHbar * omega_mw / (2.0 * kEps0 * eps_r * volume));
}

double mode_volume_from_field(double omega_mw, double eps_r, double e_single_photon) {
    if (!(omega_mw > 0.0)) throw DomainError("microwave frequency must be > 0");
    if (!(eps_r > 0.0)) throw DomainError("relative permittivity must be > 0");
    if (!(e_single_photon > 0.0))
        throw DomainError("single-photon field must be > 0");
    return kHbar * omega_mw / (2.0 * kEps0 * eps_r * e_single_photon * e_single_photon);
}

double air_gap_factor(double thickness, double gap, double eps_r) {
    if (!(thickness > 0.0)) throw DomainError("dielectric thickness must be > 0");
    if (gap < 0.0) throw DomainError("air gap must be >= 0");
    if (!(eps_r > 0.0)) throw DomainError("relative permittivity must be > 0");
    return thickness / (thickness + eps_r * gap);
}

double rescale_g_for_thickness(double g, double thickness_from, double thickness_to) {
    if (!(thickness_from > 0.0) || !(thickness_to > 0.0))
        throw DomainError("thicknesses must be > 0");
    return g * std::sqrt(thickness_from / thickness_to);
}

FieldProfile gaussian_wgm_profile(const ProfileGrid& grid, double r_peak, double sigma_r,
                                  double sigma_z) {
    grid.validate();
    if (!(sigma_r > 0.0) || !(sigma_z > 0.0))
        throw DomainError("Gaussian widths must be > 0");
    FieldProfile profile;
    profile.grid = grid;
    profile.values.resize(grid.nr * grid.nz);
    for (std::size_t i = 0; i < grid.nr; ++i) {
        const double xr = (grid.r_at(i) - r_peak) / sigma_r;
        for (std::size_t j = 0; j < grid.nz; ++j) {
            const double xz = grid.z_at(j) / sigma_z;
            profile.at(i, j) = std::exp(-0.5 * (xr * xr + xz * xz));
        }
    }
    return profile;
}

FieldProfile uniform_profile(const ProfileGrid& grid, std::complex<double> value) {
    grid.validate();
    FieldProfile profile;
    profile.grid = grid;
    profile.values.assign(grid.nr * grid.nz, value);
    return profile;
}

} // namespace eoconv
