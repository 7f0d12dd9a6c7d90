#include "odikit/geometry.hpp"

#include <cmath>

namespace odikit::geom {

double wrap_longitude(double theta) {
    double t = std::fmod(theta + kPi, 2.0 * kPi);
    if (t <= 0.0) t += 2.0 * kPi;
    return t - kPi;
}

SphericalCoord make_spherical(double theta, double phi) {
    auto s = try_make_spherical(theta, phi);
    if (!s) throw DomainError("latitude out of [-pi/2, pi/2]");
    return *s;
}

std::optional<SphericalCoord> try_make_spherical(double theta, double phi) {
    if (!(std::fabs(phi) <= kPi / 2.0)) return std::nullopt;  // also rejects NaN
    return SphericalCoord{wrap_longitude(theta), phi};
}

ProjectionSpec ProjectionSpec::erp(int height, int width) {
    ProjectionSpec spec;
    spec.kind = ProjectionKind::Erp;
    spec.height = height;
    spec.width = width;
    spec.validate();
    return spec;
}

ProjectionSpec ProjectionSpec::fisheye(int diameter, double aperture,
                                       double rot_theta, double rot_phi) {
    ProjectionSpec spec;
    spec.kind = ProjectionKind::Fisheye;
    spec.height = diameter;
    spec.width = diameter;
    spec.fisheye_aperture = aperture;
    spec.rot_theta = rot_theta;
    spec.rot_phi = rot_phi;
    spec.validate();
    return spec;
}

ProjectionSpec ProjectionSpec::perspective(int height, int width, double fov,
                                           double view_theta, double view_phi) {
    ProjectionSpec spec;
    spec.kind = ProjectionKind::Perspective;
    spec.height = height;
    spec.width = width;
    spec.fov = fov;
    spec.view_theta = view_theta;
    spec.view_phi = view_phi;
    spec.validate();
    return spec;
}

void ProjectionSpec::validate() const {
    if (width <= 0 || height <= 0) throw ConfigError("raster dimensions must be positive");
    switch (kind) {
        case ProjectionKind::Erp:
            if (width != 2 * height) throw ConfigError("ERP raster needs width == 2*height");
            break;
        case ProjectionKind::Fisheye:
            if (width != height) throw ConfigError("fisheye raster must be square");
            if (!(fisheye_aperture > 0.0 && fisheye_aperture < 2.0 * kPi))
                throw ConfigError("fisheye aperture out of (0, 2*pi)");
            break;
        case ProjectionKind::Perspective:
            if (!(fov > 0.0 && fov < kPi)) throw ConfigError("perspective fov out of (0, pi)");
            break;
    }
}

PlaneCoord erp_from_sphere(const SphericalCoord& s) { return {s.theta, s.phi}; }

SphericalCoord sphere_from_erp(const PlaneCoord& p) { return make_spherical(p.x, p.y); }

Projected fisheye_from_sphere(const SphericalCoord& s, const ProjectionSpec& spec) {
    const double theta_r = wrap_longitude(s.theta + spec.rot_theta);
    const double phi_r = s.phi + spec.rot_phi;
    const double rho = 2.0 * (kPi / 2.0 - phi_r) / spec.fisheye_aperture;
    Projected out;
    out.point = {rho * std::cos(theta_r), rho * std::sin(theta_r)};
    if (rho < 0.0 || rho > 1.0) out.status = ProjectStatus::OutOfHemisphere;
    return out;
}

namespace {

std::optional<SphericalCoord> fisheye_inverse(const PlaneCoord& p, const ProjectionSpec& spec,
                                              double max_rho) {
    const double rho = std::hypot(p.x, p.y);
    if (rho > max_rho) return std::nullopt;
    const double theta_r = (rho > 0.0) ? std::atan2(p.y, p.x) : 0.0;
    const double phi_r = kPi / 2.0 - spec.fisheye_aperture * rho / 2.0;
    return try_make_spherical(theta_r - spec.rot_theta, phi_r - spec.rot_phi);
}

}  // namespace

std::optional<SphericalCoord> sphere_from_fisheye(const PlaneCoord& p,
                                                  const ProjectionSpec& spec) {
    return fisheye_inverse(p, spec, 1.0);
}

std::optional<SphericalCoord> sphere_from_fisheye_extended(const PlaneCoord& p,
                                                           const ProjectionSpec& spec) {
    // The equidistant formula stays meaningful until the shifted latitude
    // leaves [-pi/2, pi/2]; fisheye_inverse rejects anything past that.
    const double rho_limit = 2.0 * kPi / spec.fisheye_aperture;
    return fisheye_inverse(p, spec, rho_limit);
}

Projected perspective_from_sphere(const SphericalCoord& s, const ProjectionSpec& spec) {
    const double theta_c = wrap_longitude(s.theta - spec.view_theta);
    const double phi_c = s.phi - spec.view_phi;
    Projected out;
    if (std::fabs(theta_c) >= kPi / 2.0 || std::fabs(phi_c) >= kPi / 2.0) {
        out.status = ProjectStatus::BehindCamera;
        return out;
    }
    const double x = std::tan(theta_c);
    const double y = std::tan(phi_c) / std::cos(theta_c);
    out.point = {x, y};
    const double half = std::tan(spec.fov / 2.0);
    if (std::fabs(x) > half || std::fabs(y) > half) out.status = ProjectStatus::OutsideFov;
    return out;
}

std::optional<SphericalCoord> sphere_from_perspective(const PlaneCoord& p,
                                                      const ProjectionSpec& spec) {
    const double theta_c = std::atan(p.x);
    const double phi_c = std::atan(p.y * std::cos(theta_c));
    return try_make_spherical(theta_c + spec.view_theta, phi_c + spec.view_phi);
}

double stretch_erp(const PlaneCoord& p) {
    if (!(std::fabs(p.y) <= kPi / 2.0)) throw DomainError("ERP latitude out of range");
    return std::cos(p.y);
}

double stretch_fisheye(const PlaneCoord& p, const ProjectionSpec& spec) {
    const double a = spec.fisheye_aperture;
    const double rho = std::hypot(p.x, p.y);
    if (rho > 1.0) throw DomainError("point outside unit disk");
    if (rho < 1e-9) {
        if (spec.rot_phi == 0.0) return a * a / (kPi * kPi);  // analytic limit
        throw SingularJacobian("rotated fisheye stretch diverges at the disk center");
    }
    // Original latitude of the point: phi = (pi/2 - (A/2) rho) - rot_phi.
    const double phi = kPi / 2.0 - a * rho / 2.0 - spec.rot_phi;
    return 2.0 * a / (kPi * kPi) * std::cos(phi) / rho;
}

double stretch_perspective(const PlaneCoord& p) {
    return std::pow(1.0 + p.x * p.x + p.y * p.y, -1.5);
}

double stretch_erp_over_fisheye(double phi) {
    if (!(std::fabs(phi) <= kPi / 2.0)) throw DomainError("latitude out of range");
    return kPi / 2.0 - std::fabs(phi);
}

double numeric_stretch(const SphereToPlane& map, const SphericalCoord& s, double h) {
    if (!(h > 0.0 && h <= 1e-3)) throw DomainError("step size out of (0, 1e-3]");
    const auto at = [&](double dt, double dp) {
        return map(SphericalCoord{s.theta + dt, s.phi + dp});
    };
    const PlaneCoord tp = at(h, 0.0), tm = at(-h, 0.0);
    const PlaneCoord pp = at(0.0, h), pm = at(0.0, -h);
    const double j00 = (tp.x - tm.x) / (2.0 * h);
    const double j01 = (pp.x - pm.x) / (2.0 * h);
    const double j10 = (tp.y - tm.y) / (2.0 * h);
    const double j11 = (pp.y - pm.y) / (2.0 * h);
    const double det = std::fabs(j00 * j11 - j01 * j10);
    if (det < 1e-12) throw SingularJacobian("finite-difference Jacobian is singular");
    return std::cos(s.phi) / det;
}

PlaneCoord plane_from_pixel(const ProjectionSpec& spec, double row, double col) {
    const double m = row + 0.5;
    const double n = col + 0.5;
    switch (spec.kind) {
        case ProjectionKind::Erp:
            return {n / spec.width * 2.0 * kPi - kPi, kPi / 2.0 - m / spec.height * kPi};
        case ProjectionKind::Fisheye:
            return {2.0 * n / spec.width - 1.0, 1.0 - 2.0 * m / spec.height};
        case ProjectionKind::Perspective: {
            const double half = std::tan(spec.fov / 2.0);
            return {(2.0 * n / spec.width - 1.0) * half, (1.0 - 2.0 * m / spec.height) * half};
        }
    }
    return {};
}

PixelCoord pixel_from_plane(const ProjectionSpec& spec, const PlaneCoord& p) {
    switch (spec.kind) {
        case ProjectionKind::Erp:
            return {(kPi / 2.0 - p.y) / kPi * spec.height - 0.5,
                    (p.x + kPi) / (2.0 * kPi) * spec.width - 0.5};
        case ProjectionKind::Fisheye:
            return {(1.0 - p.y) / 2.0 * spec.height - 0.5, (p.x + 1.0) / 2.0 * spec.width - 0.5};
        case ProjectionKind::Perspective: {
            const double half = std::tan(spec.fov / 2.0);
            return {(1.0 - p.y / half) / 2.0 * spec.height - 0.5,
                    (p.x / half + 1.0) / 2.0 * spec.width - 0.5};
        }
    }
    return {};
}

}  // namespace odikit::geom
