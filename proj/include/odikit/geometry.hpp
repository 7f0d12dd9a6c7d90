#pragma once

#include <functional>
#include <optional>

#include "odikit/errors.hpp"

// Coordinate conventions used throughout:
//   theta: longitude in radians, wrapped into (-pi, pi].
//   phi:   latitude in radians, in [-pi/2, pi/2]; +pi/2 is the north pole.
//   ERP rasters are north-up: image row 0 holds the highest latitudes, and
//   pixel (m, n) of an M x N raster is centered at
//     phi = pi/2 - (m + 0.5)/M * pi,   theta = (n + 0.5)/N * 2*pi - pi.
//   The same half-pixel-center rule applies to fisheye disks (unit disk
//   inscribed in a square raster, +y toward row 0) and perspective planes
//   (half-extent tan(fov/2) per axis, +y toward row 0).

namespace odikit::geom {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into (-pi, pi].
double wrap_longitude(double theta);

struct SphericalCoord {
    double theta = 0.0;  // longitude, (-pi, pi]
    double phi = 0.0;    // latitude, [-pi/2, pi/2]
};

/// Builds a SphericalCoord, wrapping theta; throws DomainError if |phi| > pi/2.
SphericalCoord make_spherical(double theta, double phi);

/// Non-throwing variant used in per-pixel loops.
std::optional<SphericalCoord> try_make_spherical(double theta, double phi);

struct PlaneCoord {
    double x = 0.0;
    double y = 0.0;
};

enum class ProjectionKind { Erp, Fisheye, Perspective };

struct ProjectionSpec {
    ProjectionKind kind = ProjectionKind::Erp;
    int width = 0;
    int height = 0;

    // Fisheye only: aperture in (0, 2*pi); rotation aligning this fisheye to
    // the horizontally spliced one, applied as angular shifts
    // (theta*, phi*) = (theta + rot_theta, phi + rot_phi).
    double fisheye_aperture = kPi;
    double rot_theta = 0.0;
    double rot_phi = 0.0;

    // Perspective only: full field of view in (0, pi) and view direction.
    double fov = kPi / 2.0;
    double view_theta = 0.0;
    double view_phi = 0.0;

    static ProjectionSpec erp(int height, int width);
    static ProjectionSpec fisheye(int diameter, double aperture,
                                  double rot_theta = 0.0, double rot_phi = 0.0);
    static ProjectionSpec perspective(int height, int width, double fov,
                                      double view_theta = 0.0, double view_phi = 0.0);

    /// Throws ConfigError on an invariant breach (ERP width != 2*height,
    /// aperture/fov out of range, non-positive dimensions).
    void validate() const;
};

/// Outcome of a forward projection. The plane coordinate is always the raw
/// formula result; `status` tells whether the point is inside the
/// projection's nominal domain. Perspective points that project fine but
/// land beyond tan(fov/2) carry OutsideFov (the coordinate stays usable).
enum class ProjectStatus { Ok, OutOfHemisphere, BehindCamera, OutsideFov };

struct Projected {
    PlaneCoord point;
    ProjectStatus status = ProjectStatus::Ok;

    bool ok() const { return status == ProjectStatus::Ok; }
};

// --- ERP <-> sphere (total in both directions) ---
PlaneCoord erp_from_sphere(const SphericalCoord& s);
SphericalCoord sphere_from_erp(const PlaneCoord& p);

// --- Fisheye <-> sphere ---
// Forward: theta* = theta + rot_theta, phi* = phi + rot_phi, then
// rho = 2*(pi/2 - phi*)/aperture, (x, y) = rho * (cos theta*, sin theta*).
// Status is OutOfHemisphere when rho falls outside [0, 1].
Projected fisheye_from_sphere(const SphericalCoord& s, const ProjectionSpec& spec);

/// Strict inverse: rejects rho > 1 and shifted latitudes outside [-pi/2, pi/2].
std::optional<SphericalCoord> sphere_from_fisheye(const PlaneCoord& p,
                                                  const ProjectionSpec& spec);

/// Evaluates the equidistant map past the nominal disk edge (rho > 1) for as
/// long as the latitude stays valid. Used to fill the corners of square disk
/// rasters with real content so downstream kernels have support there.
std::optional<SphericalCoord> sphere_from_fisheye_extended(const PlaneCoord& p,
                                                           const ProjectionSpec& spec);

// --- Perspective <-> sphere ---
// Camera frame: theta* = theta - view_theta, phi* = phi - view_phi, then
// x = tan(theta*), y = tan(phi*)/cos(theta*).
// BehindCamera when |theta*| >= pi/2 or |phi*| >= pi/2.
Projected perspective_from_sphere(const SphericalCoord& s, const ProjectionSpec& spec);

std::optional<SphericalCoord> sphere_from_perspective(const PlaneCoord& p,
                                                      const ProjectionSpec& spec);

// --- Stretching ratios ---
// K measures spherical surface area per plane area, normalized per
// projection so that the classic closed forms hold:
//   K_erp(y)          = cos(y)
//   K_fisheye         = (2*A/pi^2) * cos(pi/2 - (A/2)*rho - rot_phi) / rho
//                       (equals (2/pi) sin((pi/2) rho)/rho for A = pi,
//                        rot_phi = 0; limit A^2/pi^2 at rho -> 0)
//   K_perspective     = (1 + x^2 + y^2)^(-3/2)
// The fisheye form is the density of the polar-angle scaling of the disk
// (radius pi/2 rather than 1); numeric verification against a Jacobian must
// therefore scale fisheye plane coordinates by pi/2.

/// Throws DomainError when |p.y| > pi/2.
double stretch_erp(const PlaneCoord& p);

/// Throws DomainError outside the unit disk; SingularJacobian below
/// rho = 1e-9 when the rotated form diverges (rot_phi != 0).
double stretch_fisheye(const PlaneCoord& p, const ProjectionSpec& spec);

double stretch_perspective(const PlaneCoord& p);

/// Ratio K_erp / K_fisheye at matching sphere points for the horizontally
/// spliced A = pi pair: pi/2 - |phi|.
double stretch_erp_over_fisheye(double phi);

/// Central-finite-difference evaluation of cos(phi)/|J| for an arbitrary
/// sphere->plane map; the independent oracle for the closed forms above.
/// Throws SingularJacobian when |J| < 1e-12, DomainError for h outside
/// (0, 1e-3].
using SphereToPlane = std::function<PlaneCoord(const SphericalCoord&)>;
double numeric_stretch(const SphereToPlane& map, const SphericalCoord& s, double h);

// --- Pixel grid <-> plane (half-pixel centers) ---

/// Plane coordinate of the center of pixel (row, col) on this raster.
PlaneCoord plane_from_pixel(const ProjectionSpec& spec, double row, double col);

/// Fractional pixel position of a plane coordinate; integers are centers.
struct PixelCoord {
    double row = 0.0;
    double col = 0.0;
};
PixelCoord pixel_from_plane(const ProjectionSpec& spec, const PlaneCoord& p);

}  // namespace odikit::geom
