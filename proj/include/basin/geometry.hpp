#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace basin {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;

enum class DomainKind { Box, Ball, All };

/// Closed convex solution space with exact projections: an axis-aligned box,
/// a Euclidean ball, or all of R^d.
class ConvexDomain {
public:
    static ConvexDomain box(Vector lower, Vector upper);
    static ConvexDomain ball(Point center, double radius);
    static ConvexDomain all(int dim);

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const Vector& lower() const { return lower_; }
    const Vector& upper() const { return upper_; }
    const Point& center() const { return center_; }
    double radius() const { return radius_; }

    /// Characteristic length used for default step sizes and tolerances.
    /// Box: largest edge; Ball: diameter; All: 1.
    double diameter_hint() const;

    /// x in the closed set X (boundary included).
    bool contains(const Point& x) const;

    /// Euclidean projection onto X; identity on members, idempotent,
    /// non-expansive.
    Point project(const Point& x) const;

    /// Projection of velocity v onto the tangent cone of X at x. Identity in
    /// the interior; componentwise clamp on active box faces; for the ball
    /// boundary v - <v,n>_+ n with outward unit normal n.
    Vector tangent_cone_project(const Point& x, const Vector& v) const;

    /// Outward unit normal at a boundary point. Defined on ball boundaries
    /// and box face interiors; throws at box corners (no unique normal).
    Vector boundary_normal(const Point& x) const;

private:
    ConvexDomain() = default;

    void check_dim(const Point& x, const char* op) const;

    DomainKind kind_ = DomainKind::All;
    int dim_ = 0;
    Vector lower_, upper_;  // Box
    Point center_;          // Ball
    double radius_ = 0.0;   // Ball
};

enum class SamplerKind { UniformOnDomain, UniformOnBox };

/// Initial-condition distribution mu. Draws are addressed as (seed, index)
/// so that parallel sampling is deterministic and order-independent.
struct InitialSampler {
    SamplerKind kind = SamplerKind::UniformOnDomain;
    std::uint64_t seed = 0;
    Vector box_lower, box_upper;  // UniformOnBox support

    static InitialSampler uniform(std::uint64_t seed);
    static InitialSampler uniform_on_box(Vector lower, Vector upper, std::uint64_t seed);

    InitialSampler with_seed(std::uint64_t s) const {
        InitialSampler out = *this;
        out.seed = s;
        return out;
    }

    /// Throws if the support is not contained in the domain (or has zero
    /// Lebesgue measure).
    void validate_support(const ConvexDomain& domain) const;

    Point sample(const ConvexDomain& domain, std::uint64_t index) const;
};

}  // namespace basin
