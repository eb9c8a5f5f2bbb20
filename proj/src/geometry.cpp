#include "basin/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "basin/rng.hpp"

namespace basin {

namespace {
// Relative slack for ball membership/boundary tests; absorbs the one-ulp
// scatter left by the radial projection.
constexpr double kBallContainSlack = 1e-12;
constexpr double kBallBoundaryBand = 1e-10;
constexpr double kBallNormalBand = 1e-9;
}  // namespace

ConvexDomain ConvexDomain::box(Vector lower, Vector upper) {
    if (lower.size() != upper.size() || lower.size() == 0)
        throw std::invalid_argument("box: lower/upper must be non-empty and of equal length");
    if (!lower.allFinite() || !upper.allFinite())
        throw std::invalid_argument("box: bounds must be finite");
    if (!(lower.array() < upper.array()).all())
        throw std::invalid_argument("box: requires lower < upper componentwise");
    ConvexDomain d;
    d.kind_ = DomainKind::Box;
    d.dim_ = static_cast<int>(lower.size());
    d.lower_ = std::move(lower);
    d.upper_ = std::move(upper);
    return d;
}

ConvexDomain ConvexDomain::ball(Point center, double radius) {
    if (center.size() == 0) throw std::invalid_argument("ball: empty center");
    if (!center.allFinite() || !std::isfinite(radius) || radius <= 0.0)
        throw std::invalid_argument("ball: requires finite center and radius > 0");
    ConvexDomain d;
    d.kind_ = DomainKind::Ball;
    d.dim_ = static_cast<int>(center.size());
    d.center_ = std::move(center);
    d.radius_ = radius;
    return d;
}

ConvexDomain ConvexDomain::all(int dim) {
    if (dim <= 0) throw std::invalid_argument("all: dimension must be positive");
    ConvexDomain d;
    d.kind_ = DomainKind::All;
    d.dim_ = dim;
    return d;
}

double ConvexDomain::diameter_hint() const {
    switch (kind_) {
        case DomainKind::Box: return (upper_ - lower_).maxCoeff();
        case DomainKind::Ball: return 2.0 * radius_;
        case DomainKind::All: return 1.0;
    }
    return 1.0;
}

void ConvexDomain::check_dim(const Point& x, const char* op) const {
    if (x.size() != dim_)
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (expected " +
                                    std::to_string(dim_) + ", got " + std::to_string(x.size()) + ")");
}

bool ConvexDomain::contains(const Point& x) const {
    check_dim(x, "contains");
    switch (kind_) {
        case DomainKind::Box:
            return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
        case DomainKind::Ball:
            return (x - center_).norm() <= radius_ * (1.0 + kBallContainSlack);
        case DomainKind::All:
            return x.allFinite();
    }
    return false;
}

Point ConvexDomain::project(const Point& x) const {
    check_dim(x, "project");
    switch (kind_) {
        case DomainKind::Box:
            return x.cwiseMax(lower_).cwiseMin(upper_);
        case DomainKind::Ball: {
            const Vector offset = x - center_;
            const double dist = offset.norm();
            if (dist <= radius_) return x;
            return center_ + offset * (radius_ / dist);
        }
        case DomainKind::All:
            return x;
    }
    return x;
}

Vector ConvexDomain::tangent_cone_project(const Point& x, const Vector& v) const {
    check_dim(x, "tangent_cone_project");
    if (v.size() != dim_) throw std::invalid_argument("tangent_cone_project: velocity dimension mismatch");
    if (!contains(x)) throw std::invalid_argument("tangent_cone_project: x outside the domain");
    switch (kind_) {
        case DomainKind::Box: {
            Vector w = v;
            for (int i = 0; i < dim_; ++i) {
                if (x[i] <= lower_[i] && w[i] < 0.0) w[i] = 0.0;
                if (x[i] >= upper_[i] && w[i] > 0.0) w[i] = 0.0;
            }
            return w;
        }
        case DomainKind::Ball: {
            const Vector offset = x - center_;
            const double dist = offset.norm();
            if (dist < radius_ * (1.0 - kBallBoundaryBand)) return v;  // interior
            const Vector n = offset / dist;
            const double outward = v.dot(n);
            if (outward <= 0.0) return v;
            return v - outward * n;
        }
        case DomainKind::All:
            return v;
    }
    return v;
}

Vector ConvexDomain::boundary_normal(const Point& x) const {
    check_dim(x, "boundary_normal");
    if (!contains(x)) throw std::invalid_argument("boundary_normal: x outside the domain");
    switch (kind_) {
        case DomainKind::Box: {
            int active = -1;
            double sign = 0.0;
            for (int i = 0; i < dim_; ++i) {
                double s = 0.0;
                if (x[i] <= lower_[i]) s = -1.0;
                else if (x[i] >= upper_[i]) s = 1.0;
                if (s != 0.0) {
                    if (active >= 0)
                        throw std::invalid_argument("boundary_normal: no unique normal at a box corner");
                    active = i;
                    sign = s;
                }
            }
            if (active < 0) throw std::invalid_argument("boundary_normal: x is not on the boundary");
            Vector n = Vector::Zero(dim_);
            n[active] = sign;
            return n;
        }
        case DomainKind::Ball: {
            const Vector offset = x - center_;
            const double dist = offset.norm();
            if (std::abs(dist - radius_) > radius_ * kBallNormalBand)
                throw std::invalid_argument("boundary_normal: x is not on the boundary");
            return offset / dist;
        }
        case DomainKind::All:
            throw std::invalid_argument("boundary_normal: R^d has no boundary");
    }
    throw std::logic_error("boundary_normal: unreachable");
}

InitialSampler InitialSampler::uniform(std::uint64_t seed) {
    InitialSampler s;
    s.kind = SamplerKind::UniformOnDomain;
    s.seed = seed;
    return s;
}

InitialSampler InitialSampler::uniform_on_box(Vector lower, Vector upper, std::uint64_t seed) {
    if (lower.size() != upper.size() || lower.size() == 0)
        throw std::invalid_argument("uniform_on_box: bad support bounds");
    if (!(lower.array() < upper.array()).all())
        throw std::invalid_argument("uniform_on_box: support must have positive measure (lower < upper)");
    InitialSampler s;
    s.kind = SamplerKind::UniformOnBox;
    s.seed = seed;
    s.box_lower = std::move(lower);
    s.box_upper = std::move(upper);
    return s;
}

void InitialSampler::validate_support(const ConvexDomain& domain) const {
    if (kind == SamplerKind::UniformOnDomain) {
        if (domain.kind() == DomainKind::All)
            throw std::invalid_argument(
                "sample_initial: uniform sampling on an unbounded domain is not defined; "
                "use a UniformOnBox sampler");
        return;
    }
    if (box_lower.size() != domain.dim())
        throw std::invalid_argument("sample_initial: sampler/domain dimension mismatch");
    switch (domain.kind()) {
        case DomainKind::Box:
            if (!(box_lower.array() >= domain.lower().array()).all() ||
                !(box_upper.array() <= domain.upper().array()).all())
                throw std::invalid_argument("sample_initial: sampler support not contained in the domain");
            break;
        case DomainKind::Ball: {
            // farthest corner of the support box from the ball center
            Vector far(domain.dim());
            for (int i = 0; i < domain.dim(); ++i)
                far[i] = std::max(std::abs(box_lower[i] - domain.center()[i]),
                                  std::abs(box_upper[i] - domain.center()[i]));
            if (far.norm() > domain.radius() * (1.0 + 1e-12))
                throw std::invalid_argument("sample_initial: sampler support not contained in the domain");
            break;
        }
        case DomainKind::All:
            break;
    }
}

Point InitialSampler::sample(const ConvexDomain& domain, std::uint64_t index) const {
    validate_support(domain);
    DrawRng rng(seed, index);
    const int d = domain.dim();
    Point x(d);
    if (kind == SamplerKind::UniformOnBox) {
        for (int i = 0; i < d; ++i) x[i] = rng.uniform(box_lower[i], box_upper[i]);
        return x;
    }
    switch (domain.kind()) {
        case DomainKind::Box:
            for (int i = 0; i < d; ++i) x[i] = rng.uniform(domain.lower()[i], domain.upper()[i]);
            return x;
        case DomainKind::Ball: {
            // isotropic direction scaled by r * U^(1/d)
            Vector dir(d);
            double norm = 0.0;
            do {
                for (int i = 0; i < d; ++i) dir[i] = rng.normal();
                norm = dir.norm();
            } while (norm == 0.0);
            double u = 0.0;
            while (u == 0.0) u = rng.uniform01();
            const double r = domain.radius() * std::pow(u, 1.0 / d);
            return domain.center() + dir * (r / norm);
        }
        case DomainKind::All:
            break;
    }
    throw std::logic_error("sample_initial: unreachable");
}

}  // namespace basin
