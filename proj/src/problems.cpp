#include "basin/problems.hpp"

namespace basin {

namespace {

Vector vec_from(const json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    Eigen::Index i = 0;
    for (const json& item : j) v[i++] = item.get<double>();
    return v;
}

}  // namespace

ProblemField make_named_field(const json& spec) {
    const std::string kind = spec.at("kind").get<std::string>();
    ProblemField out;
    if (kind == "double-well") {
        // gradient flow of f(x) = (x^2 - 1)^2
        out.dim = 1;
        out.field = make_gradient_flow(
            [](const Point& x) -> Vector {
                Vector g(1);
                g[0] = 4.0 * x[0] * (x[0] * x[0] - 1.0);
                return g;
            },
            "double-well");
        return out;
    }
    if (kind == "quadratic-bowl") {
        Vector center = spec.contains("center") ? vec_from(spec["center"], "field.center") : Vector::Zero(1);
        out.dim = static_cast<int>(center.size());
        out.field = make_gradient_flow(
            [center](const Point& x) -> Vector { return x - center; }, "quadratic-bowl");
        return out;
    }
    if (kind == "rotation") {
        out.dim = 2;
        out.field = make_raw_field(
            [](const Point& x) -> Vector {
                Vector q(2);
                q[0] = -x[1];
                q[1] = x[0];
                return q;
            },
            "rotation");
        return out;
    }
    if (kind == "affine-picard") {
        const json& rows = spec.at("matrix");
        const int d = static_cast<int>(rows.size());
        Eigen::MatrixXd a(d, d);
        for (int r = 0; r < d; ++r) {
            const Vector row = vec_from(rows[static_cast<std::size_t>(r)], "field.matrix row");
            if (row.size() != d) throw ConfigError("field.matrix: expected a square matrix");
            a.row(r) = row;
        }
        Vector b = spec.contains("offset") ? vec_from(spec["offset"], "field.offset")
                                           : Vector(Vector::Zero(d));
        if (b.size() != d) throw ConfigError("field.offset: dimension mismatch with matrix");
        out.dim = d;
        out.field = make_picard_flow(
            [a, b](const Point& x) -> Point { return a * x + b; }, "affine-picard");
        return out;
    }
    throw ConfigError("field: unknown kind '" + kind +
                      "' (expected double-well, quadratic-bowl, rotation, affine-picard, or blp)");
}

}  // namespace basin
