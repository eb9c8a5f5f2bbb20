#pragma once

#include "basin/manifest.hpp"

namespace basin {

/// A benchmark vector field built from a {"kind": ...} descriptor.
/// Kinds: double-well (1-D gradient flow of (x^2-1)^2), quadratic-bowl
/// (gradient flow of ||x - center||^2 / 2), rotation (2-D circulation,
/// never converges), affine-picard (F(x) = A x + b), blp (Picard flow of
/// the markup map; handled by the pipeline).
struct ProblemField {
    VectorFieldSpec field;
    int dim = 0;
};

ProblemField make_named_field(const json& spec);

}  // namespace basin
