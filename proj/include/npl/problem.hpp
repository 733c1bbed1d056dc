#pragma once

#include <cstddef>

#include "npl/grid.hpp"
#include "npl/nonlinear.hpp"
#include "npl/operators.hpp"

namespace npl {

// u_t + A u = F(u) with homogeneous Dirichlet data, A = (-Laplace)^alpha + mu.
struct ProblemSpec {
    GridPtr grid;
    OperatorSpec op;
    NonlinearitySpec nonlinearity;
    std::size_t modes = 0;

    // Checks parameter ranges, grid compatibility and the dealiasing
    // requirement N - 1 >= 3K.
    void validate() const;
    BasisPtr make_basis() const;
};

}  // namespace npl
