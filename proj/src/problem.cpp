#include "npl/problem.hpp"

#include <string>

#include "npl/errors.hpp"

namespace npl {

void ProblemSpec::validate() const {
    if (!grid) throw InvalidArgument("problem without grid");
    op.validate();
    nonlinearity.validate();
    if (op.flavor != OperatorSpec::Flavor::Spectral) {
        throw InvalidArgument("time integration needs the spectral operator flavour");
    }
    const bool ball3 = grid->is_radial() && grid->dimension() == 3;
    if (grid->is_radial() && !ball3) throw UnsupportedGrid("radial problems are implemented for n = 3");
    if (nonlinearity.kind != NonlinearitySpec::Kind::Power) {
        if (!ball3) throw UnsupportedGrid("Choquard and SPS problems need the n = 3 radial ball");
        if (nonlinearity.kind == NonlinearitySpec::Kind::Choquard && nonlinearity.n != 3) {
            throw UnsupportedGrid("Choquard dynamics are implemented for n = 3");
        }
    }
    if (modes == 0) throw InvalidArgument("problem needs at least one mode");
    if (grid->size() - 1 < 3 * modes) {
        throw InvalidArgument("dealiasing needs N - 1 >= 3K (N = " + std::to_string(grid->size()) +
                              ", K = " + std::to_string(modes) + ")");
    }
}

BasisPtr ProblemSpec::make_basis() const {
    validate();
    return build_dirichlet_basis(grid, modes);
}

}  // namespace npl
