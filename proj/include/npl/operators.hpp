#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "npl/grid.hpp"

namespace npl {

/**
 * Dirichlet eigenpairs of -Laplace on an interval or on the 3D ball
 * (radial modes), truncated to K modes.
 *
 * Interval [a, b]:  lambda_k = (k pi / L)^2,  phi_k = sqrt(2/L) sin(k pi (x-a)/L).
 * Ball radius R:    lambda_k = (k pi / R)^2,  phi_k = sin(k pi r/R) / (r sqrt(2 pi R)).
 *
 * Analysis and synthesis are DST-I transforms of the interior samples (of
 * r u in the radial case), so the modes are orthonormal under the grid's
 * collocation weights to rounding.
 */
class SpectralBasis {
public:
    ~SpectralBasis();
    SpectralBasis(const SpectralBasis&) = delete;
    SpectralBasis& operator=(const SpectralBasis&) = delete;

    static std::shared_ptr<const SpectralBasis> build(GridPtr grid, std::size_t modes);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::size_t modes() const { return eigenvalues_.size(); }
    std::span<const double> eigenvalues() const { return eigenvalues_; }

    std::vector<double> analyze(const Field& f) const;
    Field synthesize(std::span<const double> coefficients) const;

    // Samples of phi_{k+1} (zero-based index).
    Field mode(std::size_t index) const;

    // Fraction of the collocation L2 energy of f outside the retained modes.
    double tail_fraction(const Field& f) const;

private:
    SpectralBasis(GridPtr grid, std::size_t modes);
    void dst(std::span<const double> in, std::span<double> out) const;

    GridPtr grid_;
    std::vector<double> eigenvalues_;
    void* plan_ = nullptr;  // fftw_plan for DST-I of the interior length
    std::size_t transform_size_ = 0;
    double scale_ = 0.0;
};

using BasisPtr = std::shared_ptr<const SpectralBasis>;

// Interface mirror of the SpectralBasis factory.
inline BasisPtr build_dirichlet_basis(GridPtr grid, std::size_t modes) {
    return SpectralBasis::build(std::move(grid), modes);
}

struct OperatorSpec {
    enum class Flavor { Spectral, Restricted1D };

    double alpha = 1.0;  // fractional order in (0, 1]
    double mu = 0.0;     // zeroth-order coefficient >= 0
    Flavor flavor = Flavor::Spectral;

    void validate() const;
    bool operator==(const OperatorSpec&) const = default;
};

// sigma_k = lambda_k^alpha + mu for each retained mode.
std::vector<double> operator_symbol(const SpectralBasis& basis, const OperatorSpec& spec);

// Applies (-Laplace)^alpha + mu. Spectral flavour requires f to be resolved
// (tail fraction below 1e-6), otherwise ResolutionError.
Field apply_operator(const SpectralBasis& basis, const OperatorSpec& spec, const Field& f);

// sqrt(sum (lambda_k + 1) c_k^2): the H^1 norm with the gradient taken spectrally.
double h1_norm(const SpectralBasis& basis, const Field& f);

// Normalising constant of the integral fractional Laplacian in one dimension.
double fractional_laplacian_constant_1d(double alpha);

/**
 * Integral (restricted) fractional Laplacian on an interval with zero
 * exterior data,
 *
 *   c(1,alpha) int_0^inf (2u(x) - u(x+y) - u(x-y)) y^{-1-2 alpha} dy.
 *
 * The integrand is written as G(y) y^{1-2alpha} with G(y) = (2u(x) - u(x+y)
 * - u(x-y)) / y^2; G is sampled at the grid offsets (its value at y = 0 from
 * second differences), interpolated linearly and integrated exactly against
 * y^{1-2alpha}. Beyond the farther endpoint u vanishes on both sides and the
 * tail 2u(x) y^{-1-2alpha} is integrated in closed form. Boundary nodes
 * return zero.
 */
Field restricted_frac_lap_1d(const Field& f, double alpha);

/**
 * Newton-type potential v(x) = int f(y) |x-y|^{-(n-2)} dy.
 *
 * Only the radial ball with n = 3 is supported: with the spherical mean
 * 1/max(r, s) of the Coulomb kernel,
 *   v(r) = (4 pi / r) int_0^r s^2 f ds + 4 pi int_r^R s f ds,
 * evaluated in O(N) with the grid weights. The discrete operator is
 * self-adjoint for the grid inner product.
 */
Field riesz_potential(const Field& f, int n);

/**
 * One-dimensional weakly singular surrogate v(x) = int f(y) |x-y|^{-gamma} dy
 * with gamma in (0, 1), by product integration of the kernel against
 * piecewise-linear hat functions; the weight matrix is symmetrised with
 * respect to the grid inner product.
 */
Field riesz_potential_1d(const Field& f, double gamma);

}  // namespace npl
