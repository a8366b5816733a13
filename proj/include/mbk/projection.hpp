#pragma once

#include "mbk/kernels.hpp"
#include "mbk/quadrature.hpp"

#include <utility>
#include <vector>

namespace mbk
{
	/// g_alpha = e_alpha |e_alpha|^{p-2} / ||e_alpha||^p, the Hahn-Banach extension
	/// of the alpha-th coefficient functional.
	struct DualBasisFunction
	{
		MultiIndex alpha;
		LpContext ctx;
		RadialWeight weight;
		double norm_p = 0.0;

		BandLimited function() const;
	};

	DualBasisFunction dual_basis_function(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const MultiIndex &alpha);

	/// Grid options with the radial substitution resolved from p, q, the weight
	/// exponents on Omega and the radial exponents of f.
	GridOptions resolve_grid(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const std::vector<Param> &extra, GridOptions opts);

	/// Quadrature of f conj(g_alpha) mu over the target domain.
	Complex coefficient_functional(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const MultiIndex &alpha, const BandLimited &f, const QuadratureGrid &grid);
	Complex coefficient_functional(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const MultiIndex &alpha, const SampledFunction &f, const QuadratureGrid &grid);

	/// Nonzero coefficients of the projection of a band-limited f; only the
	/// angular frequencies present in f can contribute.
	std::vector<std::pair<MultiIndex, Complex>> mbp_coefficients(const QuotientRep &rep, const LpContext &ctx,
		const RadialWeight &weight, const BandLimited &f, const QuadratureGrid &grid);
	BandLimited project_band_limited(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const BandLimited &f, const QuadratureGrid &grid);

	/// Kernel quadrature of P f at zeta. The band-limited overload pulls back to
	/// Omega, where the integral factors into one-dimensional pieces per coset.
	Complex apply_mbp(const PolyhedronKernel &pk, const BandLimited &f, const GridOptions &opts, const ComplexPoint &zeta);
	Complex apply_mbp(const PolyhedronKernel &pk, const SampledFunction &f, const QuadratureGrid &grid,
		const ComplexPoint &zeta);

	/// Quadrature of |K| f mu for nonnegative f.
	double apply_absolute(const PolyhedronKernel &pk, const SampledFunction &f, const QuadratureGrid &grid,
		const ComplexPoint &zeta);

	struct SchurWitness
	{
		std::int64_t theta = 0;
		std::int64_t b = 1;
		double p = 2.0;
		double q = 2.0;

		double phi(Complex z) const;
		double psi(Complex w) const;
	};

	SchurWitness schur_witness(const Kernel1D &k);

	struct SchurReport
	{
		double C1_hat = 0.0;
		double C2_hat = 0.0;
		std::vector<double> radii;
		std::vector<double> ratio1;
		std::vector<double> ratio2;
	};

	/// Sampled suprema of the two Schur-test ratios over the given radii (four angles each).
	SchurReport verify_schur(const Kernel1D &k, const std::vector<double> &radii, GridOptions opts = {});

	struct DefectFit
	{
		Complex C;
		double residual = 0.0;
	};

	/// Least-squares constant C with values ~ C * basis.
	DefectFit fit_constant(const std::vector<Complex> &basis, const std::vector<Complex> &values);

	/// ||B(zeta, .)||_{L^q} of the Bergman kernel (p = 2) over Omega with every
	/// punctured factor shrunk to the annulus eps < |w_j| < 1, one value per eps.
	std::vector<double> bergman_defect_divergence(const QuotientRep &rep, const LpContext &ctx, const ComplexPoint &zeta,
		const std::vector<double> &eps, GridOptions opts = {});

	enum class SequenceVerdict
	{
		Diverges,
		Stabilizes,
		Inconclusive,
	};

	const char *to_string(SequenceVerdict v);

	/// Diverges when the last four steps each grow by at least 10%; stabilizes when
	/// the last two values differ by at most 1%.
	SequenceVerdict classify_sequence(const std::vector<double> &values);

	struct NullspaceRow
	{
		MultiIndex alpha;
		double bergman_max = 0.0;
		double mbp_rel_err = 0.0;
	};

	struct NullspaceReport
	{
		std::vector<NullspaceRow> annihilated;
		/// alpha = (0,-1) lies in A^2, so the Bergman operator must reproduce it.
		double bergman_reproduction_rel_err = 0.0;
	};

	/// Hartogs triangle only: Bergman operator and MBP at ctx applied to e_alpha with
	/// alpha_1 + alpha_2 = -2, alpha_1 = 0..max_alpha1.
	NullspaceReport nullspace_demo(const QuotientRep &rep, const LpContext &ctx, const std::vector<ComplexPoint> &points,
		std::int64_t max_alpha1 = 2, GridOptions opts = {});
} // namespace mbk
