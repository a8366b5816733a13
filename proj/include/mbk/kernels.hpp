#pragma once

#include "mbk/indices.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

namespace mbk
{
	/// z |z|^{p-2} for one coordinate.
	template <class Real>
	std::complex<Real> twist_coordinate(const std::complex<Real> &z, Real p)
	{
		const Real r = std::abs(z);
		if (r == Real(0))
			return std::complex<Real>(0);
		return z * std::pow(r, p - Real(2));
	}

	/// t = z conj(w) |w|^{p-2}, the variable of the closed-form subkernels.
	template <class Real>
	std::complex<Real> kernel_variable(const std::complex<Real> &z, const std::complex<Real> &w, Real p)
	{
		const Real r = std::abs(w);
		if (r == Real(0))
			return std::complex<Real>(0);
		return z * std::conj(w) * std::pow(r, p - Real(2));
	}

	/// Sum over alpha = theta + b*nu of (p alpha + gamma + 2) t^alpha / (2 pi), in closed form.
	template <class Real>
	std::complex<Real> subkernel_value(const std::complex<Real> &t, std::int64_t theta, std::int64_t b, Real p, Real gamma)
	{
		const Real c0 = p * Real(theta) + gamma + Real(2);
		const Real c1 = gamma + Real(2) + p * Real(theta - b);
		const std::complex<Real> tb = ipow(t, b);
		const std::complex<Real> one(1);
		return ipow(t, theta) / Real(2 * pi) * (c0 - c1 * tb) / ((one - tb) * (one - tb));
	}

	ComplexPoint twist(const LpContext &ctx, const ComplexPoint &z);
	/// Real Jacobian determinant of the twisting map: (p-1)^n |z_1...z_n|^{2p-4}.
	double eta(const LpContext &ctx, const ComplexPoint &z);
	/// eta for ctx as a radial weight.
	RadialWeight eta_weight(const LpContext &ctx, int n);

	struct Kernel1D
	{
		FactorKind factor = FactorKind::UnitDisc;
		LpContext ctx;
		Param gamma;
		ArithProgression progression;

		static Kernel1D make(FactorKind factor, const LpContext &ctx, const Param &gamma, std::int64_t a, std::int64_t b);
	};

	Complex subkernel_1d(const Kernel1D &k, Complex z, Complex w);
	/// Truncated defining series over the progression, alpha <= N.
	Complex subkernel_series(const Kernel1D &k, Complex z, Complex w, std::int64_t N);
	double kernel_bound(const Kernel1D &k, Complex z, Complex w);
	Complex mbk_1d(FactorKind factor, const LpContext &ctx, const Param &gamma, Complex z, Complex w);

	/// Gamma-invariant kernel on Omega as a coset sum of tensor products of
	/// arithmetic-progression subkernels, together with the data needed to push it
	/// to the target domain.
	struct PolyhedronKernel
	{
		QuotientRep rep;
		LpContext ctx;
		RadialWeight weight;
		OmegaWeight omega;
		/// 1/L; equals d^{p-2} for the unweighted space.
		double prefactor = 1.0;
		std::vector<std::vector<Kernel1D>> cosets;
	};

	PolyhedronKernel make_polyhedron_kernel(const QuotientRep &rep, const LpContext &ctx,
		const RadialWeight &weight = RadialWeight::unweighted());

	Complex gamma_invariant_kernel(const PolyhedronKernel &pk, const ComplexPoint &z, const ComplexPoint &w);
	/// Direct series over gamma_invariant_indices with |beta|_inf <= N.
	Complex gamma_invariant_series(const PolyhedronKernel &pk, const ComplexPoint &z, const ComplexPoint &w, std::int64_t N);
	/// max_j |t_j| at preimages in Omega; the geometric rate of the defining series.
	double contraction_ratio(const PolyhedronKernel &pk, const ComplexPoint &zeta, const ComplexPoint &omega);

	/// Kernel on the target domain through the transformation law. z_deck and
	/// w_deck pick which deck translate of the principal preimage is used.
	Complex mbk_polyhedron(const PolyhedronKernel &pk, const ComplexPoint &zeta, const ComplexPoint &omega,
		std::size_t z_deck = 0, std::size_t w_deck = 0);

	struct SeriesOptions
	{
		/// Explicit window; chosen from tol and the contraction ratio when absent.
		std::optional<std::int64_t> window;
		double tol = 1e-13;
		double max_ratio = 0.95;
		std::int64_t max_window = 400;
	};

	/// Window used by mbk_series for these points; SlowConvergence when the ratio is too close to 1.
	std::int64_t series_window(const PolyhedronKernel &pk, const ComplexPoint &zeta, const ComplexPoint &omega,
		const SeriesOptions &opts);

	/// Sum over allowable alpha of e_alpha(z) conj(e_alpha(w)) |e_alpha(w)|^{p-2} / ||e_alpha||^p.
	Complex mbk_series(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight, const ComplexPoint &zeta,
		const ComplexPoint &omega, const SeriesOptions &opts = {});

	enum class KernelMethod
	{
		Closed,
		Series,
	};

	/// |K_p(chi_q(z), w) - conj(K_{q,eta_q}(chi_p(w), z))|.
	double twisted_symmetry_residual(const QuotientRep &rep, const LpContext &ctx, const ComplexPoint &z,
		const ComplexPoint &w, KernelMethod method, const SeriesOptions &opts = {});
} // namespace mbk
