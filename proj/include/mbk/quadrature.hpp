#pragma once

#include "mbk/band_limited.hpp"
#include "mbk/indices.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mbk
{
	struct GridOptions
	{
		int R = 64;
		int T = 129;
		/// Radial substitution r = u^power; 0 picks it from the exponents involved.
		int power = 0;
		/// Inner radius of an annulus (log-spaced radial map) when positive.
		double inner = 0.0;
		/// Grading exponent m of 1 - r ~ (1 - u)^m near the outer circle; 1 disables it.
		int upper_grading = 1;
	};

	/// Gauss-Legendre nodes and weights on (0, 1).
	void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w);

	/// Smallest power making r^e polynomial in u for every exact exponent given
	/// (capped at 12); 4 when some exponent is not rational.
	int radial_power(const std::vector<Param> &exponents);

	/// Radial nodes with weights that already include the polar factor r dr.
	struct RadialRule
	{
		std::vector<double> r;
		std::vector<double> w;
	};

	RadialRule radial_rule(const GridOptions &opts);

	/// Polar tensor grid on one factor: R radii times T equally spaced angles.
	struct FactorGrid
	{
		FactorKind kind = FactorKind::UnitDisc;
		std::vector<Complex> nodes;
		std::vector<double> weights;
	};

	FactorGrid factor_grid(FactorKind kind, const GridOptions &opts);

	/// Tensor grid on a product of discs and punctured discs.
	struct QuadratureGrid
	{
		GridOptions options;
		std::vector<FactorGrid> factors;

		int dimension() const { return int(factors.size()); }
		std::size_t size() const;
	};

	QuadratureGrid make_grid(const std::vector<FactorKind> &factors, const GridOptions &opts);

	using Evaluator = std::function<Complex(const ComplexPoint &)>;

	/// Function known only through point evaluation. The evaluator may be called
	/// concurrently and must not mutate shared state.
	struct SampledFunction
	{
		Evaluator f;
		std::string label;
	};

	SampledFunction sampled(const BandLimited &f, std::string label = "band-limited");

	/// Sum of weight * f * mu over every grid node, mu = scale * prod |z_k|^{gamma_k}.
	Complex integrate(const QuadratureGrid &grid, const SampledFunction &f, const RadialWeight &weight = {});

	/// Integral of a target-domain function, pulled back to Omega:
	/// (1/|Gamma|) sum weight * g(Phi(z)) |det Phi'(z)|^2.
	Complex integrate_polyhedron(const QuotientRep &rep, const QuadratureGrid &grid, const SampledFunction &g,
		const RadialWeight &weight = {});

	/// Same integrals for band-limited integrands, done one coordinate at a time.
	Complex integrate_omega(const QuadratureGrid &grid, const BandLimited &h, const OmegaWeight &w);
	Complex integrate_target(const QuotientRep &rep, const QuadratureGrid &grid, const BandLimited &f,
		const RadialWeight &weight = {});

	/// sum over nodes of weight * z^a conj(z)^b |z|^e on a single factor.
	Complex factor_moment(const FactorGrid &grid, std::int64_t a, std::int64_t b, double e);

	/// (integral of |f|^p mu)^{1/p} over the target domain.
	double lp_norm(const QuotientRep &rep, const QuadratureGrid &grid, const SampledFunction &f, const LpContext &ctx,
		const RadialWeight &weight = {});
	/// Separable route when |f|^p is itself band-limited (single-term f), tensor grid otherwise.
	double lp_norm(const QuotientRep &rep, const QuadratureGrid &grid, const BandLimited &f, const LpContext &ctx,
		const RadialWeight &weight = {});

	/// Number of worker threads: hardware concurrency, capped by MBP_THREADS when set.
	unsigned thread_count();
} // namespace mbk
