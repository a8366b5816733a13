#include "mbk/duality.hpp"

#include <cmath>

namespace mbk
{
	PairingContext PairingContext::make(const QuotientRep &rep, const LpContext &ctx)
	{
		PairingContext pc;
		pc.rep = rep;
		pc.ctx = ctx;
		pc.dual_domain = reinhardt_power(rep.target, ctx.p.value() - 1.0);
		if (!(pc.dual_domain == rep.target))
			throw Error(ErrorCode::UnsupportedDomain, "Reinhardt power differs from the domain");
		pc.eta_q = eta_weight(ctx.conjugate(), rep.dimension());
		return pc;
	}

	QuadratureGrid pairing_grid(const PairingContext &pc, const std::vector<BandLimited> &functions, GridOptions opts)
	{
		std::vector<Param> hints;
		for (const BandLimited &f : functions)
		{
			for (const Param &s : f.radial_exponents())
				hints.push_back(s);
			for (const Param &s : f.twisted(pc.ctx.p).radial_exponents())
				hints.push_back(s);
		}
		hints.insert(hints.end(), pc.eta_q.gamma.begin(), pc.eta_q.gamma.end());
		const GridOptions resolved = resolve_grid(pc.rep, pc.ctx, RadialWeight::unweighted(), hints, opts);
		return make_grid(pc.rep.factors(), resolved);
	}

	Complex pairing(const PairingContext &pc, const BandLimited &f, const BandLimited &g, const QuadratureGrid &grid)
	{
		return integrate_target(pc.rep, grid, f * g.twisted(pc.ctx.p).conj());
	}

	Complex pairing(const PairingContext &pc, const SampledFunction &f, const SampledFunction &g, const QuadratureGrid &grid)
	{
		const SampledFunction h{[&](const ComplexPoint &z) { return f.f(z) * std::conj(g.f(twist(pc.ctx, z))); },
			"pairing"};
		return pc.rep.trivial() ? integrate(grid, h) : integrate_polyhedron(pc.rep, grid, h);
	}

	AdjointReport adjoint_residual(const PairingContext &pc, const BandLimited &f, const BandLimited &g, GridOptions opts)
	{
		const QuadratureGrid grid = pairing_grid(pc, {f, g}, opts);
		const LpContext cq = pc.ctx.conjugate();
		AdjointReport report;
		for (const auto &[alpha, c] : mbp_coefficients(pc.rep, pc.ctx, RadialWeight::unweighted(), f, grid))
			report.lhs += c * pairing(pc, BandLimited::monomial(alpha), g, grid);
		for (const auto &[alpha, c] : mbp_coefficients(pc.rep, cq, pc.eta_q, g, grid))
			report.rhs += std::conj(c) * pairing(pc, f, BandLimited::monomial(alpha), grid);
		report.residual = std::abs(report.lhs - report.rhs);
		return report;
	}

	DualBasisReport dual_basis_check(const PairingContext &pc, std::int64_t N, GridOptions opts)
	{
		const QuotientRep &rep = pc.rep;
		const LpContext cq = pc.ctx.conjugate();
		const int n = rep.dimension();
		DualBasisReport report;
		report.indices = enumerate_allowable(rep, pc.ctx, RadialWeight::unweighted(), N);
		std::vector<BandLimited> monomials;
		for (const MultiIndex &a : report.indices)
			monomials.push_back(BandLimited::monomial(a));
		const QuadratureGrid grid = pairing_grid(pc, monomials, opts);

		const std::size_t m = report.indices.size();
		report.matrix = Eigen::MatrixXcd::Zero(Eigen::Index(m), Eigen::Index(m));
		for (std::size_t a = 0; a < m; ++a)
		{
			const double norm = monomial_norm(rep, pc.ctx, RadialWeight::unweighted(), report.indices[a]);
			const BandLimited h = monomials[a].scaled(1.0 / norm);
			for (std::size_t b = 0; b < m; ++b)
			{
				const Complex v = pairing(pc, monomials[b], h, grid);
				report.matrix(Eigen::Index(b), Eigen::Index(a)) = v;
				report.max_deviation = std::max(report.max_deviation, std::abs(v - (a == b ? 1.0 : 0.0)));
			}

			if (!is_allowable(rep, cq, RadialWeight::unweighted(), report.indices[a]))
				continue;
			std::vector<Param> direct(static_cast<std::size_t>(n)), pulled(static_cast<std::size_t>(n));
			for (int k = 0; k < n; ++k)
			{
				const Param alpha_k(report.indices[a](k));
				direct[std::size_t(k)] = cq.p * alpha_k;
				pulled[std::size_t(k)] = cq.p * (cq.p - Param(1)) * alpha_k;
			}
			const double lhs = integrate_target(rep, grid, BandLimited::abs_power(direct)).real();
			const double rhs = integrate_target(rep, grid, BandLimited::abs_power(pulled), pc.eta_q).real();
			report.max_isometry_rel_err = std::max(report.max_isometry_rel_err, std::abs(lhs - rhs) / std::abs(lhs));
			++report.isometry_checked;
		}
		return report;
	}

	double dual_norm_product(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const MultiIndex &alpha, GridOptions opts)
	{
		const DualBasisFunction g = dual_basis_function(rep, ctx, weight, alpha);
		const BandLimited e = BandLimited::monomial(alpha);
		const BandLimited gf = g.function();
		std::vector<Param> hints = gf.radial_exponents();
		for (const Param &s : gf.radial_exponents())
			hints.push_back(s * ctx.q);
		for (Eigen::Index k = 0; k < alpha.size(); ++k)
			hints.push_back(ctx.p * Param(alpha(k)));
		const QuadratureGrid grid = make_grid(rep.factors(), resolve_grid(rep, ctx, weight, hints, opts));
		return lp_norm(rep, grid, gf, ctx.conjugate(), weight) * lp_norm(rep, grid, e, ctx, weight);
	}
} // namespace mbk
