#include "mbk/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace mbk
{
	ComplexPoint twist(const LpContext &ctx, const ComplexPoint &z)
	{
		ComplexPoint out(z.size());
		for (Eigen::Index j = 0; j < z.size(); ++j)
			out(j) = twist_coordinate(z(j), ctx.p.value());
		return out;
	}

	double eta(const LpContext &ctx, const ComplexPoint &z)
	{
		const double p = ctx.p.value();
		double prod = 1.0;
		for (Eigen::Index j = 0; j < z.size(); ++j)
			prod *= std::abs(z(j));
		return std::pow(p - 1.0, double(z.size())) * rpow(prod, 2.0 * p - 4.0);
	}

	RadialWeight eta_weight(const LpContext &ctx, int n)
	{
		RadialWeight w;
		w.gamma.assign(std::size_t(n), Param(2) * ctx.p - Param(4));
		w.scale = std::pow(ctx.p.value() - 1.0, double(n));
		return w;
	}

	Kernel1D Kernel1D::make(FactorKind factor, const LpContext &ctx, const Param &gamma, std::int64_t a, std::int64_t b)
	{
		Kernel1D k;
		k.factor = factor;
		k.ctx = ctx;
		k.gamma = gamma;
		k.progression = ArithProgression{a, b, theta(factor, ctx, gamma, a, b)};
		return k;
	}

	namespace
	{
		void check_points(const Kernel1D &k, Complex z, Complex w)
		{
			if (k.progression.theta < 0 && (z == Complex(0.0) || w == Complex(0.0)))
				throw Error(ErrorCode::PoleAtPuncture, "negative start index at the puncture");
			auto inside = [&](Complex x) {
				const double r = std::abs(x);
				if (!std::isfinite(r) || r >= 1.0)
					return false;
				return !(k.factor == FactorKind::PuncturedUnitDisc && r == 0.0);
			};
			if (!inside(z) || !inside(w))
				throw Error(ErrorCode::NotInDomain, "kernel argument outside the factor domain");
		}
	} // namespace

	Complex subkernel_1d(const Kernel1D &k, Complex z, Complex w)
	{
		check_points(k, z, w);
		const double p = k.ctx.p.value();
		return subkernel_value(kernel_variable(z, w, p), k.progression.theta, k.progression.b, p, k.gamma.value());
	}

	Complex subkernel_series(const Kernel1D &k, Complex z, Complex w, std::int64_t N)
	{
		check_points(k, z, w);
		const double p = k.ctx.p.value();
		Complex sum(0.0);
		for (std::int64_t alpha = k.progression.theta; alpha <= N; alpha += k.progression.b)
		{
			const Complex ew = ipow(w, alpha);
			const double aw = std::abs(ew);
			if (aw == 0.0)
				continue;
			const double norm = monomial_norm_1d(k.factor, k.ctx, k.gamma, alpha);
			sum += ipow(z, alpha) * std::conj(ew) * std::pow(aw, p - 2.0) / norm;
		}
		return sum;
	}

	double kernel_bound(const Kernel1D &k, Complex z, Complex w)
	{
		check_points(k, z, w);
		const double p = k.ctx.p.value();
		const double g = k.gamma.value();
		const auto &pr = k.progression;
		const double C = (p * double(pr.theta) + g + 2.0 + std::abs(g + 2.0 + p * double(pr.theta - pr.b))) / two_pi;
		const Complex t = kernel_variable(z, w, p);
		const double at = std::abs(t);
		const double num = pr.theta == 0 ? 1.0 : std::pow(at, double(pr.theta));
		const double den = std::norm(1.0 - ipow(t, pr.b));
		return C * num / den;
	}

	Complex mbk_1d(FactorKind factor, const LpContext &ctx, const Param &gamma, Complex z, Complex w)
	{
		return subkernel_1d(Kernel1D::make(factor, ctx, gamma, 0, 1), z, w);
	}

	PolyhedronKernel make_polyhedron_kernel(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight)
	{
		PolyhedronKernel pk;
		pk.rep = rep;
		pk.ctx = ctx;
		pk.weight = weight;
		pk.omega = omega_weight(rep, ctx, weight);
		pk.prefactor = 1.0 / pk.omega.L;
		for (const MultiIndex &l : rep.coset_reps)
		{
			std::vector<Kernel1D> tensor;
			for (Eigen::Index j = 0; j < l.size(); ++j)
				tensor.push_back(Kernel1D::make(rep.factors()[std::size_t(j)], ctx, pk.omega.gamma[std::size_t(j)],
					mod(l(j) - 1, rep.d), rep.d));
			pk.cosets.push_back(std::move(tensor));
		}
		return pk;
	}

	Complex gamma_invariant_kernel(const PolyhedronKernel &pk, const ComplexPoint &z, const ComplexPoint &w)
	{
		const Eigen::Index n = pk.rep.dimension();
		if (z.size() != n || w.size() != n)
			throw Error(ErrorCode::DimensionMismatch, "kernel point dimension mismatch");
		Complex sum(0.0);
		for (const auto &tensor : pk.cosets)
		{
			Complex prod(1.0);
			for (Eigen::Index j = 0; j < n; ++j)
				prod *= subkernel_1d(tensor[std::size_t(j)], z(j), w(j));
			sum += prod;
		}
		return pk.prefactor * sum;
	}

	Complex gamma_invariant_series(const PolyhedronKernel &pk, const ComplexPoint &z, const ComplexPoint &w, std::int64_t N)
	{
		const double p = pk.ctx.p.value();
		if (!contains(pk.rep.source, z) || !contains(pk.rep.source, w))
			throw Error(ErrorCode::NotInDomain, "kernel argument outside Omega");
		Complex sum(0.0);
		for (const MultiIndex &beta : gamma_invariant_indices(pk.rep, pk.ctx, pk.weight, N))
		{
			const Complex ew = monomial(beta, w);
			const double aw = std::abs(ew);
			if (aw == 0.0)
				continue;
			sum += monomial(beta, z) * std::conj(ew) * std::pow(aw, p - 2.0) /
				omega_monomial_norm(pk.rep, pk.ctx, pk.omega, beta);
		}
		return sum;
	}

	double contraction_ratio(const PolyhedronKernel &pk, const ComplexPoint &zeta, const ComplexPoint &omega)
	{
		const ComplexPoint z = preimage(pk.rep, zeta);
		const ComplexPoint w = preimage(pk.rep, omega);
		double ratio = 0.0;
		for (Eigen::Index j = 0; j < z.size(); ++j)
			ratio = std::max(ratio, std::abs(kernel_variable(z(j), w(j), pk.ctx.p.value())));
		return ratio;
	}

	Complex mbk_polyhedron(const PolyhedronKernel &pk, const ComplexPoint &zeta, const ComplexPoint &omega,
		std::size_t z_deck, std::size_t w_deck)
	{
		if (!contains(pk.rep.target, zeta) || !contains(pk.rep.target, omega))
			throw Error(ErrorCode::NotInDomain, "kernel argument outside the domain");
		const ComplexPoint z = pk.rep.group.apply(z_deck, preimage(pk.rep, zeta));
		const ComplexPoint w = pk.rep.group.apply(w_deck, preimage(pk.rep, omega));
		const Complex Jz = jacobian_det(pk.rep.A, z);
		const Complex Jw = jacobian_det(pk.rep.A, w);
		const double p = pk.ctx.p.value();
		return double(pk.rep.d) * gamma_invariant_kernel(pk, z, w) * Jw / (Jz * std::pow(std::abs(Jw), p));
	}

	std::int64_t series_window(const PolyhedronKernel &pk, const ComplexPoint &zeta, const ComplexPoint &omega,
		const SeriesOptions &opts)
	{
		const double ratio = contraction_ratio(pk, zeta, omega);
		if (ratio >= opts.max_ratio)
			throw Error(ErrorCode::SlowConvergence, "contraction ratio " + std::to_string(ratio) + " too close to 1");
		if (opts.window)
			return *opts.window;
		const double steps = ratio > 0.0 ? std::ceil(std::log(opts.tol) / std::log(ratio)) : 0.0;
		const double n_omega = steps + 10.0;
		// alpha = (beta + 1) A^{-1} - 1, so the target window scales with A^{-1}.
		const Eigen::MatrixXd inv = pk.rep.A.cast<double>().inverse();
		const double spread = inv.cwiseAbs().colwise().sum().maxCoeff();
		const double N = std::ceil((n_omega + 1.0) * spread + 1.0);
		return std::int64_t(std::min<double>(N, double(opts.max_window)));
	}

	Complex mbk_series(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight, const ComplexPoint &zeta,
		const ComplexPoint &omega, const SeriesOptions &opts)
	{
		if (!contains(rep.target, zeta) || !contains(rep.target, omega))
			throw Error(ErrorCode::NotInDomain, "kernel argument outside the domain");
		const PolyhedronKernel pk = make_polyhedron_kernel(rep, ctx, weight);
		const std::int64_t N = series_window(pk, zeta, omega, opts);
		const double p = ctx.p.value();
		Complex sum(0.0);
		for (const MultiIndex &alpha : enumerate_allowable(rep, ctx, weight, N))
		{
			const Complex ew = monomial(alpha, omega);
			const double aw = std::abs(ew);
			if (aw == 0.0)
				continue;
			sum += monomial(alpha, zeta) * std::conj(ew) * std::pow(aw, p - 2.0) / monomial_norm(rep, ctx, weight, alpha);
		}
		return sum;
	}

	double twisted_symmetry_residual(const QuotientRep &rep, const LpContext &ctx, const ComplexPoint &z,
		const ComplexPoint &w, KernelMethod method, const SeriesOptions &opts)
	{
		const LpContext cq = ctx.conjugate();
		const ComplexPoint zq = twist(cq, z);
		const ComplexPoint wp = twist(ctx, w);
		const RadialWeight eq = eta_weight(cq, rep.dimension());
		Complex lhs, rhs;
		if (method == KernelMethod::Closed)
		{
			lhs = mbk_polyhedron(make_polyhedron_kernel(rep, ctx), zq, w);
			rhs = std::conj(mbk_polyhedron(make_polyhedron_kernel(rep, cq, eq), wp, z));
		}
		else
		{
			lhs = mbk_series(rep, ctx, RadialWeight::unweighted(), zq, w, opts);
			rhs = std::conj(mbk_series(rep, cq, eq, wp, z, opts));
		}
		return std::abs(lhs - rhs);
	}
} // namespace mbk
