#include "mbk/projection.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace mbk
{
	BandLimited DualBasisFunction::function() const
	{
		const int n = int(alpha.size());
		std::vector<Param> s(static_cast<std::size_t>(n));
		for (int k = 0; k < n; ++k)
			s[std::size_t(k)] = (ctx.p - Param(2)) * Param(alpha(k));
		BandLimited g(n);
		g.add(BandTerm{Complex(1.0 / norm_p), alpha, MultiIndex::Zero(n), s});
		return g;
	}

	DualBasisFunction dual_basis_function(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const MultiIndex &alpha)
	{
		const double norm = monomial_norm(rep, ctx, weight, alpha);
		if (!std::isfinite(norm))
			throw Error(ErrorCode::NotAllowable, "index is not p-allowable");
		return DualBasisFunction{alpha, ctx, weight, norm};
	}

	GridOptions resolve_grid(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const std::vector<Param> &extra, GridOptions opts)
	{
		if (opts.power > 0 || opts.inner > 0.0)
			return opts;
		std::vector<Param> hints = {ctx.p, ctx.q};
		const OmegaWeight w = omega_weight(rep, ctx, weight);
		hints.insert(hints.end(), w.gamma.begin(), w.gamma.end());
		hints.insert(hints.end(), weight.gamma.begin(), weight.gamma.end());
		hints.insert(hints.end(), extra.begin(), extra.end());
		opts.power = radial_power(hints);
		return opts;
	}

	namespace
	{
		void require_inside(const QuotientRep &rep, const ComplexPoint &zeta)
		{
			if (zeta.size() != rep.dimension())
				throw Error(ErrorCode::DimensionMismatch, "evaluation point dimension mismatch");
			if (!contains(rep.target, zeta))
				throw Error(ErrorCode::NotInDomain, "evaluation point outside the domain");
		}

		// Kernel factor k_ij(z_j, w) |w|^{gamma_j} times the quadrature weight, at every node of factor j.
		std::vector<std::vector<std::vector<Complex>>> kernel_tables(const PolyhedronKernel &pk, const ComplexPoint &z,
			const QuadratureGrid &grid, bool with_weight)
		{
			const double p = pk.ctx.p.value();
			std::vector<std::vector<std::vector<Complex>>> tables;
			for (const auto &tensor : pk.cosets)
			{
				std::vector<std::vector<Complex>> per_factor;
				for (std::size_t j = 0; j < tensor.size(); ++j)
				{
					const FactorGrid &fg = grid.factors[j];
					const Kernel1D &k = tensor[j];
					const double g = pk.omega.gamma[j].value();
					std::vector<Complex> vals(fg.nodes.size());
					for (std::size_t i = 0; i < fg.nodes.size(); ++i)
					{
						const Complex w = fg.nodes[i];
						Complex v = subkernel_value(kernel_variable(z(Eigen::Index(j)), w, p), k.progression.theta,
							k.progression.b, p, k.gamma.value());
						v *= rpow(std::abs(w), g);
						if (with_weight)
							v *= fg.weights[i];
						vals[i] = v;
					}
					per_factor.push_back(std::move(vals));
				}
				tables.push_back(std::move(per_factor));
			}
			return tables;
		}

		void check_rate(const ComplexPoint &z)
		{
			for (Eigen::Index j = 0; j < z.size(); ++j)
				if (std::abs(z(j)) >= 0.95)
					throw Error(ErrorCode::SlowConvergence, "evaluation point too close to the boundary for the grid");
		}

		// Visits every node of a tensor grid; term receives the per-factor node indices.
		template <class T, class F>
		T tensor_visit(const QuadratureGrid &grid, F &&term)
		{
			const std::size_t total = grid.size();
			const std::size_t chunk = 4096;
			const std::size_t chunks = (total + chunk - 1) / chunk;
			const int n = grid.dimension();
			return detail::ordered_sum<T>(chunks, [&](std::size_t c) {
				T acc(0);
				std::vector<std::size_t> idx(static_cast<std::size_t>(n));
				ComplexPoint w(n);
				const std::size_t end = std::min(total, (c + 1) * chunk);
				for (std::size_t flat = c * chunk; flat < end; ++flat)
				{
					std::size_t rest = flat;
					double wt = 1.0;
					for (int j = n - 1; j >= 0; --j)
					{
						const FactorGrid &fg = grid.factors[std::size_t(j)];
						idx[std::size_t(j)] = rest % fg.nodes.size();
						rest /= fg.nodes.size();
						w(j) = fg.nodes[idx[std::size_t(j)]];
						wt *= fg.weights[idx[std::size_t(j)]];
					}
					const T v = term(idx, w);
					if (!std::isfinite(std::abs(v)))
						throw Error(ErrorCode::NonFiniteSample, "non-finite integrand sample");
					acc += wt * v;
				}
				return acc;
			});
		}
	} // namespace

	Complex coefficient_functional(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const MultiIndex &alpha, const BandLimited &f, const QuadratureGrid &grid)
	{
		const DualBasisFunction g = dual_basis_function(rep, ctx, weight, alpha);
		return integrate_target(rep, grid, f * g.function().conj(), weight);
	}

	Complex coefficient_functional(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const MultiIndex &alpha, const SampledFunction &f, const QuadratureGrid &grid)
	{
		const DualBasisFunction g = dual_basis_function(rep, ctx, weight, alpha);
		const BandLimited gc = g.function().conj();
		const SampledFunction h{[&](const ComplexPoint &z) { return f.f(z) * gc(z); }, f.label};
		return rep.trivial() ? integrate(grid, h, weight) : integrate_polyhedron(rep, grid, h, weight);
	}

	std::vector<std::pair<MultiIndex, Complex>> mbp_coefficients(const QuotientRep &rep, const LpContext &ctx,
		const RadialWeight &weight, const BandLimited &f, const QuadratureGrid &grid)
	{
		std::map<std::vector<std::int64_t>, MultiIndex> freqs;
		for (const BandTerm &t : f.terms())
		{
			const MultiIndex alpha = t.a - t.b;
			freqs.emplace(std::vector<std::int64_t>(alpha.data(), alpha.data() + alpha.size()), alpha);
		}
		std::vector<std::pair<MultiIndex, Complex>> out;
		for (const auto &[key, alpha] : freqs)
			if (is_allowable(rep, ctx, weight, alpha))
				out.emplace_back(alpha, coefficient_functional(rep, ctx, weight, alpha, f, grid));
		return out;
	}

	BandLimited project_band_limited(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const BandLimited &f, const QuadratureGrid &grid)
	{
		BandLimited out(rep.dimension());
		for (const auto &[alpha, c] : mbp_coefficients(rep, ctx, weight, f, grid))
			out = out + BandLimited::monomial(alpha, c);
		return out;
	}

	Complex apply_mbp(const PolyhedronKernel &pk, const BandLimited &f, const GridOptions &opts, const ComplexPoint &zeta)
	{
		const QuotientRep &rep = pk.rep;
		require_inside(rep, zeta);
		const ComplexPoint z = preimage(rep, zeta);
		check_rate(z);
		const Eigen::Index n = rep.dimension();
		const MultiIndex s = rep.column_sums();

		// P f(Phi z) = (1/J(z)) * integral over Omega of K_Gamma(z, w) (f o Phi)(w) J(w) lambda(w).
		const BandLimited h = f.pullback(rep.A) * BandLimited::monomial(s - MultiIndex::Ones(n), double(rep.d));
		const QuadratureGrid grid = make_grid(rep.factors(), resolve_grid(rep, pk.ctx, pk.weight, h.radial_exponents(), opts));
		const auto tables = kernel_tables(pk, z, grid, true);

		Complex total(0.0);
		for (const BandTerm &t : h.terms())
		{
			Complex coset_sum(0.0);
			for (const auto &per_factor : tables)
			{
				Complex prod(1.0);
				for (Eigen::Index j = 0; j < n; ++j)
				{
					const FactorGrid &fg = grid.factors[std::size_t(j)];
					const auto &vals = per_factor[std::size_t(j)];
					const std::int64_t freq = t.a(j) - t.b(j);
					const double radial = double(t.a(j) + t.b(j)) + t.s[std::size_t(j)].value();
					Complex acc(0.0);
					for (std::size_t i = 0; i < fg.nodes.size(); ++i)
					{
						const Complex w = fg.nodes[i];
						const double r = std::abs(w);
						acc += vals[i] * std::pow(r, radial) * ipow(w / r, freq);
					}
					prod *= acc;
				}
				coset_sum += prod;
			}
			total += t.c * coset_sum;
		}
		return total / jacobian_det(rep.A, z);
	}

	Complex apply_mbp(const PolyhedronKernel &pk, const SampledFunction &f, const QuadratureGrid &grid,
		const ComplexPoint &zeta)
	{
		const QuotientRep &rep = pk.rep;
		require_inside(rep, zeta);
		if (grid.dimension() != rep.dimension())
			throw Error(ErrorCode::DimensionMismatch, "grid and domain dimensions differ");
		const ComplexPoint z = preimage(rep, zeta);
		check_rate(z);
		const auto tables = kernel_tables(pk, z, grid, false);
		const Complex total = tensor_visit<Complex>(grid, [&](const std::vector<std::size_t> &idx, const ComplexPoint &w) {
			Complex k(0.0);
			for (const auto &per_factor : tables)
			{
				Complex prod(1.0);
				for (std::size_t j = 0; j < idx.size(); ++j)
					prod *= per_factor[j][idx[j]];
				k += prod;
			}
			return k * f.f(monomial_map_eval(rep.A, w)) * jacobian_det(rep.A, w);
		});
		return total / jacobian_det(rep.A, z);
	}

	double apply_absolute(const PolyhedronKernel &pk, const SampledFunction &f, const QuadratureGrid &grid,
		const ComplexPoint &zeta)
	{
		const QuotientRep &rep = pk.rep;
		require_inside(rep, zeta);
		if (grid.dimension() != rep.dimension())
			throw Error(ErrorCode::DimensionMismatch, "grid and domain dimensions differ");
		const ComplexPoint z = preimage(rep, zeta);
		check_rate(z);
		const auto tables = kernel_tables(pk, z, grid, false);
		const double total = tensor_visit<double>(grid, [&](const std::vector<std::size_t> &idx, const ComplexPoint &w) {
			Complex k(0.0);
			for (const auto &per_factor : tables)
			{
				Complex prod(1.0);
				for (std::size_t j = 0; j < idx.size(); ++j)
					prod *= per_factor[j][idx[j]];
				k += prod;
			}
			const double fv = f.f(monomial_map_eval(rep.A, w)).real();
			if (fv < 0.0)
				throw Error(ErrorCode::InvalidArgument, "absolute operator needs a nonnegative function");
			return std::abs(k) * fv * std::abs(jacobian_det(rep.A, w));
		});
		return total / std::abs(jacobian_det(rep.A, z));
	}

	double SchurWitness::phi(Complex z) const
	{
		const double r = std::abs(z);
		return rpow(r, double(theta) / q) * std::pow(1.0 - std::pow(r, 2.0 * b), -1.0 / (p * q));
	}

	double SchurWitness::psi(Complex w) const
	{
		const double r = std::abs(w);
		return rpow(r, double(theta) / q) * std::pow(1.0 - std::pow(r, 2.0 * b * (p - 1.0)), -1.0 / (p * q));
	}

	SchurWitness schur_witness(const Kernel1D &k)
	{
		return SchurWitness{k.progression.theta, k.progression.b, k.ctx.p.value(), k.ctx.q.value()};
	}

	SchurReport verify_schur(const Kernel1D &k, const std::vector<double> &radii, GridOptions opts)
	{
		const SchurWitness wit = schur_witness(k);
		if (opts.upper_grading == 1)
			opts.upper_grading = 4;
		if (opts.power == 0)
			opts.power = radial_power({k.ctx.p, k.ctx.q, k.gamma, Param(k.progression.theta) / k.ctx.q});
		const FactorGrid grid = factor_grid(k.factor, opts);
		const double p = wit.p, q = wit.q, g = k.gamma.value();

		std::vector<double> psi_q(grid.nodes.size()), phi_p(grid.nodes.size());
		for (std::size_t i = 0; i < grid.nodes.size(); ++i)
		{
			const double mu = rpow(std::abs(grid.nodes[i]), g) * grid.weights[i];
			psi_q[i] = std::pow(wit.psi(grid.nodes[i]), q) * mu;
			phi_p[i] = std::pow(wit.phi(grid.nodes[i]), p) * mu;
		}

		SchurReport report;
		for (double r : radii)
		{
			double best1 = 0.0, best2 = 0.0;
			for (int a = 0; a < 4; ++a)
			{
				const Complex x = std::polar(r, 0.3 + a * pi / 2.0);
				double s1 = 0.0, s2 = 0.0;
				for (std::size_t i = 0; i < grid.nodes.size(); ++i)
				{
					s1 += std::abs(subkernel_1d(k, x, grid.nodes[i])) * psi_q[i];
					s2 += std::abs(subkernel_1d(k, grid.nodes[i], x)) * phi_p[i];
				}
				best1 = std::max(best1, s1 / std::pow(wit.phi(x), q));
				best2 = std::max(best2, s2 / std::pow(wit.psi(x), p));
			}
			report.radii.push_back(r);
			report.ratio1.push_back(best1);
			report.ratio2.push_back(best2);
			report.C1_hat = std::max(report.C1_hat, best1);
			report.C2_hat = std::max(report.C2_hat, best2);
		}
		return report;
	}

	DefectFit fit_constant(const std::vector<Complex> &basis, const std::vector<Complex> &values)
	{
		if (basis.size() != values.size() || basis.empty())
			throw Error(ErrorCode::DimensionMismatch, "fit needs matching non-empty samples");
		Complex num(0.0);
		double den = 0.0;
		for (std::size_t i = 0; i < basis.size(); ++i)
		{
			num += std::conj(basis[i]) * values[i];
			den += std::norm(basis[i]);
		}
		DefectFit fit;
		fit.C = num / den;
		for (std::size_t i = 0; i < basis.size(); ++i)
			fit.residual = std::max(fit.residual, std::abs(values[i] - fit.C * basis[i]));
		return fit;
	}

	std::vector<double> bergman_defect_divergence(const QuotientRep &rep, const LpContext &ctx, const ComplexPoint &zeta,
		const std::vector<double> &eps, GridOptions opts)
	{
		require_inside(rep, zeta);
		const PolyhedronKernel pk = make_polyhedron_kernel(rep, LpContext::make(Param(2)));
		const ComplexPoint z = preimage(rep, zeta);
		const double q = ctx.q.value();
		const double d = double(rep.d);
		const MultiIndex s = rep.column_sums();
		const Eigen::Index n = rep.dimension();
		const double Jz = std::abs(jacobian_det(rep.A, z));

		std::vector<double> out;
		for (double e : eps)
		{
			QuadratureGrid grid;
			grid.options = opts;
			for (Eigen::Index j = 0; j < n; ++j)
			{
				GridOptions fo = opts;
				const FactorKind kind = rep.factors()[std::size_t(j)];
				if (kind == FactorKind::PuncturedUnitDisc)
					fo.inner = e;
				else if (fo.power == 0)
					fo.power = radial_power({ctx.q, Param(s(j) - 1) * (Param(2) - ctx.q)});
				grid.factors.push_back(factor_grid(kind, fo));
			}
			// |B(Phi z, Phi w)|^q |J(w)|^2 / d = d^{q-1} |K_Gamma(z,w)|^q |J(w)|^{2-q} / |J(z)|^q.
			const auto tables = kernel_tables(pk, z, grid, false);
			double value = 0.0;
			if (pk.cosets.size() == 1)
			{
				value = std::pow(d, q - 1.0) * std::pow(pk.prefactor, q) * std::pow(d, 2.0 - q) / std::pow(Jz, q);
				for (Eigen::Index j = 0; j < n; ++j)
				{
					const FactorGrid &fg = grid.factors[std::size_t(j)];
					const double ej = double(s(j) - 1) * (2.0 - q);
					double acc = 0.0;
					for (std::size_t i = 0; i < fg.nodes.size(); ++i)
						acc += fg.weights[i] * std::pow(std::abs(tables[0][std::size_t(j)][i]), q) *
							rpow(std::abs(fg.nodes[i]), ej);
					value *= acc;
				}
			}
			else
			{
				value = tensor_visit<double>(grid, [&](const std::vector<std::size_t> &idx, const ComplexPoint &w) {
					Complex k(0.0);
					for (const auto &per_factor : tables)
					{
						Complex prod(1.0);
						for (std::size_t j = 0; j < idx.size(); ++j)
							prod *= per_factor[j][idx[j]];
						k += prod;
					}
					return std::pow(d, q - 1.0) * std::pow(pk.prefactor * std::abs(k), q) *
						std::pow(std::abs(jacobian_det(rep.A, w)), 2.0 - q) / std::pow(Jz, q);
				});
			}
			out.push_back(std::pow(value, 1.0 / q));
		}
		return out;
	}

	const char *to_string(SequenceVerdict v)
	{
		switch (v)
		{
		case SequenceVerdict::Diverges: return "diverges";
		case SequenceVerdict::Stabilizes: return "stabilizes";
		case SequenceVerdict::Inconclusive: return "inconclusive";
		}
		return "inconclusive";
	}

	SequenceVerdict classify_sequence(const std::vector<double> &values)
	{
		const std::size_t m = values.size();
		if (m >= 5)
		{
			bool grows = true;
			for (std::size_t i = m - 4; i < m; ++i)
				grows = grows && values[i] >= 1.10 * values[i - 1];
			if (grows)
				return SequenceVerdict::Diverges;
		}
		if (m >= 2 && std::abs(values[m - 1] - values[m - 2]) <= 0.01 * std::abs(values[m - 1]))
			return SequenceVerdict::Stabilizes;
		return SequenceVerdict::Inconclusive;
	}

	NullspaceReport nullspace_demo(const QuotientRep &rep, const LpContext &ctx, const std::vector<ComplexPoint> &points,
		std::int64_t max_alpha1, GridOptions opts)
	{
		IntMatrix hartogs(2, 2);
		hartogs << 1, 1, 0, 1;
		if (rep.A.rows() != 2 || rep.A != hartogs)
			throw Error(ErrorCode::UnsupportedDomain, "nullspace demonstration is defined for the Hartogs triangle");
		const double p = ctx.p.value();
		if (!(p > 4.0 / 3.0 && p < 2.0))
			throw Error(ErrorCode::InvalidArgument, "nullspace demonstration needs 4/3 < p < 2");
		const PolyhedronKernel bergman = make_polyhedron_kernel(rep, LpContext::make(Param(2)));
		const PolyhedronKernel mbp = make_polyhedron_kernel(rep, ctx);

		NullspaceReport report;
		for (std::int64_t a1 = 0; a1 <= max_alpha1; ++a1)
		{
			NullspaceRow row;
			row.alpha = MultiIndex(2);
			row.alpha << a1, -2 - a1;
			const BandLimited f = BandLimited::monomial(row.alpha);
			for (const ComplexPoint &zeta : points)
			{
				const Complex exact = f(zeta);
				row.bergman_max = std::max(row.bergman_max, std::abs(apply_mbp(bergman, f, opts, zeta)));
				row.mbp_rel_err = std::max(row.mbp_rel_err, std::abs(apply_mbp(mbp, f, opts, zeta) - exact) / std::abs(exact));
			}
			report.annihilated.push_back(row);
		}
		MultiIndex in_l2(2);
		in_l2 << 0, -1;
		const BandLimited g = BandLimited::monomial(in_l2);
		for (const ComplexPoint &zeta : points)
		{
			const Complex exact = g(zeta);
			report.bergman_reproduction_rel_err = std::max(report.bergman_reproduction_rel_err,
				std::abs(apply_mbp(bergman, g, opts, zeta) - exact) / std::abs(exact));
		}
		return report;
	}
} // namespace mbk
