#include "mbk/quadrature.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace mbk
{
	unsigned thread_count()
	{
		const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
		if (const char *env = std::getenv("MBP_THREADS"))
		{
			char *end = nullptr;
			const long v = std::strtol(env, &end, 10);
			if (end != env && *end == '\0' && v > 0)
				return std::min(hw, unsigned(std::min(v, 4096L)));
		}
		return hw;
	}

	void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w)
	{
		if (n < 1)
			throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre rule needs at least one node");
		x.assign(std::size_t(n), 0.0);
		w.assign(std::size_t(n), 0.0);
		for (int i = 0; i < (n + 1) / 2; ++i)
		{
			// Newton iteration on P_n from the Chebyshev-like initial guess.
			double t = std::cos(pi * (i + 0.75) / (n + 0.5));
			double dp = 1.0;
			for (int it = 0; it < 100; ++it)
			{
				double p0 = 1.0, p1 = t;
				for (int k = 2; k <= n; ++k)
				{
					const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
					p0 = p1;
					p1 = p2;
				}
				if (n == 1)
				{
					p1 = t;
					p0 = 1.0;
				}
				dp = n * (t * p1 - p0) / (t * t - 1.0);
				const double dt = p1 / dp;
				t -= dt;
				if (std::abs(dt) < 1e-16)
					break;
			}
			{
				double p0 = 1.0, p1 = t;
				for (int k = 2; k <= n; ++k)
				{
					const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
					p0 = p1;
					p1 = p2;
				}
				dp = n * (t * p1 - p0) / (t * t - 1.0);
			}
			const double weight = 2.0 / ((1.0 - t * t) * dp * dp);
			// Map from (-1, 1) to (0, 1).
			x[std::size_t(i)] = 0.5 * (1.0 - t);
			x[std::size_t(n - 1 - i)] = 0.5 * (1.0 + t);
			w[std::size_t(i)] = w[std::size_t(n - 1 - i)] = 0.5 * weight;
		}
	}

	int radial_power(const std::vector<Param> &exponents)
	{
		std::int64_t k = 1;
		for (const Param &e : exponents)
		{
			if (!e.exact())
				return 4;
			k = lcm(k, e.exact()->den());
			if (k > 12)
				return 12;
		}
		return int(k);
	}

	RadialRule radial_rule(const GridOptions &opts)
	{
		if (opts.R < 1)
			throw Error(ErrorCode::InvalidArgument, "radial node count must be positive");
		std::vector<double> u, v;
		gauss_legendre(opts.R, u, v);
		RadialRule rule;
		rule.r.resize(u.size());
		rule.w.resize(u.size());
		if (opts.inner > 0.0)
		{
			if (!(opts.inner < 1.0))
				throw Error(ErrorCode::InvalidArgument, "annulus inner radius must lie in (0, 1)");
			const double scale = -std::log(opts.inner);
			for (std::size_t i = 0; i < u.size(); ++i)
			{
				const double r = std::pow(opts.inner, 1.0 - u[i]);
				rule.r[i] = r;
				rule.w[i] = v[i] * scale * r * r;
			}
			return rule;
		}
		const int k = opts.power > 0 ? opts.power : 1;
		const int m = std::max(opts.upper_grading, 1);
		for (std::size_t i = 0; i < u.size(); ++i)
		{
			const double x = std::pow(u[i], k);
			const double dx = k * std::pow(u[i], k - 1);
			double r = x, dr = dx;
			if (m > 1)
			{
				r = -std::expm1(m * std::log1p(-x));
				dr = m * std::pow(1.0 - x, m - 1) * dx;
			}
			rule.r[i] = r;
			rule.w[i] = v[i] * dr * r;
		}
		return rule;
	}

	FactorGrid factor_grid(FactorKind kind, const GridOptions &opts)
	{
		if (opts.T < 1)
			throw Error(ErrorCode::InvalidArgument, "angular node count must be positive");
		const RadialRule rule = radial_rule(opts);
		FactorGrid g;
		g.kind = kind;
		const double dphi = two_pi / opts.T;
		for (std::size_t i = 0; i < rule.r.size(); ++i)
			for (int m = 0; m < opts.T; ++m)
			{
				g.nodes.push_back(std::polar(rule.r[i], dphi * m));
				g.weights.push_back(rule.w[i] * dphi);
			}
		return g;
	}

	std::size_t QuadratureGrid::size() const
	{
		std::size_t total = 1;
		for (const auto &f : factors)
			total *= f.nodes.size();
		return total;
	}

	QuadratureGrid make_grid(const std::vector<FactorKind> &factors, const GridOptions &opts)
	{
		QuadratureGrid grid;
		grid.options = opts;
		for (FactorKind kind : factors)
			grid.factors.push_back(factor_grid(kind, opts));
		return grid;
	}

	SampledFunction sampled(const BandLimited &f, std::string label)
	{
		return SampledFunction{[f](const ComplexPoint &z) { return f(z); }, std::move(label)};
	}

	namespace
	{
		double weight_value(const RadialWeight &weight, const ComplexPoint &z)
		{
			double v = weight.scale;
			for (std::size_t k = 0; k < weight.gamma.size(); ++k)
				v *= rpow(std::abs(z(Eigen::Index(k))), weight.gamma[k].value());
			return v;
		}

		// Visits every node of the tensor grid with its combined weight, in chunks
		// of consecutive flattened indices (last factor fastest).
		template <class F>
		Complex tensor_sum(const QuadratureGrid &grid, F &&term)
		{
			const std::size_t total = grid.size();
			const std::size_t chunk = 4096;
			const std::size_t chunks = (total + chunk - 1) / chunk;
			const int n = grid.dimension();
			return detail::ordered_sum<Complex>(chunks, [&](std::size_t c) {
				Complex acc(0.0);
				ComplexPoint z(n);
				const std::size_t end = std::min(total, (c + 1) * chunk);
				for (std::size_t idx = c * chunk; idx < end; ++idx)
				{
					std::size_t rest = idx;
					double w = 1.0;
					for (int j = n - 1; j >= 0; --j)
					{
						const FactorGrid &fg = grid.factors[std::size_t(j)];
						const std::size_t i = rest % fg.nodes.size();
						rest /= fg.nodes.size();
						z(j) = fg.nodes[i];
						w *= fg.weights[i];
					}
					const Complex v = term(z);
					if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
						throw Error(ErrorCode::NonFiniteSample, "non-finite integrand sample");
					acc += w * v;
				}
				return acc;
			});
		}
	} // namespace

	Complex integrate(const QuadratureGrid &grid, const SampledFunction &f, const RadialWeight &weight)
	{
		if (!weight.gamma.empty() && int(weight.gamma.size()) != grid.dimension())
			throw Error(ErrorCode::DimensionMismatch, "weight and grid dimensions differ");
		return tensor_sum(grid, [&](const ComplexPoint &z) { return f.f(z) * weight_value(weight, z); });
	}

	Complex integrate_polyhedron(const QuotientRep &rep, const QuadratureGrid &grid, const SampledFunction &g,
		const RadialWeight &weight)
	{
		if (grid.dimension() != rep.dimension())
			throw Error(ErrorCode::DimensionMismatch, "grid and domain dimensions differ");
		const double inv_order = 1.0 / double(rep.group.order);
		return tensor_sum(grid, [&](const ComplexPoint &z) {
			const ComplexPoint zeta = monomial_map_eval(rep.A, z);
			return g.f(zeta) * weight_value(weight, zeta) * std::norm(jacobian_det(rep.A, z)) * inv_order;
		});
	}

	Complex factor_moment(const FactorGrid &grid, std::int64_t a, std::int64_t b, double e)
	{
		const std::int64_t freq = a - b;
		const double radial = double(a + b) + e;
		Complex acc(0.0);
		for (std::size_t i = 0; i < grid.nodes.size(); ++i)
		{
			const Complex z = grid.nodes[i];
			const double r = std::abs(z);
			acc += grid.weights[i] * std::pow(r, radial) * ipow(z / r, freq);
		}
		return acc;
	}

	Complex integrate_omega(const QuadratureGrid &grid, const BandLimited &h, const OmegaWeight &w)
	{
		const int n = grid.dimension();
		if (h.dimension() != n || int(w.gamma.size()) != n)
			throw Error(ErrorCode::DimensionMismatch, "band-limited integrand dimension mismatch");
		Complex sum(0.0);
		for (const BandTerm &t : h.terms())
		{
			if (t.a == t.b && t.c != Complex(0.0))
				for (int j = 0; j < n; ++j)
				{
					const FactorGrid &fg = grid.factors[std::size_t(j)];
					const bool annulus = grid.options.inner > 0.0;
					const Param e = Param(t.a(j) + t.b(j)) + t.s[std::size_t(j)] + w.gamma[std::size_t(j)];
					if (!annulus && (e + Param(2)).sign() <= 0)
						throw Error(ErrorCode::NotNormalizable,
							std::string("integrand is not integrable near 0 on a ") +
								(fg.kind == FactorKind::UnitDisc ? "disc" : "punctured disc") + " factor");
				}
			Complex prod = t.c * w.L;
			for (int j = 0; j < n && prod != Complex(0.0); ++j)
				prod *= factor_moment(grid.factors[std::size_t(j)], t.a(j), t.b(j),
					t.s[std::size_t(j)].value() + w.gamma[std::size_t(j)].value());
			sum += prod;
		}
		if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
			throw Error(ErrorCode::NonFiniteSample, "non-finite band-limited integral");
		return sum;
	}

	Complex integrate_target(const QuotientRep &rep, const QuadratureGrid &grid, const BandLimited &f,
		const RadialWeight &weight)
	{
		const int n = rep.dimension();
		const MultiIndex s = rep.column_sums();
		std::vector<Param> e(static_cast<std::size_t>(n));
		for (int j = 0; j < n; ++j)
		{
			Param g = Param(2 * (s(j) - 1));
			for (int k = 0; k < n; ++k)
				if (rep.A(k, j) != 0)
					g = g + weight.exponent(std::size_t(k)) * Param(rep.A(k, j));
			e[std::size_t(j)] = g;
		}
		// |det Phi'|^2 / |Gamma| = d |z^{1A-1}|^2.
		const BandLimited h = f.pullback(rep.A) * BandLimited::abs_power(e, double(rep.d) * weight.scale);
		return integrate_omega(grid, h, OmegaWeight{std::vector<Param>(std::size_t(n), Param(0)), 1.0});
	}

	double lp_norm(const QuotientRep &rep, const QuadratureGrid &grid, const SampledFunction &f, const LpContext &ctx,
		const RadialWeight &weight)
	{
		const double p = ctx.p.value();
		const SampledFunction g{[&](const ComplexPoint &z) { return Complex(std::pow(std::abs(f.f(z)), p)); }, f.label};
		const double v = rep.trivial() ? integrate(grid, g, weight).real() : integrate_polyhedron(rep, grid, g, weight).real();
		return std::pow(v, 1.0 / p);
	}

	double lp_norm(const QuotientRep &rep, const QuadratureGrid &grid, const BandLimited &f, const LpContext &ctx,
		const RadialWeight &weight)
	{
		if (f.terms().size() != 1)
			return lp_norm(rep, grid, sampled(f), ctx, weight);
		const BandTerm &t = f.terms().front();
		std::vector<Param> s(t.s.size());
		for (std::size_t k = 0; k < s.size(); ++k)
			s[k] = ctx.p * (Param(t.a(Eigen::Index(k)) + t.b(Eigen::Index(k))) + t.s[k]);
		const BandLimited g = BandLimited::abs_power(s, std::pow(std::abs(t.c), ctx.p.value()));
		return std::pow(integrate_target(rep, grid, g, weight).real(), 1.0 / ctx.p.value());
	}
} // namespace mbk
