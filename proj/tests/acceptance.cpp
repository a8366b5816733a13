// Acceptance checks, one PASS/FAIL line per criterion.
#include "mbk/duality.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace mbk;

namespace
{
	using Clock = std::chrono::steady_clock;

	int failures = 0;

	void report(int id, bool ok, const std::string &what, const std::string &detail, double seconds)
	{
		std::printf("%s criterion %d: %s (%s, %.2fs)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str(), seconds);
		std::fflush(stdout);
		if (!ok)
			++failures;
	}

	// Runs a check, turning any library error into a failure with the message attached.
	void run(int id, const std::string &what, double limit, const std::function<bool(std::string &)> &check)
	{
		const auto t0 = Clock::now();
		std::string detail;
		bool ok = false;
		try
		{
			ok = check(detail);
		}
		catch (const std::exception &e)
		{
			detail = std::string("error: ") + e.what();
		}
		const double s = std::chrono::duration<double>(Clock::now() - t0).count();
		if (ok && s > limit)
		{
			ok = false;
			detail += ", over time limit";
		}
		report(id, ok, what, detail, s);
	}

	std::string fmt(const char *f, double x)
	{
		char buf[64];
		std::snprintf(buf, sizeof buf, f, x);
		return buf;
	}

	IntMatrix mat2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
	{
		IntMatrix B(2, 2);
		B << a, b, c, d;
		return B;
	}

	IntMatrix hartogs(std::int64_t m, std::int64_t n)
	{
		return mat2(m, -n, 0, 1);
	}

	MultiIndex idx(std::initializer_list<std::int64_t> v)
	{
		MultiIndex a(static_cast<Eigen::Index>(v.size()));
		Eigen::Index k = 0;
		for (auto x : v)
			a(k++) = x;
		return a;
	}

	Complex polar(std::mt19937_64 &rng, double rmin, double rmax)
	{
		std::uniform_real_distribution<double> r(rmin, rmax), th(0.0, two_pi);
		return std::polar(r(rng), th(rng));
	}

	// Interior point of the target domain: a random point of Omega pushed through Phi.
	ComplexPoint interior(std::mt19937_64 &rng, const QuotientRep &rep, double rmin, double rmax)
	{
		ComplexPoint z(rep.dimension());
		for (Eigen::Index j = 0; j < z.size(); ++j)
			z(j) = polar(rng, rmin, rmax);
		return monomial_map_eval(rep.A, z);
	}

	Param frac(std::int64_t a, std::int64_t b)
	{
		return Param(Rational(a, b));
	}

	// Criterion 1 oracle: the defining series summed term by term.
	Complex series_1d(FactorKind kind, double p, double gamma, std::int64_t a, std::int64_t b, Complex z, Complex w, int N)
	{
		Complex sum(0.0);
		const std::int64_t lo = kind == FactorKind::UnitDisc ? 0 : -N;
		for (std::int64_t alpha = lo; alpha <= N; ++alpha)
		{
			if (mod(alpha - a, b) != 0 || !(p * double(alpha) + gamma + 2.0 > 0.0))
				continue;
			const double c = (p * double(alpha) + gamma + 2.0) / two_pi;
			sum += c * std::pow(z * std::conj(w) * std::pow(std::abs(w), p - 2.0), double(alpha));
		}
		return sum;
	}

	// Criterion 7 oracle: integral of |f|^p over {|z1|^m < |z2|^n < 1} in polar
	// coordinates, with z1 = |z2|^{n/m} u. Independent of the library grids.
	double hartogs_lp(std::int64_t m, std::int64_t n, const std::function<Complex(Complex, Complex)> &f, double p, int R,
		int T, int k)
	{
		// Gauss-Legendre on (0,1) by Newton iteration.
		std::vector<double> x(static_cast<std::size_t>(R)), w(static_cast<std::size_t>(R));
		for (int i = 0; i < R; ++i)
		{
			double t = std::cos(pi * (i + 0.75) / (R + 0.5)), dp = 0.0;
			for (int it = 0; it < 100; ++it)
			{
				double p0 = 1.0, p1 = t;
				for (int j = 2; j <= R; ++j)
				{
					const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
					p0 = p1;
					p1 = p2;
				}
				dp = R * (t * p1 - p0) / (t * t - 1.0);
				const double dt = p1 / dp;
				t -= dt;
				if (std::abs(dt) < 1e-16)
					break;
			}
			x[std::size_t(i)] = 0.5 * (1.0 - t);
			w[std::size_t(i)] = 1.0 / ((1.0 - t * t) * dp * dp);
		}
		double total = 0.0;
		for (int i2 = 0; i2 < R; ++i2)
		{
			const double u2 = x[std::size_t(i2)];
			const double r2 = std::pow(u2, k);
			const double dr2 = w[std::size_t(i2)] * k * std::pow(u2, k - 1);
			const double top = std::pow(r2, double(n) / double(m));
			for (int i1 = 0; i1 < R; ++i1)
			{
				const double u1 = x[std::size_t(i1)];
				const double r1 = top * std::pow(u1, k);
				const double dr1 = top * w[std::size_t(i1)] * k * std::pow(u1, k - 1);
				double ang = 0.0;
				for (int a = 0; a < T; ++a)
					for (int b = 0; b < T; ++b)
					{
						const Complex z1 = std::polar(r1, two_pi * a / T);
						const Complex z2 = std::polar(r2, two_pi * b / T);
						ang += std::pow(std::abs(f(z1, z2)), p);
					}
				total += ang * (two_pi / T) * (two_pi / T) * r1 * r2 * dr1 * dr2;
			}
		}
		return total;
	}
} // namespace

int main()
{
	const FactorKind D = FactorKind::UnitDisc;
	const FactorKind Ds = FactorKind::PuncturedUnitDisc;
	const QuotientRep disc = quotient_representation(DomainSpec::disc());
	const QuotientRep pdisc = quotient_representation(DomainSpec::punctured_disc());
	const QuotientRep bidisc = quotient_representation(DomainSpec::product({D, D}));
	const QuotientRep H = quotient_representation(hartogs(1, 1));
	const QuotientRep H21 = quotient_representation(hartogs(2, 1));
	const std::vector<Param> p3 = {frac(3, 2), Param(2), Param(3)};

	run(1, "closed-form subkernels match the defining series", 10.0, [&](std::string &detail) {
		std::mt19937_64 rng(1);
		const std::vector<Param> ps = {frac(4, 3), frac(3, 2), Param(2), Param(3), Param(4)};
		double worst = 0.0;
		int sets = 0;
		for (FactorKind kind : {D, Ds})
			for (const Param &p : ps)
			{
				const LpContext ctx = LpContext::make(p);
				for (const Param &g : {Param(-1), Param(0), Param(2) - p})
					for (auto [a, b] : {std::pair<int, int>{0, 1}, {1, 2}})
					{
						const Kernel1D k = Kernel1D::make(kind, ctx, g, a, b);
						++sets;
						for (int i = 0; i < 50;)
						{
							const Complex z = polar(rng, 0.02, 0.99), w = polar(rng, 0.02, 0.99);
							const double t = std::abs(kernel_variable(z, w, p.value()));
							if (t < 1e-3 || t > 0.8)
								continue;
							++i;
							const Complex oracle = series_1d(kind, p.value(), g.value(), a, b, z, w, 200);
							worst = std::max(worst, std::abs(subkernel_1d(k, z, w) - oracle));
							if (a == 0 && b == 1)
								worst = std::max(worst, std::abs(mbk_1d(kind, ctx, g, z, w) - oracle));
						}
					}
			}
		detail = std::to_string(sets) + " parameter sets, max abs err " + fmt("%.2e", worst);
		return worst <= 1e-9;
	});

	run(2, "p = 2 disc kernel is the Bergman kernel", 5.0, [&](std::string &detail) {
		std::mt19937_64 rng(2);
		const LpContext ctx = LpContext::make(Param(2));
		double worst = 0.0;
		for (int i = 0; i < 100; ++i)
		{
			const Complex z = polar(rng, 0.0, 0.95), w = polar(rng, 0.0, 0.95);
			const Complex exact = 1.0 / (pi * (1.0 - z * std::conj(w)) * (1.0 - z * std::conj(w)));
			worst = std::max(worst, std::abs(mbk_1d(D, ctx, Param(0), z, w) - exact));
		}
		detail = "max abs err " + fmt("%.2e", worst);
		return worst <= 1e-12;
	});

	run(3, "coset decomposition equals the invariant series", 60.0, [&](std::string &detail) {
		std::mt19937_64 rng(3);
		double worst = 0.0;
		bool counts = true;
		for (const QuotientRep *rep : {&H, &H21})
		{
			counts = counts && std::int64_t(rep->coset_reps.size()) == rep->d;
			for (const Param &p : p3)
			{
				const PolyhedronKernel pk = make_polyhedron_kernel(*rep, LpContext::make(p));
				counts = counts && pk.cosets.size() == rep->coset_reps.size();
				for (int i = 0; i < 20; ++i)
				{
					ComplexPoint z(2), w(2);
					for (int j = 0; j < 2; ++j)
					{
						z(j) = polar(rng, 0.1, 0.7);
						w(j) = polar(rng, 0.1, 0.7);
					}
					const Complex closed = gamma_invariant_kernel(pk, z, w);
					const Complex series = gamma_invariant_series(pk, z, w, 60);
					worst = std::max(worst, std::abs(closed - series) / std::abs(closed));
				}
			}
		}
		detail = "coset counts " + std::to_string(H.coset_reps.size()) + "," + std::to_string(H21.coset_reps.size()) +
			", max rel err " + fmt("%.2e", worst);
		return counts && H.coset_reps.size() == 1 && H21.coset_reps.size() == 2 && worst <= 1e-6;
	});

	run(4, "transformation law against the target series", 60.0, [&](std::string &detail) {
		std::mt19937_64 rng(4);
		double worst = 0.0, deck = 0.0;
		SeriesOptions so;
		so.window = 80;
		for (const Param &p : p3)
		{
			const LpContext ctx = LpContext::make(p);
			const PolyhedronKernel pk = make_polyhedron_kernel(H, ctx);
			const PolyhedronKernel pk21 = make_polyhedron_kernel(H21, ctx);
			for (int i = 0; i < 10; ++i)
			{
				const ComplexPoint z = interior(rng, H, 0.2, 0.6), w = interior(rng, H, 0.2, 0.6);
				const Complex closed = mbk_polyhedron(pk, z, w);
				const Complex series = mbk_series(H, ctx, RadialWeight::unweighted(), z, w, so);
				worst = std::max(worst, std::abs(closed - series) / std::abs(series));
				for (std::size_t a = 0; a < H.group.numerators.size(); ++a)
					for (std::size_t b = 0; b < H.group.numerators.size(); ++b)
						deck = std::max(deck, std::abs(mbk_polyhedron(pk, z, w, a, b) - closed) / std::abs(closed));
				// The nontrivial deck group of the 2/1 triangle exercises the same invariance.
				const ComplexPoint z2 = interior(rng, H21, 0.2, 0.6), w2 = interior(rng, H21, 0.2, 0.6);
				const Complex base = mbk_polyhedron(pk21, z2, w2);
				for (std::size_t a = 0; a < H21.group.numerators.size(); ++a)
					for (std::size_t b = 0; b < H21.group.numerators.size(); ++b)
						deck = std::max(deck, std::abs(mbk_polyhedron(pk21, z2, w2, a, b) - base) / std::abs(base));
			}
		}
		detail = "max rel err " + fmt("%.2e", worst) + ", deck spread " + fmt("%.2e", deck);
		return worst <= 1e-6 && deck <= 1e-10;
	});

	run(5, "projection reproduces allowable monomials", 120.0, [&](std::string &detail) {
		std::mt19937_64 rng(5);
		double worst = 0.0;
		int count = 0;
		for (const QuotientRep *rep : {&disc, &pdisc, &bidisc, &H})
			for (const Param &p : p3)
			{
				const LpContext ctx = LpContext::make(p);
				const PolyhedronKernel pk = make_polyhedron_kernel(*rep, ctx);
				std::vector<ComplexPoint> pts;
				for (int i = 0; i < 3; ++i)
					pts.push_back(interior(rng, *rep, 0.2, 0.8));
				for (const MultiIndex &alpha : enumerate_allowable(*rep, ctx, RadialWeight::unweighted(), 1))
				{
					const BandLimited f = BandLimited::monomial(alpha);
					for (const ComplexPoint &z : pts)
					{
						const Complex exact = f(z);
						worst = std::max(worst, std::abs(apply_mbp(pk, f, GridOptions{}, z) - exact) / std::abs(exact));
					}
					++count;
				}
			}
		detail = std::to_string(count) + " (domain, p, alpha) cases, max rel err " + fmt("%.2e", worst);
		return worst <= 1e-6;
	});

	run(6, "p_star of generalized Hartogs triangles", 10.0, [&](std::string &detail) {
		bool ok = true;
		for (auto [m, n] : {std::pair<int, int>{1, 1}, {2, 1}, {3, 1}, {3, 2}})
		{
			const ThresholdReport r = thresholds(quotient_representation(hartogs(m, n)), 12);
			const Rational expect(2 * (m + n), m + n - 1);
			const bool hit = r.p_star && *r.p_star == expect;
			detail += (detail.empty() ? "" : ", ") + std::to_string(m) + "/" + std::to_string(n) + ":" +
				(r.p_star ? r.p_star->str() : std::string("none"));
			ok = ok && hit;
		}
		return ok;
	});

	run(7, "homothetic scaling of L^p norms", 120.0, [&](std::string &detail) {
		std::mt19937_64 rng(7);
		std::uniform_real_distribution<double> u(-1.0, 1.0);
		std::uniform_int_distribution<int> pick(0, 2);
		// Bounded ratios on the 2/1 triangle: z1, z2 and z1^2/z2.
		const std::vector<MultiIndex> steps = {idx({1, 0}), idx({0, 1}), idx({2, -1})};
		double worst = 0.0;
		const int R_oracle = 28, T_oracle = 20, R_lib = 32, T_lib = 21;
		for (const Param &p : p3)
		{
			const LpContext ctx = LpContext::make(p);
			const std::vector<MultiIndex> lead = enumerate_allowable(H21, ctx, RadialWeight::unweighted(), 1);
			const OmegaWeight ow = omega_weight(H21, ctx, RadialWeight::unweighted());
			const RadialWeight lambda{ow.gamma, ow.L};
			GridOptions go;
			go.R = R_lib;
			go.T = T_lib;
			std::vector<Param> hints = {p};
			hints.insert(hints.end(), ow.gamma.begin(), ow.gamma.end());
			go.power = radial_power(hints);
			const QuadratureGrid grid = make_grid(H21.factors(), go);
			for (int i = 0; i < 20; ++i)
			{
				// e_alpha0 * (c0 + sum c_k z^{delta_k}) with sum |c_k| < |c0|: no zeros, so |f|^p is smooth.
				const MultiIndex a0 = lead[std::size_t(i) % lead.size()];
				BandLimited f = BandLimited::monomial(a0, Complex(1.0, 0.5 * u(rng)));
				for (int t = 0; t < 3; ++t)
				{
					MultiIndex delta = steps[std::size_t(pick(rng))];
					if (t == 2)
						delta = delta + steps[std::size_t(pick(rng))];
					f = f + BandLimited::monomial(a0 + delta, Complex(0.1 * u(rng), 0.1 * u(rng)));
				}
				const auto fz = [&](Complex z1, Complex z2) {
					ComplexPoint z(2);
					z << z1, z2;
					return f(z);
				};
				const double lhs = double(H21.d) * hartogs_lp(2, 1, fz, p.value(), R_oracle, T_oracle, 4);
				const SampledFunction pulled{[&](const ComplexPoint &w) {
					return std::pow(std::abs(f(monomial_map_eval(H21.A, w)) * jacobian_det(H21.A, w)), p.value());
				}, "pullback"};
				const double rhs = integrate(grid, pulled, lambda).real();
				worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
			}
		}
		detail = "60 polynomials, max rel err " + fmt("%.2e", worst);
		return worst <= 1e-8;
	});

	run(8, "twisted conjugate symmetry", 30.0, [&](std::string &detail) {
		std::mt19937_64 rng(8);
		double worst = 0.0;
		for (const QuotientRep *rep : {&disc, &pdisc})
			for (const Param &p : {frac(3, 2), Param(3)})
			{
				const LpContext ctx = LpContext::make(p);
				for (int i = 0; i < 20; ++i)
				{
					ComplexPoint z(1), w(1);
					z(0) = polar(rng, 0.05, 0.9);
					w(0) = polar(rng, 0.05, 0.9);
					worst = std::max(worst, twisted_symmetry_residual(*rep, ctx, z, w, KernelMethod::Closed));
				}
			}
		detail = "max residual " + fmt("%.2e", worst);
		return worst <= 1e-8;
	});

	run(9, "duality pairing", 120.0, [&](std::string &detail) {
		const LpContext ctx = LpContext::make(Param(3));
		const PairingContext pc = PairingContext::make(H, ctx);
		BandLimited f = BandLimited::monomial(idx({0, -1}), Complex(1.0, 0.5));
		f = f + BandLimited::monomial(idx({1, 0}), Complex(-0.25, 0.0));
		f = f + BandLimited::conj_monomial(idx({0, 1}), Complex(0.5, 0.0));
		BandLimited g = BandLimited::monomial(idx({0, 0}), Complex(0.5, 0.0));
		g = g + BandLimited::monomial(idx({0, -1}), Complex(0.0, 1.0));
		g = g + BandLimited::monomial(idx({1, 1}), Complex(0.3, -0.2));
		const AdjointReport adj = adjoint_residual(pc, f, g);
		const DualBasisReport bio = dual_basis_check(pc, 1);
		detail = "adjoint residual " + fmt("%.2e", adj.residual) + ", biorthogonality " + fmt("%.2e", bio.max_deviation) +
			" over " + std::to_string(bio.indices.size()) + " indices";
		return adj.residual <= 1e-5 && bio.max_deviation <= 1e-8 && !bio.indices.empty();
	});

	run(10, "defect exhibits on the Hartogs triangle", 120.0, [&](std::string &detail) {
		std::mt19937_64 rng(10);
		const PolyhedronKernel bergman = make_polyhedron_kernel(H, LpContext::make(Param(2)));
		const BandLimited zbar2 = BandLimited::conj_monomial(idx({0, 1}));
		std::vector<Complex> basis, values;
		for (int i = 0; i < 10; ++i)
		{
			const ComplexPoint z = interior(rng, H, 0.2, 0.8);
			basis.push_back(1.0 / z(1));
			values.push_back(apply_mbp(bergman, zbar2, GridOptions{}, z));
		}
		const DefectFit fit = fit_constant(basis, values);
		const bool a = fit.residual < 1e-5 && std::abs(fit.C - 0.5) < 1e-6;

		ComplexPoint z0(2);
		z0 << Complex(0.2, 0.1), Complex(0.5, 0.0);
		const std::vector<double> eps = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4};
		const SequenceVerdict q5 = classify_sequence(bergman_defect_divergence(H, LpContext::make(frac(5, 4)), z0, eps));
		const SequenceVerdict q2 = classify_sequence(bergman_defect_divergence(H, LpContext::make(Param(2)), z0, eps));
		const bool b = q5 == SequenceVerdict::Diverges && q2 != SequenceVerdict::Diverges;

		std::vector<ComplexPoint> pts;
		for (int i = 0; i < 4; ++i)
			pts.push_back(interior(rng, H, 0.3, 0.8));
		const NullspaceReport ns = nullspace_demo(H, LpContext::make(frac(3, 2)), pts, 2);
		double killed = 0.0, kept = 0.0;
		for (const NullspaceRow &row : ns.annihilated)
		{
			killed = std::max(killed, row.bergman_max);
			kept = std::max(kept, row.mbp_rel_err);
		}
		const bool c = killed < 1e-8 && kept < 1e-6 && ns.bergman_reproduction_rel_err < 1e-6;
		detail = "fit C " + fmt("%.6f", fit.C.real()) + " residual " + fmt("%.1e", fit.residual) + "; q=5 " +
			to_string(q5) + ", q=2 " + to_string(q2) + "; nullspace " + fmt("%.1e", killed) + " / " + fmt("%.1e", kept);
		return a && b && c;
	});

	run(11, "dual-norm identity", 60.0, [&](std::string &detail) {
		double worst = 0.0;
		int count = 0;
		for (const QuotientRep *rep : {&disc, &pdisc, &bidisc, &H, &H21})
			for (const Param &p : p3)
			{
				const LpContext ctx = LpContext::make(p);
				for (const MultiIndex &alpha : enumerate_allowable(*rep, ctx, RadialWeight::unweighted(), 1))
				{
					worst = std::max(worst, std::abs(dual_norm_product(*rep, ctx, RadialWeight::unweighted(), alpha) - 1.0));
					++count;
				}
			}
		detail = std::to_string(count) + " cases, max |product - 1| " + fmt("%.2e", worst);
		return worst <= 1e-8;
	});

	std::printf("%d of 11 criteria failed\n", failures);
	return failures == 0 ? 0 : 1;
}
