#include "property.hpp"

#include "mbk/indices.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace mbk;
using prop::Gen;
using prop::frac;
using prop::idx;
using prop::mat2;

namespace
{
	LpContext lp(const Param &p) { return LpContext::make(p); }

	bool same_norm(double a, double b, double tol)
	{
		if (std::isinf(a) || std::isinf(b))
			return std::isinf(a) && std::isinf(b);
		return std::abs(a - b) <= tol * std::abs(b);
	}

	std::vector<std::int64_t> key(const MultiIndex &a) { return {a.data(), a.data() + a.size()}; }
} // namespace

TEST_CASE("conjugate exponents")
{
	const LpContext c = lp(frac(3, 2));
	CHECK(*c.q.exact() == Rational(3));
	CHECK(*c.conjugate().q.exact() == Rational(3, 2));
	CHECK_THROWS_AS(lp(Param(1)), Error);
	CHECK_THROWS_AS(lp(frac(1, 2)), Error);
}

TEST_CASE("theta examples")
{
	CHECK(theta(FactorKind::PuncturedUnitDisc, lp(frac(3, 2)), Param(0), 0, 1) == -1);
	CHECK(theta(FactorKind::UnitDisc, lp(frac(3, 2)), Param(0), 0, 1) == 0);
	CHECK(theta(FactorKind::PuncturedUnitDisc, lp(Param(2)), Param(0), 0, 1) == 0);
	CHECK(theta(FactorKind::PuncturedUnitDisc, lp(Param(3)), Param(0), 0, 1) == 0);
}

TEST_CASE("theta is the least admissible member of its progression")
{
	prop::for_all(400, 31, [](Gen &g) {
		const Param p = g.rational_p();
		const Param gamma = frac(g.integer(-12, 12), g.integer(1, 4));
		const std::int64_t b = g.integer(1, 5), a = g.integer(0, b - 1);
		const FactorKind f = g.integer(0, 1) ? FactorKind::UnitDisc : FactorKind::PuncturedUnitDisc;
		const LpContext ctx = lp(p);
		auto ok = [&](std::int64_t t) {
			const bool integrable = (p * Param(t) + gamma + Param(2)).sign() > 0;
			return integrable && (f == FactorKind::PuncturedUnitDisc || t >= 0);
		};
		std::int64_t brute = -200 * b + a;
		while (!ok(brute))
			brute += b;
		CHECK(theta(f, ctx, gamma, a, b) == brute);
	});
}

TEST_CASE("one-variable norms")
{
	CHECK(monomial_norm_1d(FactorKind::PuncturedUnitDisc, lp(frac(3, 2)), Param(0), -1) == doctest::Approx(4.0 * pi));
	CHECK(std::isinf(monomial_norm_1d(FactorKind::PuncturedUnitDisc, lp(Param(2)), Param(0), -1)));
	CHECK(std::isinf(monomial_norm_1d(FactorKind::UnitDisc, lp(frac(3, 2)), Param(0), -1)));
	prop::for_all(300, 32, [](Gen &g) {
		const Param p = g.rational_p();
		const Param gamma = frac(g.integer(-6, 6), 2);
		const std::int64_t alpha = g.integer(-4, 6);
		const double e = p.value() * double(alpha) + gamma.value();
		// 2 pi int_0^1 r^{e+1} dr.
		const double oracle = e > -2.0 ? two_pi * prop::dyadic([&](double r) { return std::pow(r, e + 1.0); }) : INFINITY;
		const double got = monomial_norm_1d(FactorKind::PuncturedUnitDisc, lp(p), gamma, alpha);
		CHECK(same_norm(got, oracle, 1e-9));
		CHECK(allowable_1d(FactorKind::PuncturedUnitDisc, lp(p), gamma, alpha) == std::isfinite(oracle));
	});
}

TEST_CASE("Hartogs triangle norm examples")
{
	const QuotientRep H = quotient_representation(mat2(1, -1, 0, 1));
	const RadialWeight u = RadialWeight::unweighted();
	CHECK(monomial_norm(H, lp(Param(2)), u, idx({0, -1})) == doctest::Approx(pi * pi));
	CHECK(monomial_norm(H, lp(Param(2)), u, idx({0, 0})) == doctest::Approx(pi * pi / 2.0));
	CHECK(std::isinf(monomial_norm(H, lp(Param(4)), u, idx({0, -1}))));
	CHECK_FALSE(is_allowable(H, lp(Param(4)), u, idx({0, -1})));
	CHECK(is_allowable(H, lp(Param(3)), u, idx({0, -1})));
}

TEST_CASE("norms on Hartogs triangles match nested radial integration")
{
	const std::vector<std::pair<std::int64_t, std::int64_t>> shapes{{1, 1}, {2, 1}};
	const std::vector<Param> ps{frac(3, 2), Param(2), Param(3)};
	for (auto [m, n] : shapes)
		for (const Param &p : ps)
		{
			const QuotientRep rep = quotient_representation(mat2(m, -n, 0, 1));
			for (std::int64_t a1 = -2; a1 <= 2; ++a1)
				for (std::int64_t a2 = -2; a2 <= 2; ++a2)
				{
					CAPTURE(m);
					CAPTURE(p.value());
					CAPTURE(a1);
					CAPTURE(a2);
					const double got = monomial_norm(rep, lp(p), RadialWeight::unweighted(), idx({a1, a2}));
					CHECK(same_norm(got, prop::hartogs_norm(m, n, a1, a2, p.value()), 1e-6));
				}
		}
}

TEST_CASE("products of discs factor into one-variable norms")
{
	prop::for_all(200, 33, [](Gen &g) {
		const Param p = g.rational_p();
		const LpContext ctx = lp(p);
		const QuotientRep rep = quotient_representation(
			DomainSpec::product({FactorKind::UnitDisc, FactorKind::PuncturedUnitDisc}));
		const MultiIndex a = g.index(2, 3);
		const double oracle = monomial_norm_1d(FactorKind::UnitDisc, ctx, Param(0), a(0)) *
			monomial_norm_1d(FactorKind::PuncturedUnitDisc, ctx, Param(0), a(1));
		CHECK(same_norm(monomial_norm(rep, ctx, RadialWeight::unweighted(), a), oracle, 1e-12));
	});
}

TEST_CASE("the pullback is an isometry up to the order of the deck group")
{
	prop::for_all(200, 34, [](Gen &g) {
		const std::int64_t m = g.integer(1, 4), n = g.integer(1, 4);
		if (gcd(m, n) != 1)
			return;
		const QuotientRep rep = quotient_representation(mat2(m, -n, 0, 1));
		const LpContext ctx = lp(g.rational_p());
		const RadialWeight u = RadialWeight::unweighted();
		const OmegaWeight w = omega_weight(rep, ctx, u);
		const MultiIndex a = g.index(2, 3);
		const MultiIndex beta = omega_index(rep, a);
		CHECK(beta == MultiIndex((a.array() + 1).matrix() * rep.A) - MultiIndex::Ones(2));
		CHECK(in_invariant_lattice(rep, beta));
		const double target = monomial_norm(rep, ctx, u, a);
		// Phi^# e_alpha = d e_beta, and ||Phi^# f||^p = d ||f||^p.
		const double omega = omega_monomial_norm(rep, ctx, w, beta);
		CHECK(same_norm(std::pow(double(rep.d), ctx.p.value()) * omega, double(rep.d) * target, 1e-10));
		CHECK(omega_allowable(rep, ctx, w, beta) == is_allowable(rep, ctx, u, a));
	});
}

TEST_CASE("window enumeration")
{
	const auto w = window_indices(2, 2);
	CHECK(w.size() == 25);
	CHECK(w.front() == idx({-2, -2}));
	CHECK(w.back() == idx({2, 2}));
	CHECK(std::is_sorted(w.begin(), w.end(), [](const MultiIndex &a, const MultiIndex &b) { return key(a) < key(b); }));
	CHECK(window_indices(3, 1).size() == 27);

	const QuotientRep H = quotient_representation(mat2(1, -1, 0, 1));
	const LpContext ctx = lp(Param(3));
	const auto allowed = enumerate_allowable(H, ctx, RadialWeight::unweighted(), 3);
	std::vector<MultiIndex> filtered;
	for (const auto &a : window_indices(2, 3))
		if (std::isfinite(prop::hartogs_norm(1, 1, a(0), a(1), 3.0)))
			filtered.push_back(a);
	CHECK(allowed == filtered);
}

TEST_CASE("coset representatives")
{
	const auto reps = coset_reps(IntMatrix::Identity(2, 2) * 2);
	std::set<std::vector<std::int64_t>> got;
	for (const auto &r : reps)
		got.insert(key(r));
	CHECK(got == std::set<std::vector<std::int64_t>>{{0, 0}, {2, 0}, {0, 2}, {2, 2}});

	prop::for_all(50, 35, [](Gen &g) {
		IntMatrix A = mat2(g.integer(1, 4), g.integer(0, 4), 0, g.integer(1, 4));
		const std::int64_t d = determinant(A);
		const auto r = coset_reps(A);
		CHECK(std::int64_t(r.size()) == d);
		std::set<std::vector<std::int64_t>> classes;
		for (const auto &v : r)
		{
			// Each representative is an integer combination of the rows of A.
			const Eigen::RowVectorXd c = v.cast<double>() * A.cast<double>().inverse();
			CHECK((c.array() - c.array().round()).abs().maxCoeff() < 1e-9);
			classes.insert({mod(v(0), d), mod(v(1), d)});
		}
		CHECK(std::int64_t(classes.size()) == d);
	});
}

TEST_CASE("Gamma-invariant indices are images of target indices")
{
	const QuotientRep rep = quotient_representation(mat2(2, -1, 0, 1));
	const LpContext ctx = lp(Param(2));
	const auto inv = gamma_invariant_indices(rep, ctx, RadialWeight::unweighted(), 6);
	std::set<std::vector<std::int64_t>> got;
	for (const auto &b : inv)
	{
		CHECK(in_invariant_lattice(rep, b));
		CHECK(b.cwiseAbs().maxCoeff() <= 6);
		got.insert(key(b));
	}
	std::set<std::vector<std::int64_t>> expect;
	for (const auto &a : enumerate_allowable(rep, ctx, RadialWeight::unweighted(), 8))
	{
		const MultiIndex b = omega_index(rep, a);
		if (b.cwiseAbs().maxCoeff() <= 6)
			expect.insert(key(b));
	}
	CHECK(got == expect);
	CHECK_FALSE(in_invariant_lattice(rep, idx({0, 1})));
}

TEST_CASE("Hartogs triangle threshold example")
{
	const ThresholdReport r = thresholds(quotient_representation(mat2(1, -1, 0, 1)), 4);
	REQUIRE(r.p_star);
	CHECK(*r.p_star == Rational(4));
	CHECK(*r.q_star == Rational(4, 3));
	CHECK(std::is_sorted(r.thresholds.begin(), r.thresholds.end()));
	CHECK(thresholds(quotient_representation(identity_matrix(2)), 4).p_star == std::nullopt);
}

TEST_CASE("p_star separates full and reduced allowable sets")
{
	for (auto [m, n] : std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 1}, {2, 1}, {3, 2}, {1, 2}})
	{
		CAPTURE(m);
		CAPTURE(n);
		const QuotientRep rep = quotient_representation(mat2(m, -n, 0, 1));
		const std::int64_t N = default_threshold_window(rep);
		const ThresholdReport r = thresholds(rep, N);
		REQUIRE(r.p_star);
		const double ps = r.p_star->value();
		CHECK(r.q_star->value() == doctest::Approx(ps / (ps - 1.0)));
		auto count = [&](double p) {
			int c = 0;
			for (const auto &a : window_indices(2, N))
				c += std::isfinite(prop::hartogs_norm(m, n, a(0), a(1), p));
			return c;
		};
		const int at2 = count(2.0);
		CHECK(count(0.5 * (2.0 + ps)) == at2);
		CHECK(count(ps - 1e-9) == at2);
		CHECK(count(ps + 1e-9) < at2);
	}
}
