#include "property.hpp"

#include "mbk/core.hpp"

#include <doctest.h>

using namespace mbk;
using prop::Gen;

TEST_CASE("rationals are stored reduced with a positive denominator")
{
	const Rational r(6, -4);
	CHECK(r.num() == -3);
	CHECK(r.den() == 2);
	CHECK(r.floor() == -2);
	CHECK(Rational(7, 7).is_integer());
	CHECK(Rational(0, -5) == Rational(0));
	CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("rational arithmetic agrees with cross-multiplied integers")
{
	prop::for_all(500, 11, [](Gen &g) {
		const std::int64_t a = g.integer(-50, 50), b = g.integer(1, 50), c = g.integer(-50, 50), d = g.integer(1, 50);
		const Rational x(a, b), y(c, d);
		CHECK(x + y == Rational(a * d + c * b, b * d));
		CHECK(x - y == Rational(a * d - c * b, b * d));
		CHECK(x * y == Rational(a * c, b * d));
		if (c != 0)
			CHECK(x / y == Rational(a * d, b * c));
		CHECK((x < y) == (a * d < c * b));
		CHECK(double(x.floor()) == std::floor(double(a) / double(b)));
	});
}

TEST_CASE("rational overflow is reported, not wrapped")
{
	const Rational big(INT64_MAX / 2 + 1);
	CHECK_THROWS_AS(big * Rational(4), Error);
	try
	{
		(void)(big + big + big);
		FAIL("expected overflow");
	}
	catch (const Error &e)
	{
		CHECK(e.code() == ErrorCode::Overflow);
	}
}

TEST_CASE("rational parsing")
{
	CHECK(*Rational::parse("3/2") == Rational(3, 2));
	CHECK(*Rational::parse(" -4/6 ") == Rational(-2, 3));
	CHECK(*Rational::parse("1.25") == Rational(5, 4));
	CHECK(*Rational::parse("-0.5") == Rational(-1, 2));
	CHECK(*Rational::parse("7") == Rational(7));
	CHECK_FALSE(Rational::parse("1/0"));
	CHECK_FALSE(Rational::parse("abc"));
	CHECK_FALSE(Rational::parse(""));
	CHECK(Rational(5, 3).str() == "5/3");
	CHECK(Rational(-4).str() == "-4");
}

TEST_CASE("params keep exact values through arithmetic")
{
	const Param p = Param::parse("3/2");
	REQUIRE(p.is_exact());
	const Param q = p / (p - Param(1));
	REQUIRE(q.is_exact());
	CHECK(*q.exact() == Rational(3));
	// 4 * (-1/2) + 2 is exactly zero, so the sign test is exact.
	CHECK((Param(4) * prop::frac(-1, 2) + Param(2)).sign() == 0);

	const Param f = Param::parse("1.5");
	CHECK_FALSE(f.is_exact());
	CHECK(f.value() == 1.5);
	CHECK_FALSE((f + Param(1)).is_exact());
	CHECK_THROWS_AS(Param::parse("x"), Error);
	CHECK_THROWS_AS(Param::parse("2y"), Error);
}

TEST_CASE("exact param products overflow into floating values")
{
	const Param a(Rational(1, INT64_MAX / 3));
	const Param b = a * a;
	CHECK_FALSE(b.is_exact());
	CHECK(b.value() == doctest::Approx(a.value() * a.value()));
}

TEST_CASE("gcd, lcm and mod")
{
	CHECK(gcd(12, -18) == 6);
	CHECK(gcd(0, 5) == 5);
	CHECK(lcm(4, 6) == 12);
	CHECK(mod(-7, 3) == 2);
	prop::for_all(500, 12, [](Gen &g) {
		const std::int64_t a = g.integer(-1000, 1000), b = g.integer(1, 1000);
		const std::int64_t r = mod(a, b);
		CHECK(r >= 0);
		CHECK(r < b);
		CHECK((a - r) % b == 0);
		const std::int64_t d = gcd(a, b);
		CHECK(a % d == 0);
		CHECK(b % d == 0);
		CHECK(lcm(a, b) * d == (a < 0 ? -a : a) * b);
	});
}

TEST_CASE("integer powers match std::pow")
{
	CHECK(ipow(Complex(0.0, 1.0), 2) == Complex(-1.0, 0.0));
	CHECK(ipow(Complex(2.0, 0.0), -3) == Complex(0.125, 0.0));
	CHECK(ipow(Complex(0.0, 0.0), 0) == Complex(1.0, 0.0));
	prop::for_all(300, 13, [](Gen &g) {
		const Complex z = g.polar(0.1, 2.0);
		const std::int64_t k = g.integer(-12, 12);
		CHECK(std::abs(ipow(z, k) - std::pow(z, double(k))) <= 1e-12 * std::abs(std::pow(z, double(k))) + 1e-300);
	});
	CHECK(rpow(0.0, 0.0) == 1.0);
	CHECK(rpow(0.0, 2.0) == 0.0);
	CHECK(rpow(4.0, 0.5) == 2.0);
}

TEST_CASE("errors carry their code in the message")
{
	const Error e(ErrorCode::NotInDomain, "outside");
	CHECK(e.code() == ErrorCode::NotInDomain);
	CHECK(std::string(e.what()).find("NotInDomain") != std::string::npos);
}
