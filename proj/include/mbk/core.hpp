#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace mbk
{
	using Complex = std::complex<double>;

	// Dense types. Row-vector convention for exponents: e_alpha(z) = prod_k z_k^alpha_k.
	using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
	using MultiIndex = Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic>;
	using ComplexPoint = Eigen::VectorXcd;
	using RealVector = Eigen::VectorXd;

	enum class ErrorCode
	{
		SingularMatrix,
		NotNormalizable,
		Unbounded,
		DomainError,
		DimensionMismatch,
		PoleAtPuncture,
		NotInDomain,
		PreimageFailure,
		SlowConvergence,
		NonFiniteSample,
		NotAllowable,
		EmptyWindow,
		UnsupportedDomain,
		InvalidArgument,
		Overflow,
	};

	const char *to_string(ErrorCode code);

	class Error : public std::runtime_error
	{
	public:
		Error(ErrorCode code, const std::string &what);
		ErrorCode code() const noexcept { return code_; }

	private:
		ErrorCode code_;
	};

	/// Exact rational with 64-bit numerator/denominator, always reduced, den > 0.
	/// Arithmetic throws Error(Overflow) instead of wrapping.
	class Rational
	{
	public:
		Rational() = default;
		Rational(std::int64_t n) : num_(n) {}
		Rational(std::int64_t n, std::int64_t d);

		std::int64_t num() const { return num_; }
		std::int64_t den() const { return den_; }
		double value() const { return double(num_) / double(den_); }
		int sign() const { return (num_ > 0) - (num_ < 0); }
		std::int64_t floor() const;
		bool is_integer() const { return den_ == 1; }

		/// Parses "a/b", "a" or a terminating decimal such as "1.5".
		static std::optional<Rational> parse(const std::string &text);
		std::string str() const;

		friend Rational operator+(const Rational &a, const Rational &b);
		friend Rational operator-(const Rational &a, const Rational &b);
		friend Rational operator*(const Rational &a, const Rational &b);
		friend Rational operator/(const Rational &a, const Rational &b);
		friend Rational operator-(const Rational &a) { return Rational(-a.num_, a.den_); }
		friend bool operator==(const Rational &a, const Rational &b) { return a.num_ == b.num_ && a.den_ == b.den_; }
		friend bool operator<(const Rational &a, const Rational &b);
		friend bool operator>(const Rational &a, const Rational &b) { return b < a; }
		friend bool operator<=(const Rational &a, const Rational &b) { return !(b < a); }

	private:
		std::int64_t num_ = 0;
		std::int64_t den_ = 1;
	};

	/// A real parameter that remembers its exact rational value when it has one.
	/// Sign tests use the exact value whenever every operand was exact.
	class Param
	{
	public:
		Param() = default;
		Param(double v) : value_(v) {}
		Param(int v) : value_(v), exact_(Rational(v)) {}
		Param(std::int64_t v) : value_(double(v)), exact_(Rational(v)) {}
		Param(const Rational &r) : value_(r.value()), exact_(r) {}

		double value() const { return value_; }
		const std::optional<Rational> &exact() const { return exact_; }
		bool is_exact() const { return exact_.has_value(); }
		int sign() const;
		/// floor(x); exact when the rational value is known.
		std::int64_t floor() const;

		/// Parses "a/b" (exact), integers (exact) or floats (inexact).
		static Param parse(const std::string &text);
		std::string str() const;

		friend Param operator+(const Param &a, const Param &b);
		friend Param operator-(const Param &a, const Param &b);
		friend Param operator*(const Param &a, const Param &b);
		friend Param operator/(const Param &a, const Param &b);
		friend Param operator-(const Param &a);

	private:
		double value_ = 0.0;
		std::optional<Rational> exact_;
	};

	std::int64_t gcd(std::int64_t a, std::int64_t b);
	std::int64_t lcm(std::int64_t a, std::int64_t b);
	/// Non-negative remainder of a mod m, m > 0.
	std::int64_t mod(std::int64_t a, std::int64_t m);

	inline constexpr double pi = 3.14159265358979323846;
	inline constexpr double two_pi = 2.0 * pi;

	// Integer power of a complex number, negative exponents through the reciprocal.
	template <class Real>
	std::complex<Real> ipow(std::complex<Real> z, std::int64_t k)
	{
		if (k < 0)
		{
			z = Real(1) / z;
			k = -k;
		}
		std::complex<Real> acc(1);
		while (k)
		{
			if (k & 1)
				acc *= z;
			z *= z;
			k >>= 1;
		}
		return acc;
	}

	// |r|^s with the convention 0^0 = 1.
	template <class Real>
	Real rpow(Real r, Real s)
	{
		if (s == Real(0))
			return Real(1);
		return std::pow(r, s);
	}
} // namespace mbk
