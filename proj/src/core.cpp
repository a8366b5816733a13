#include "mbk/core.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace mbk
{
	const char *to_string(ErrorCode code)
	{
		switch (code)
		{
		case ErrorCode::SingularMatrix: return "SingularMatrix";
		case ErrorCode::NotNormalizable: return "NotNormalizable";
		case ErrorCode::Unbounded: return "Unbounded";
		case ErrorCode::DomainError: return "DomainError";
		case ErrorCode::DimensionMismatch: return "DimensionMismatch";
		case ErrorCode::PoleAtPuncture: return "PoleAtPuncture";
		case ErrorCode::NotInDomain: return "NotInDomain";
		case ErrorCode::PreimageFailure: return "PreimageFailure";
		case ErrorCode::SlowConvergence: return "SlowConvergence";
		case ErrorCode::NonFiniteSample: return "NonFiniteSample";
		case ErrorCode::NotAllowable: return "NotAllowable";
		case ErrorCode::EmptyWindow: return "EmptyWindow";
		case ErrorCode::UnsupportedDomain: return "UnsupportedDomain";
		case ErrorCode::InvalidArgument: return "InvalidArgument";
		case ErrorCode::Overflow: return "Overflow";
		}
		return "Unknown";
	}

	Error::Error(ErrorCode code, const std::string &what)
		: std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
	{
	}

	std::int64_t gcd(std::int64_t a, std::int64_t b)
	{
		a = a < 0 ? -a : a;
		b = b < 0 ? -b : b;
		while (b)
		{
			const std::int64_t t = a % b;
			a = b;
			b = t;
		}
		return a;
	}

	std::int64_t lcm(std::int64_t a, std::int64_t b)
	{
		if (a == 0 || b == 0)
			return 0;
		const std::int64_t l = (a / gcd(a, b)) * b;
		return l < 0 ? -l : l;
	}

	std::int64_t mod(std::int64_t a, std::int64_t m)
	{
		const std::int64_t r = a % m;
		return r < 0 ? r + m : r;
	}

	namespace
	{
		std::int64_t checked(__int128 v)
		{
			if (v > INT64_MAX || v < INT64_MIN)
				throw Error(ErrorCode::Overflow, "rational arithmetic overflow");
			return std::int64_t(v);
		}

		Rational make(__int128 n, __int128 d)
		{
			if (d == 0)
				throw Error(ErrorCode::InvalidArgument, "zero denominator");
			if (d < 0)
			{
				n = -n;
				d = -d;
			}
			__int128 a = n < 0 ? -n : n, b = d;
			while (b)
			{
				const __int128 t = a % b;
				a = b;
				b = t;
			}
			if (a > 1)
			{
				n /= a;
				d /= a;
			}
			return Rational(checked(n), checked(d));
		}
	} // namespace

	Rational::Rational(std::int64_t n, std::int64_t d)
	{
		if (d == 0)
			throw Error(ErrorCode::InvalidArgument, "zero denominator");
		if (d < 0)
		{
			n = -n;
			d = -d;
		}
		const std::int64_t g = gcd(n, d);
		num_ = g > 1 ? n / g : n;
		den_ = g > 1 ? d / g : d;
	}

	std::int64_t Rational::floor() const
	{
		std::int64_t q = num_ / den_;
		if (num_ % den_ != 0 && num_ < 0)
			--q;
		return q;
	}

	Rational operator+(const Rational &a, const Rational &b)
	{
		return make(__int128(a.num_) * b.den_ + __int128(b.num_) * a.den_, __int128(a.den_) * b.den_);
	}

	Rational operator-(const Rational &a, const Rational &b)
	{
		return make(__int128(a.num_) * b.den_ - __int128(b.num_) * a.den_, __int128(a.den_) * b.den_);
	}

	Rational operator*(const Rational &a, const Rational &b)
	{
		return make(__int128(a.num_) * b.num_, __int128(a.den_) * b.den_);
	}

	Rational operator/(const Rational &a, const Rational &b)
	{
		if (b.num_ == 0)
			throw Error(ErrorCode::InvalidArgument, "division by zero");
		return make(__int128(a.num_) * b.den_, __int128(a.den_) * b.num_);
	}

	bool operator<(const Rational &a, const Rational &b)
	{
		return __int128(a.num_) * b.den_ < __int128(b.num_) * a.den_;
	}

	std::optional<Rational> Rational::parse(const std::string &raw)
	{
		std::string text;
		for (char c : raw)
			if (!std::isspace(static_cast<unsigned char>(c)))
				text.push_back(c);
		if (text.empty())
			return std::nullopt;

		auto parse_int = [](const std::string &s) -> std::optional<std::int64_t> {
			if (s.empty())
				return std::nullopt;
			std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
			if (i == s.size() || s.size() - i > 18)
				return std::nullopt;
			for (std::size_t k = i; k < s.size(); ++k)
				if (!std::isdigit(static_cast<unsigned char>(s[k])))
					return std::nullopt;
			return std::stoll(s);
		};

		if (const auto slash = text.find('/'); slash != std::string::npos)
		{
			const auto n = parse_int(text.substr(0, slash));
			const auto d = parse_int(text.substr(slash + 1));
			if (!n || !d || *d == 0)
				return std::nullopt;
			return Rational(*n, *d);
		}
		if (const auto dot = text.find('.'); dot != std::string::npos)
		{
			const std::string whole = text.substr(0, dot);
			const std::string frac = text.substr(dot + 1);
			if (frac.empty() || frac.size() > 12 || frac.find_first_not_of("0123456789") != std::string::npos)
				return std::nullopt;
			const bool negative = !whole.empty() && whole[0] == '-';
			std::int64_t w = 0;
			if (!whole.empty() && whole != "-" && whole != "+")
			{
				const auto parsed = parse_int(whole);
				if (!parsed)
					return std::nullopt;
				w = *parsed < 0 ? -*parsed : *parsed;
			}
			std::int64_t scale = 1;
			for (std::size_t k = 0; k < frac.size(); ++k)
				scale *= 10;
			const Rational r = Rational(w) + Rational(std::stoll(frac), scale);
			return negative ? -r : r;
		}
		if (const auto n = parse_int(text))
			return Rational(*n);
		return std::nullopt;
	}

	std::string Rational::str() const
	{
		if (den_ == 1)
			return std::to_string(num_);
		return std::to_string(num_) + "/" + std::to_string(den_);
	}

	int Param::sign() const
	{
		if (exact_)
			return exact_->sign();
		return (value_ > 0) - (value_ < 0);
	}

	std::int64_t Param::floor() const
	{
		if (exact_)
			return exact_->floor();
		return static_cast<std::int64_t>(std::floor(value_));
	}

	Param Param::parse(const std::string &text)
	{
		// Only "a/b" and integers are taken as exact; decimals keep float semantics.
		if (text.find('.') == std::string::npos && text.find('e') == std::string::npos && text.find('E') == std::string::npos)
			if (const auto r = Rational::parse(text))
				return Param(*r);
		std::size_t used = 0;
		double v = 0;
		try
		{
			v = std::stod(text, &used);
		}
		catch (const std::exception &)
		{
			throw Error(ErrorCode::InvalidArgument, "cannot parse number '" + text + "'");
		}
		if (used != text.size())
			throw Error(ErrorCode::InvalidArgument, "cannot parse number '" + text + "'");
		return Param(v);
	}

	std::string Param::str() const
	{
		if (exact_)
			return exact_->str();
		std::ostringstream out;
		out.precision(17);
		out << value_;
		return out.str();
	}

	namespace
	{
		template <class Op, class FOp>
		Param combine(const Param &a, const Param &b, Op exact_op, FOp float_op)
		{
			if (a.exact() && b.exact())
			{
				try
				{
					return Param(exact_op(*a.exact(), *b.exact()));
				}
				catch (const Error &e)
				{
					if (e.code() != ErrorCode::Overflow)
						throw;
				}
			}
			return Param(float_op(a.value(), b.value()));
		}
	} // namespace

	Param operator+(const Param &a, const Param &b)
	{
		return combine(a, b, [](auto x, auto y) { return x + y; }, [](double x, double y) { return x + y; });
	}

	Param operator-(const Param &a, const Param &b)
	{
		return combine(a, b, [](auto x, auto y) { return x - y; }, [](double x, double y) { return x - y; });
	}

	Param operator*(const Param &a, const Param &b)
	{
		return combine(a, b, [](auto x, auto y) { return x * y; }, [](double x, double y) { return x * y; });
	}

	Param operator/(const Param &a, const Param &b)
	{
		return combine(a, b, [](auto x, auto y) { return x / y; }, [](double x, double y) { return x / y; });
	}

	Param operator-(const Param &a)
	{
		if (a.exact())
			return Param(-*a.exact());
		return Param(-a.value());
	}
} // namespace mbk
