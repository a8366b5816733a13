#include "mbk/band_limited.hpp"

#include <cmath>

namespace mbk
{
	namespace
	{
		std::vector<Param> zeros(int n)
		{
			return std::vector<Param>(std::size_t(n), Param(0));
		}
	} // namespace

	BandLimited BandLimited::constant(int n, Complex c)
	{
		BandLimited f(n);
		f.add(BandTerm{c, MultiIndex::Zero(n), MultiIndex::Zero(n), zeros(n)});
		return f;
	}

	BandLimited BandLimited::monomial(const MultiIndex &alpha, Complex c)
	{
		const int n = int(alpha.size());
		BandLimited f(n);
		f.add(BandTerm{c, alpha, MultiIndex::Zero(n), zeros(n)});
		return f;
	}

	BandLimited BandLimited::conj_monomial(const MultiIndex &alpha, Complex c)
	{
		const int n = int(alpha.size());
		BandLimited f(n);
		f.add(BandTerm{c, MultiIndex::Zero(n), alpha, zeros(n)});
		return f;
	}

	BandLimited BandLimited::abs_power(const std::vector<Param> &s, Complex c)
	{
		const int n = int(s.size());
		BandLimited f(n);
		f.add(BandTerm{c, MultiIndex::Zero(n), MultiIndex::Zero(n), s});
		return f;
	}

	void BandLimited::add(const BandTerm &term)
	{
		if (term.a.size() != n_ || term.b.size() != n_ || int(term.s.size()) != n_)
			throw Error(ErrorCode::DimensionMismatch, "band-limited term dimension mismatch");
		terms_.push_back(term);
	}

	Complex BandLimited::operator()(const ComplexPoint &z) const
	{
		if (z.size() != n_)
			throw Error(ErrorCode::DimensionMismatch, "band-limited function evaluated at wrong dimension");
		Complex sum(0.0);
		for (const BandTerm &t : terms_)
		{
			Complex v = t.c;
			for (int k = 0; k < n_; ++k)
			{
				const Complex zk = z(k);
				const double r = std::abs(zk);
				if (r == 0.0)
				{
					const double total = double(t.a(k) + t.b(k)) + t.s[std::size_t(k)].value();
					if (total > 0.0)
					{
						v = 0.0;
						break;
					}
					if (total < 0.0 || t.a(k) != 0 || t.b(k) != 0)
						throw Error(ErrorCode::DomainError, "band-limited function singular at a zero coordinate");
					continue;
				}
				v *= ipow(zk, t.a(k)) * ipow(std::conj(zk), t.b(k)) * rpow(r, t.s[std::size_t(k)].value());
			}
			sum += v;
		}
		return sum;
	}

	BandLimited BandLimited::conj() const
	{
		BandLimited g(n_);
		for (const BandTerm &t : terms_)
			g.terms_.push_back(BandTerm{std::conj(t.c), t.b, t.a, t.s});
		return g;
	}

	BandLimited BandLimited::pullback(const IntMatrix &A) const
	{
		if (A.rows() != n_ || A.cols() != n_)
			throw Error(ErrorCode::DimensionMismatch, "pullback matrix dimension mismatch");
		BandLimited g(n_);
		for (const BandTerm &t : terms_)
		{
			std::vector<Param> s = zeros(n_);
			for (int j = 0; j < n_; ++j)
				for (int k = 0; k < n_; ++k)
					if (A(k, j) != 0)
						s[std::size_t(j)] = s[std::size_t(j)] + t.s[std::size_t(k)] * Param(A(k, j));
			g.terms_.push_back(BandTerm{t.c, t.a * A, t.b * A, s});
		}
		return g;
	}

	BandLimited BandLimited::twisted(const Param &p) const
	{
		BandLimited g(n_);
		for (const BandTerm &t : terms_)
		{
			std::vector<Param> s = zeros(n_);
			for (int k = 0; k < n_; ++k)
				s[std::size_t(k)] = Param(t.a(k) + t.b(k)) * (p - Param(2)) + t.s[std::size_t(k)] * (p - Param(1));
			g.terms_.push_back(BandTerm{t.c, t.a, t.b, s});
		}
		return g;
	}

	BandLimited BandLimited::scaled(Complex c) const
	{
		BandLimited g = *this;
		for (BandTerm &t : g.terms_)
			t.c *= c;
		return g;
	}

	std::int64_t BandLimited::max_frequency() const
	{
		std::int64_t m = 0;
		for (const BandTerm &t : terms_)
			for (int k = 0; k < n_; ++k)
				m = std::max<std::int64_t>(m, std::abs(t.a(k) - t.b(k)));
		return m;
	}

	std::vector<Param> BandLimited::radial_exponents() const
	{
		std::vector<Param> out;
		for (const BandTerm &t : terms_)
			out.insert(out.end(), t.s.begin(), t.s.end());
		return out;
	}

	BandLimited operator*(const BandLimited &f, const BandLimited &g)
	{
		if (f.n_ != g.n_)
			throw Error(ErrorCode::DimensionMismatch, "product of band-limited functions of different dimension");
		BandLimited h(f.n_);
		for (const BandTerm &x : f.terms_)
			for (const BandTerm &y : g.terms_)
			{
				std::vector<Param> s(x.s.size());
				for (std::size_t k = 0; k < s.size(); ++k)
					s[k] = x.s[k] + y.s[k];
				h.terms_.push_back(BandTerm{x.c * y.c, x.a + y.a, x.b + y.b, s});
			}
		return h;
	}

	BandLimited operator+(const BandLimited &f, const BandLimited &g)
	{
		if (f.n_ != g.n_)
			throw Error(ErrorCode::DimensionMismatch, "sum of band-limited functions of different dimension");
		BandLimited h = f;
		h.terms_.insert(h.terms_.end(), g.terms_.begin(), g.terms_.end());
		return h;
	}
} // namespace mbk
