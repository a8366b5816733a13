#pragma once

#include "mbk/core.hpp"

#include <vector>

namespace mbk
{
	/// c * prod_k z_k^{a_k} conj(z_k)^{b_k} |z_k|^{s_k}. Angular frequency a - b.
	struct BandTerm
	{
		Complex c;
		MultiIndex a;
		MultiIndex b;
		std::vector<Param> s;
	};

	/// Finite sum of BandTerm. Closed under products, conjugation, pullback by a
	/// monomial map and composition with the twisting map, so integrals of such
	/// functions split into one-dimensional factors.
	class BandLimited
	{
	public:
		explicit BandLimited(int n = 1) : n_(n) {}

		static BandLimited constant(int n, Complex c);
		static BandLimited monomial(const MultiIndex &alpha, Complex c = 1.0);
		static BandLimited conj_monomial(const MultiIndex &alpha, Complex c = 1.0);
		static BandLimited abs_power(const std::vector<Param> &s, Complex c = 1.0);

		int dimension() const { return n_; }
		const std::vector<BandTerm> &terms() const { return terms_; }
		void add(const BandTerm &term);

		Complex operator()(const ComplexPoint &z) const;

		BandLimited conj() const;
		/// f o Phi_A.
		BandLimited pullback(const IntMatrix &A) const;
		/// f o chi_p.
		BandLimited twisted(const Param &p) const;
		BandLimited scaled(Complex c) const;
		/// Largest |a_k - b_k| over terms and coordinates.
		std::int64_t max_frequency() const;
		/// Every exponent that enters the radial part, for choosing quadrature substitutions.
		std::vector<Param> radial_exponents() const;

		friend BandLimited operator*(const BandLimited &f, const BandLimited &g);
		friend BandLimited operator+(const BandLimited &f, const BandLimited &g);

	private:
		int n_;
		std::vector<BandTerm> terms_;
	};
} // namespace mbk
