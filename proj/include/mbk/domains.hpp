#pragma once

#include "mbk/core.hpp"

#include <string>
#include <vector>

namespace mbk
{
	enum class FactorKind
	{
		UnitDisc,
		PuncturedUnitDisc,
	};

	const char *to_string(FactorKind kind);

	/// Algebraic description of a supported Reinhardt domain.
	/// Polyhedra keep the rows of B as defining exponents: |z^{b^j}| < 1.
	class DomainSpec
	{
	public:
		enum class Type
		{
			Disc,
			PuncturedDisc,
			Product,
			MonomialPolyhedron,
		};

		static DomainSpec disc();
		static DomainSpec punctured_disc();
		static DomainSpec product(std::vector<FactorKind> factors);
		/// Runs validate_matrix; the stored B is the normalized one.
		static DomainSpec polyhedron(const IntMatrix &B);

		Type type() const { return type_; }
		int dimension() const;
		const std::vector<FactorKind> &factors() const { return factors_; }
		const IntMatrix &matrix() const { return B_; }
		std::string describe() const;

		friend bool operator==(const DomainSpec &a, const DomainSpec &b);

	private:
		Type type_ = Type::Disc;
		std::vector<FactorKind> factors_;
		IntMatrix B_;
	};

	// Exact integer linear algebra.
	std::int64_t determinant(const IntMatrix &M);
	IntMatrix adjugate(const IntMatrix &M);
	IntMatrix identity_matrix(int n);

	/// Normal form of a defining matrix: rows divided by their gcd and permuted so
	/// that det B > 0; every entry of B^{-1} must then be nonnegative.
	IntMatrix validate_matrix(const IntMatrix &B);

	/// Finite group of coordinatewise rotations z_j -> z_j exp(2 pi i m_j / d).
	/// Phases are kept exactly as integer numerators m (mod d).
	struct DeckGroup
	{
		IntMatrix A;
		std::int64_t order = 1;
		std::vector<MultiIndex> numerators;

		ComplexPoint phase(std::size_t i) const;
		ComplexPoint apply(std::size_t i, const ComplexPoint &z) const;
	};

	DeckGroup deck_group(const IntMatrix &A);

	/// Omega (a product of discs and punctured discs), the monomial map Phi_A and
	/// its deck group. Discs, punctured discs and products are their own quotient
	/// with A = I, so every domain is handled through this one representation.
	struct QuotientRep
	{
		DomainSpec source;
		DomainSpec target;
		IntMatrix A;
		std::int64_t d = 1;
		DeckGroup group;
		std::vector<MultiIndex> coset_reps;

		int dimension() const { return int(A.rows()); }
		const std::vector<FactorKind> &factors() const { return source.factors(); }
		/// Column sums 1A, the exponent of det Phi_A' is 1A - 1.
		MultiIndex column_sums() const;
		bool trivial() const;
	};

	QuotientRep quotient_representation(const IntMatrix &B);
	QuotientRep quotient_representation(const DomainSpec &spec);

	/// z^A, component j equal to prod_k z_k^{a^j_k}.
	ComplexPoint monomial_map_eval(const IntMatrix &A, const ComplexPoint &z);
	/// det A * z^{1A - 1}.
	Complex jacobian_det(const IntMatrix &A, const ComplexPoint &z);
	/// e_alpha(z) = prod z_k^{alpha_k}; DomainError for 0 to a negative power.
	Complex monomial(const MultiIndex &alpha, const ComplexPoint &z);

	bool contains(const DomainSpec &spec, const ComplexPoint &z);
	DomainSpec reinhardt_power(const DomainSpec &spec, double m);

	/// Principal preimage under Phi_A: log|z| = A^{-1} log|zeta|, arg z = A^{-1} arg zeta.
	/// Zero coordinates of zeta are resolved by zeroing the matching source coordinates.
	ComplexPoint preimage(const QuotientRep &rep, const ComplexPoint &zeta);
} // namespace mbk
