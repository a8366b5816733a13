#include "mbk/domains.hpp"
#include "mbk/indices.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace mbk
{
	const char *to_string(FactorKind kind)
	{
		return kind == FactorKind::UnitDisc ? "disc" : "punctured_disc";
	}

	DomainSpec DomainSpec::disc()
	{
		DomainSpec s;
		s.type_ = Type::Disc;
		s.factors_ = {FactorKind::UnitDisc};
		return s;
	}

	DomainSpec DomainSpec::punctured_disc()
	{
		DomainSpec s;
		s.type_ = Type::PuncturedDisc;
		s.factors_ = {FactorKind::PuncturedUnitDisc};
		return s;
	}

	DomainSpec DomainSpec::product(std::vector<FactorKind> factors)
	{
		if (factors.empty())
			throw Error(ErrorCode::DimensionMismatch, "product domain needs at least one factor");
		DomainSpec s;
		s.type_ = Type::Product;
		s.factors_ = std::move(factors);
		return s;
	}

	DomainSpec DomainSpec::polyhedron(const IntMatrix &B)
	{
		DomainSpec s;
		s.type_ = Type::MonomialPolyhedron;
		s.B_ = validate_matrix(B);
		return s;
	}

	int DomainSpec::dimension() const
	{
		if (type_ == Type::MonomialPolyhedron)
			return int(B_.rows());
		return int(factors_.size());
	}

	std::string DomainSpec::describe() const
	{
		std::ostringstream out;
		switch (type_)
		{
		case Type::Disc:
			out << "disc";
			break;
		case Type::PuncturedDisc:
			out << "punctured_disc";
			break;
		case Type::Product:
			out << "product(";
			for (std::size_t j = 0; j < factors_.size(); ++j)
				out << (j ? "," : "") << to_string(factors_[j]);
			out << ")";
			break;
		case Type::MonomialPolyhedron:
			out << "monomial_polyhedron[";
			for (Eigen::Index i = 0; i < B_.rows(); ++i)
			{
				out << (i ? ";" : "");
				for (Eigen::Index j = 0; j < B_.cols(); ++j)
					out << (j ? "," : "") << B_(i, j);
			}
			out << "]";
			break;
		}
		return out.str();
	}

	bool operator==(const DomainSpec &a, const DomainSpec &b)
	{
		if (a.type_ != b.type_)
			return false;
		if (a.type_ == DomainSpec::Type::MonomialPolyhedron)
			return a.B_.rows() == b.B_.rows() && a.B_ == b.B_;
		return a.factors_ == b.factors_;
	}

	namespace
	{
		std::int64_t narrow(__int128 v)
		{
			if (v > INT64_MAX || v < INT64_MIN)
				throw Error(ErrorCode::Overflow, "integer matrix arithmetic overflow");
			return std::int64_t(v);
		}

		IntMatrix minor_matrix(const IntMatrix &M, Eigen::Index row, Eigen::Index col)
		{
			const Eigen::Index n = M.rows();
			IntMatrix out(n - 1, n - 1);
			for (Eigen::Index i = 0, oi = 0; i < n; ++i)
			{
				if (i == row)
					continue;
				for (Eigen::Index j = 0, oj = 0; j < n; ++j)
				{
					if (j == col)
						continue;
					out(oi, oj++) = M(i, j);
				}
				++oi;
			}
			return out;
		}

		bool column_has_negative(const IntMatrix &B, Eigen::Index k)
		{
			return (B.col(k).array() < 0).any();
		}
	} // namespace

	// Fraction-free Gaussian elimination; every intermediate is an exact minor.
	std::int64_t determinant(const IntMatrix &M)
	{
		if (M.rows() != M.cols())
			throw Error(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
		const Eigen::Index n = M.rows();
		if (n == 0)
			return 1;
		std::vector<__int128> a(std::size_t(n * n));
		for (Eigen::Index i = 0; i < n; ++i)
			for (Eigen::Index j = 0; j < n; ++j)
				a[std::size_t(i * n + j)] = M(i, j);
		auto at = [&](Eigen::Index i, Eigen::Index j) -> __int128 & { return a[std::size_t(i * n + j)]; };

		int sign = 1;
		__int128 prev = 1;
		for (Eigen::Index k = 0; k < n - 1; ++k)
		{
			if (at(k, k) == 0)
			{
				Eigen::Index swap = -1;
				for (Eigen::Index i = k + 1; i < n; ++i)
					if (at(i, k) != 0)
					{
						swap = i;
						break;
					}
				if (swap < 0)
					return 0;
				for (Eigen::Index j = 0; j < n; ++j)
					std::swap(at(k, j), at(swap, j));
				sign = -sign;
			}
			for (Eigen::Index i = k + 1; i < n; ++i)
				for (Eigen::Index j = k + 1; j < n; ++j)
				{
					at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
					narrow(at(i, j));
				}
			prev = at(k, k);
		}
		return narrow(sign * at(n - 1, n - 1));
	}

	IntMatrix adjugate(const IntMatrix &M)
	{
		const Eigen::Index n = M.rows();
		if (n != M.cols())
			throw Error(ErrorCode::DimensionMismatch, "adjugate of a non-square matrix");
		IntMatrix adj(n, n);
		if (n == 1)
		{
			adj(0, 0) = 1;
			return adj;
		}
		for (Eigen::Index i = 0; i < n; ++i)
			for (Eigen::Index j = 0; j < n; ++j)
			{
				const std::int64_t c = determinant(minor_matrix(M, i, j));
				adj(j, i) = ((i + j) % 2 == 0) ? c : -c;
			}
		return adj;
	}

	IntMatrix identity_matrix(int n)
	{
		return IntMatrix::Identity(n, n);
	}

	IntMatrix validate_matrix(const IntMatrix &input)
	{
		if (input.rows() != input.cols() || input.rows() == 0)
			throw Error(ErrorCode::DimensionMismatch, "defining matrix must be square and non-empty");
		IntMatrix B = input;
		const Eigen::Index n = B.rows();
		for (Eigen::Index i = 0; i < n; ++i)
		{
			std::int64_t g = 0;
			for (Eigen::Index j = 0; j < n; ++j)
				g = gcd(g, B(i, j));
			if (g > 1)
				B.row(i) /= g;
		}
		const std::int64_t det = determinant(B);
		if (det == 0)
			throw Error(ErrorCode::SingularMatrix, "defining matrix has zero determinant");

		// B^{-1} = adj(B)/det. Row permutations only permute columns of B^{-1}, and
		// positive scaling keeps signs, so a negative entry can never be removed.
		const IntMatrix adj = adjugate(B);
		const std::int64_t s = det > 0 ? 1 : -1;
		if (((adj * s).array() < 0).any())
			throw Error(ErrorCode::Unbounded, "B^{-1} has a negative entry, the polyhedron is unbounded");
		if (det > 0)
			return B;

		std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
		std::iota(perm.begin(), perm.end(), 0);
		while (std::next_permutation(perm.begin(), perm.end()))
		{
			IntMatrix P(n, n);
			for (Eigen::Index i = 0; i < n; ++i)
				P.row(i) = B.row(perm[std::size_t(i)]);
			if (determinant(P) > 0)
				return P;
		}
		throw Error(ErrorCode::NotNormalizable, "no row permutation gives a positive determinant");
	}

	ComplexPoint DeckGroup::phase(std::size_t i) const
	{
		const MultiIndex &m = numerators.at(i);
		ComplexPoint out(m.size());
		for (Eigen::Index j = 0; j < m.size(); ++j)
			out(j) = std::polar(1.0, two_pi * double(m(j)) / double(order));
		return out;
	}

	ComplexPoint DeckGroup::apply(std::size_t i, const ComplexPoint &z) const
	{
		return phase(i).cwiseProduct(z);
	}

	namespace
	{
		// Calls f on every vector in {0,...,d-1}^n, first coordinate varying fastest.
		template <class F>
		void for_each_box_vector(Eigen::Index n, std::int64_t d, F f)
		{
			double total = std::pow(double(d), double(n));
			if (total > 5e7)
				throw Error(ErrorCode::Overflow, "lattice enumeration too large");
			MultiIndex v = MultiIndex::Zero(n);
			while (true)
			{
				f(v);
				Eigen::Index j = 0;
				while (j < n && ++v(j) == d)
					v(j++) = 0;
				if (j == n)
					return;
			}
		}
	} // namespace

	DeckGroup deck_group(const IntMatrix &A)
	{
		const std::int64_t d = determinant(A);
		if (d == 0)
			throw Error(ErrorCode::SingularMatrix, "deck group of a singular matrix");
		if (d < 0)
			throw Error(ErrorCode::NotNormalizable, "deck group needs det A > 0");
		const IntMatrix adj = adjugate(A);
		std::set<std::vector<std::int64_t>> seen;
		for_each_box_vector(A.rows(), d, [&](const MultiIndex &nu) {
			std::vector<std::int64_t> m(static_cast<std::size_t>(A.rows()));
			for (Eigen::Index i = 0; i < A.rows(); ++i)
			{
				__int128 acc = 0;
				for (Eigen::Index k = 0; k < A.rows(); ++k)
					acc += __int128(adj(i, k)) * nu(k);
				m[std::size_t(i)] = std::int64_t(acc % d < 0 ? acc % d + d : acc % d);
			}
			seen.insert(std::move(m));
		});
		DeckGroup g;
		g.A = A;
		g.order = d;
		for (const auto &m : seen)
		{
			MultiIndex v(Eigen::Index(m.size()));
			for (std::size_t i = 0; i < m.size(); ++i)
				v(Eigen::Index(i)) = m[i];
			g.numerators.push_back(v);
		}
		return g;
	}

	MultiIndex QuotientRep::column_sums() const
	{
		return A.colwise().sum();
	}

	bool QuotientRep::trivial() const
	{
		return A == IntMatrix::Identity(A.rows(), A.cols());
	}

	QuotientRep quotient_representation(const IntMatrix &input)
	{
		const IntMatrix B = validate_matrix(input);
		const Eigen::Index n = B.rows();
		QuotientRep rep;
		rep.target = DomainSpec::polyhedron(B);
		rep.A = adjugate(B);
		rep.d = determinant(rep.A);

		std::vector<FactorKind> factors(std::size_t(n), FactorKind::UnitDisc);
		for (Eigen::Index j = 0; j < n; ++j)
			for (Eigen::Index k = 0; k < n; ++k)
				if (rep.A(k, j) >= 1 && column_has_negative(B, k))
					factors[std::size_t(j)] = FactorKind::PuncturedUnitDisc;
		rep.source = DomainSpec::product(factors);
		rep.group = deck_group(rep.A);
		rep.coset_reps = coset_reps(rep.A);
		return rep;
	}

	QuotientRep quotient_representation(const DomainSpec &spec)
	{
		if (spec.type() == DomainSpec::Type::MonomialPolyhedron)
			return quotient_representation(spec.matrix());
		QuotientRep rep;
		rep.source = DomainSpec::product(spec.factors());
		rep.target = spec;
		rep.A = identity_matrix(spec.dimension());
		rep.d = 1;
		rep.group = deck_group(rep.A);
		rep.coset_reps = {MultiIndex::Zero(spec.dimension())};
		return rep;
	}

	Complex monomial(const MultiIndex &alpha, const ComplexPoint &z)
	{
		if (alpha.size() != z.size())
			throw Error(ErrorCode::DimensionMismatch, "monomial exponent and point dimensions differ");
		Complex acc(1.0);
		for (Eigen::Index k = 0; k < z.size(); ++k)
		{
			if (alpha(k) == 0)
				continue;
			if (z(k) == Complex(0.0))
			{
				if (alpha(k) < 0)
					throw Error(ErrorCode::DomainError, "zero coordinate raised to a negative power");
				return Complex(0.0);
			}
			acc *= ipow(z(k), alpha(k));
		}
		return acc;
	}

	ComplexPoint monomial_map_eval(const IntMatrix &A, const ComplexPoint &z)
	{
		if (A.cols() != z.size() || A.rows() != A.cols())
			throw Error(ErrorCode::DimensionMismatch, "monomial map dimension mismatch");
		ComplexPoint out(A.rows());
		for (Eigen::Index j = 0; j < A.rows(); ++j)
			out(j) = monomial(A.row(j), z);
		return out;
	}

	Complex jacobian_det(const IntMatrix &A, const ComplexPoint &z)
	{
		const MultiIndex e = A.colwise().sum() - MultiIndex::Ones(A.cols());
		return double(determinant(A)) * monomial(e, z);
	}

	bool contains(const DomainSpec &spec, const ComplexPoint &z)
	{
		if (z.size() != spec.dimension())
			return false;
		for (Eigen::Index k = 0; k < z.size(); ++k)
			if (!std::isfinite(z(k).real()) || !std::isfinite(z(k).imag()))
				return false;

		if (spec.type() != DomainSpec::Type::MonomialPolyhedron)
		{
			for (Eigen::Index j = 0; j < z.size(); ++j)
			{
				const double r = std::abs(z(j));
				if (r >= 1.0)
					return false;
				if (spec.factors()[std::size_t(j)] == FactorKind::PuncturedUnitDisc && r == 0.0)
					return false;
			}
			return true;
		}

		const IntMatrix &B = spec.matrix();
		for (Eigen::Index k = 0; k < B.cols(); ++k)
			if (column_has_negative(B, k) && z(k) == Complex(0.0))
				return false;
		for (Eigen::Index j = 0; j < B.rows(); ++j)
		{
			double log_modulus = 0.0;
			bool zero = false;
			for (Eigen::Index k = 0; k < B.cols(); ++k)
			{
				if (B(j, k) == 0)
					continue;
				const double r = std::abs(z(k));
				if (r == 0.0)
				{
					zero = true;
					continue;
				}
				log_modulus += double(B(j, k)) * std::log(r);
			}
			if (!zero && log_modulus >= 0.0)
				return false;
		}
		return true;
	}

	DomainSpec reinhardt_power(const DomainSpec &spec, double m)
	{
		if (!(m > 0.0))
			throw Error(ErrorCode::InvalidArgument, "Reinhardt power needs m > 0");
		// Discs, punctured discs, their products and monomial polyhedra are all
		// invariant under |z_j| -> |z_j|^m.
		return spec;
	}

	ComplexPoint preimage(const QuotientRep &rep, const ComplexPoint &zeta)
	{
		const Eigen::Index n = rep.A.rows();
		if (zeta.size() != n)
			throw Error(ErrorCode::DimensionMismatch, "preimage point dimension mismatch");
		if (rep.trivial())
			return zeta;

		std::vector<Eigen::Index> zero_rows, live_rows, free_cols, zero_cols;
		for (Eigen::Index k = 0; k < n; ++k)
			(zeta(k) == Complex(0.0) ? zero_rows : live_rows).push_back(k);
		for (Eigen::Index j = 0; j < n; ++j)
		{
			bool used = false;
			for (Eigen::Index k : live_rows)
				used = used || rep.A(k, j) != 0;
			(used ? free_cols : zero_cols).push_back(j);
		}
		for (Eigen::Index k : zero_rows)
		{
			bool hit = false;
			for (Eigen::Index j : zero_cols)
				hit = hit || rep.A(k, j) >= 1;
			if (!hit)
				throw Error(ErrorCode::PreimageFailure, "zero coordinate cannot be produced by the monomial map");
		}
		if (free_cols.size() != live_rows.size())
			throw Error(ErrorCode::PreimageFailure, "preimage on the branch locus is not unique");

		const Eigen::Index m = Eigen::Index(live_rows.size());
		ComplexPoint z = ComplexPoint::Zero(n);
		if (m > 0)
		{
			Eigen::MatrixXd sub(m, m);
			Eigen::VectorXd log_r(m), arg(m);
			for (Eigen::Index a = 0; a < m; ++a)
			{
				for (Eigen::Index b = 0; b < m; ++b)
					sub(a, b) = double(rep.A(live_rows[std::size_t(a)], free_cols[std::size_t(b)]));
				const Complex v = zeta(live_rows[std::size_t(a)]);
				log_r(a) = std::log(std::abs(v));
				arg(a) = std::arg(v);
			}
			const auto lu = sub.fullPivLu();
			if (!lu.isInvertible())
				throw Error(ErrorCode::PreimageFailure, "monomial map is degenerate on this stratum");
			const Eigen::VectorXd r = lu.solve(log_r);
			const Eigen::VectorXd t = lu.solve(arg);
			for (Eigen::Index b = 0; b < m; ++b)
				z(free_cols[std::size_t(b)]) = std::polar(std::exp(r(b)), t(b));
		}
		return z;
	}
} // namespace mbk
