#include "mbk/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace mbk
{
	LpContext LpContext::make(const Param &p)
	{
		if (!(p.value() > 1.0) || (p.exact() && !(*p.exact() > Rational(1))) || !std::isfinite(p.value()))
			throw Error(ErrorCode::InvalidArgument, "p must lie in (1, inf), got " + p.str());
		return LpContext{p, p / (p - Param(1))};
	}

	OmegaWeight omega_weight(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight)
	{
		const Eigen::Index n = rep.A.rows();
		if (!weight.gamma.empty() && Eigen::Index(weight.gamma.size()) != n)
			throw Error(ErrorCode::DimensionMismatch, "weight exponent count does not match the domain");
		const MultiIndex s = rep.column_sums();
		OmegaWeight w;
		for (Eigen::Index j = 0; j < n; ++j)
		{
			Param g = Param(s(j) - 1) * (Param(2) - ctx.p);
			for (Eigen::Index k = 0; k < n; ++k)
				if (rep.A(k, j) != 0)
					g = g + weight.exponent(std::size_t(k)) * Param(rep.A(k, j));
			w.gamma.push_back(g);
		}
		w.L = weight.scale * std::pow(double(rep.d), 2.0 - ctx.p.value());
		return w;
	}

	namespace
	{
		bool positive_moment(const LpContext &ctx, const Param &gamma, std::int64_t alpha)
		{
			return (ctx.p * Param(alpha) + gamma + Param(2)).sign() > 0;
		}
	} // namespace

	std::int64_t theta(FactorKind factor, const LpContext &ctx, const Param &gamma, std::int64_t a, std::int64_t b)
	{
		if (b <= 0 || a < 0 || a >= b)
			throw Error(ErrorCode::InvalidArgument, "arithmetic progression needs 0 <= a < b");
		const Param x = -(gamma + Param(2)) / (ctx.p * Param(b)) - Param(Rational(a, b)) + Param(1);
		std::int64_t th = a + b * x.floor();
		if (!x.is_exact())
		{
			// The floating formula can land one step off near an exact boundary.
			while (positive_moment(ctx, gamma, th - b))
				th -= b;
			while (!positive_moment(ctx, gamma, th))
				th += b;
		}
		if (factor == FactorKind::UnitDisc)
			th = std::max(th, a);
		return th;
	}

	bool allowable_1d(FactorKind factor, const LpContext &ctx, const Param &gamma, std::int64_t alpha)
	{
		if (factor == FactorKind::UnitDisc && alpha < 0)
			return false;
		return positive_moment(ctx, gamma, alpha);
	}

	double monomial_norm_1d(FactorKind factor, const LpContext &ctx, const Param &gamma, std::int64_t alpha)
	{
		if (!allowable_1d(factor, ctx, gamma, alpha))
			return std::numeric_limits<double>::infinity();
		return two_pi / (ctx.p * Param(alpha) + gamma + Param(2)).value();
	}

	MultiIndex omega_index(const QuotientRep &rep, const MultiIndex &alpha)
	{
		if (alpha.size() != rep.A.rows())
			throw Error(ErrorCode::DimensionMismatch, "multi-index dimension does not match the domain");
		const MultiIndex ones = MultiIndex::Ones(alpha.size());
		return (alpha + ones) * rep.A - ones;
	}

	bool omega_allowable(const QuotientRep &rep, const LpContext &ctx, const OmegaWeight &w, const MultiIndex &beta)
	{
		if (beta.size() != rep.A.rows())
			throw Error(ErrorCode::DimensionMismatch, "multi-index dimension does not match the domain");
		for (Eigen::Index j = 0; j < beta.size(); ++j)
			if (!allowable_1d(rep.factors()[std::size_t(j)], ctx, w.gamma[std::size_t(j)], beta(j)))
				return false;
		return true;
	}

	double omega_monomial_norm(const QuotientRep &rep, const LpContext &ctx, const OmegaWeight &w, const MultiIndex &beta)
	{
		if (!omega_allowable(rep, ctx, w, beta))
			return std::numeric_limits<double>::infinity();
		double value = w.L;
		for (Eigen::Index j = 0; j < beta.size(); ++j)
			value *= monomial_norm_1d(rep.factors()[std::size_t(j)], ctx, w.gamma[std::size_t(j)], beta(j));
		return value;
	}

	double monomial_norm(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight, const MultiIndex &alpha)
	{
		const OmegaWeight w = omega_weight(rep, ctx, weight);
		const MultiIndex beta = omega_index(rep, alpha);
		if (!omega_allowable(rep, ctx, w, beta))
			return std::numeric_limits<double>::infinity();
		double value = double(rep.d) * weight.scale;
		for (Eigen::Index j = 0; j < beta.size(); ++j)
			value *= monomial_norm_1d(rep.factors()[std::size_t(j)], ctx, w.gamma[std::size_t(j)], beta(j));
		return value;
	}

	double monomial_norm_polyhedron(const QuotientRep &rep, const LpContext &ctx, const MultiIndex &alpha)
	{
		return monomial_norm(rep, ctx, RadialWeight::unweighted(), alpha);
	}

	bool is_allowable(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight, const MultiIndex &alpha)
	{
		return omega_allowable(rep, ctx, omega_weight(rep, ctx, weight), omega_index(rep, alpha));
	}

	std::vector<MultiIndex> window_indices(int n, std::int64_t N)
	{
		if (N < 0)
			throw Error(ErrorCode::InvalidArgument, "index window must be nonnegative");
		std::vector<MultiIndex> out;
		MultiIndex v = MultiIndex::Constant(n, -N);
		while (true)
		{
			out.push_back(v);
			int j = n - 1;
			while (j >= 0 && v(j) == N)
				v(j--) = -N;
			if (j < 0)
				return out;
			++v(j);
		}
	}

	std::vector<MultiIndex> enumerate_allowable(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		std::int64_t N)
	{
		const OmegaWeight w = omega_weight(rep, ctx, weight);
		std::vector<MultiIndex> out;
		for (const MultiIndex &alpha : window_indices(rep.dimension(), N))
			if (omega_allowable(rep, ctx, w, omega_index(rep, alpha)))
				out.push_back(alpha);
		return out;
	}

	std::vector<MultiIndex> coset_reps(const IntMatrix &A)
	{
		const std::int64_t d = determinant(A);
		if (d == 0)
			throw Error(ErrorCode::SingularMatrix, "coset representatives of a singular matrix");
		if (d < 0)
			throw Error(ErrorCode::NotNormalizable, "coset representatives need det A > 0");
		const Eigen::Index n = A.rows();
		std::vector<MultiIndex> out;
		std::set<std::vector<std::int64_t>> seen;
		MultiIndex beta = MultiIndex::Zero(n);
		while (true)
		{
			MultiIndex l = beta * A;
			std::vector<std::int64_t> key(static_cast<std::size_t>(n));
			for (Eigen::Index j = 0; j < n; ++j)
				key[std::size_t(j)] = l(j) = mod(l(j), d);
			if (seen.insert(key).second)
				out.push_back(l);
			Eigen::Index j = 0;
			while (j < n && ++beta(j) == d)
				beta(j++) = 0;
			if (j == n)
				break;
		}
		return out;
	}

	bool in_invariant_lattice(const QuotientRep &rep, const MultiIndex &beta)
	{
		if (rep.d == 1)
			return true;
		const MultiIndex x = (beta + MultiIndex::Ones(beta.size())) * adjugate(rep.A);
		for (Eigen::Index j = 0; j < x.size(); ++j)
			if (mod(x(j), rep.d) != 0)
				return false;
		return true;
	}

	std::vector<MultiIndex> gamma_invariant_indices(const QuotientRep &rep, const LpContext &ctx,
		const RadialWeight &weight, std::int64_t N)
	{
		const OmegaWeight w = omega_weight(rep, ctx, weight);
		const IntMatrix adj = adjugate(rep.A);
		std::vector<MultiIndex> out;
		for (const MultiIndex &beta : window_indices(rep.dimension(), N))
		{
			bool member = true;
			const MultiIndex x = (beta + MultiIndex::Ones(beta.size())) * adj;
			for (Eigen::Index j = 0; j < x.size() && member; ++j)
				member = mod(x(j), rep.d) == 0;
			if (member && omega_allowable(rep, ctx, w, beta))
				out.push_back(beta);
		}
		return out;
	}

	ThresholdReport thresholds(const QuotientRep &rep, std::int64_t N)
	{
		if (N < 1)
			throw Error(ErrorCode::EmptyWindow, "threshold search needs a window N >= 1");
		const MultiIndex s = rep.column_sums();
		std::set<std::pair<std::int64_t, std::int64_t>> seen;
		ThresholdReport report;
		report.window = N;
		for (const MultiIndex &alpha : window_indices(rep.dimension(), N))
		{
			// Unweighted: p*beta_j + gamma_j + 2 = p*(alpha A)_j + 2 s_j.
			const MultiIndex x = alpha * rep.A;
			bool never = false;
			std::optional<Rational> exit;
			for (Eigen::Index j = 0; j < x.size(); ++j)
			{
				if (rep.factors()[std::size_t(j)] == FactorKind::UnitDisc && x(j) + s(j) - 1 < 0)
					never = true;
				if (x(j) < 0)
				{
					const Rational t(2 * s(j), -x(j));
					if (!exit || t < *exit)
						exit = t;
				}
			}
			if (never || !exit || !(*exit > Rational(1)))
				continue;
			if (seen.insert({exit->num(), exit->den()}).second)
				report.thresholds.push_back(*exit);
		}
		std::sort(report.thresholds.begin(), report.thresholds.end());
		for (const Rational &t : report.thresholds)
			if (t > Rational(2))
			{
				report.p_star = t;
				report.q_star = t / (t - Rational(1));
				break;
			}
		return report;
	}

	std::int64_t default_threshold_window(const QuotientRep &rep)
	{
		return 4 * rep.d * rep.dimension();
	}
} // namespace mbk
