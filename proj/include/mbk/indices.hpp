#pragma once

#include "mbk/domains.hpp"

#include <optional>
#include <vector>

namespace mbk
{
	/// Exponent p in (1, inf) together with its Hoelder conjugate q = p/(p-1).
	struct LpContext
	{
		Param p;
		Param q;

		static LpContext make(const Param &p);
		LpContext conjugate() const { return LpContext{q, p}; }
	};

	/// Weight scale * prod_k |z_k|^{gamma_k} on the coordinates of the target domain.
	/// An empty gamma vector means all exponents are zero.
	struct RadialWeight
	{
		std::vector<Param> gamma;
		double scale = 1.0;

		static RadialWeight unweighted() { return RadialWeight{}; }
		Param exponent(std::size_t k) const { return k < gamma.size() ? gamma[k] : Param(0); }
	};

	/// The weight lambda = L * prod_j |z_j|^{gamma_j} carried by Omega, making
	/// Phi^# an isometry up to the factor |Gamma|.
	struct OmegaWeight
	{
		std::vector<Param> gamma;
		double L = 1.0;
	};

	OmegaWeight omega_weight(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight);

	struct ArithProgression
	{
		std::int64_t a = 0;
		std::int64_t b = 1;
		std::int64_t theta = 0;
	};

	/// Smallest theta = a (mod b) with p*theta + gamma + 2 > 0 (theta >= 0 on the disc).
	std::int64_t theta(FactorKind factor, const LpContext &ctx, const Param &gamma, std::int64_t a, std::int64_t b);

	bool allowable_1d(FactorKind factor, const LpContext &ctx, const Param &gamma, std::int64_t alpha);
	/// ||z^alpha||^p in L^p(U, |z|^gamma), +inf when the integral diverges.
	double monomial_norm_1d(FactorKind factor, const LpContext &ctx, const Param &gamma, std::int64_t alpha);

	/// beta = (alpha + 1) A - 1, the exponent of Phi^# e_alpha on Omega.
	MultiIndex omega_index(const QuotientRep &rep, const MultiIndex &alpha);

	/// ||e_beta||^p in L^p(Omega, lambda).
	double omega_monomial_norm(const QuotientRep &rep, const LpContext &ctx, const OmegaWeight &w, const MultiIndex &beta);
	bool omega_allowable(const QuotientRep &rep, const LpContext &ctx, const OmegaWeight &w, const MultiIndex &beta);

	/// ||e_alpha||^p on the target domain with weight mu, +inf when not allowable.
	double monomial_norm(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight, const MultiIndex &alpha);
	double monomial_norm_polyhedron(const QuotientRep &rep, const LpContext &ctx, const MultiIndex &alpha);
	bool is_allowable(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight, const MultiIndex &alpha);

	/// All multi-indices with |alpha|_inf <= N, lexicographic order.
	std::vector<MultiIndex> window_indices(int n, std::int64_t N);
	std::vector<MultiIndex> enumerate_allowable(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		std::int64_t N);

	/// Representatives of Z^{1xn} A modulo d Z^{1xn}; exactly d^{n-1} of them.
	std::vector<MultiIndex> coset_reps(const IntMatrix &A);

	/// beta + 1 lies in the row lattice Z^{1xn} A.
	bool in_invariant_lattice(const QuotientRep &rep, const MultiIndex &beta);
	/// Gamma-invariant allowable indices on Omega with |beta|_inf <= N.
	std::vector<MultiIndex> gamma_invariant_indices(const QuotientRep &rep, const LpContext &ctx,
		const RadialWeight &weight, std::int64_t N);

	struct ThresholdReport
	{
		std::vector<Rational> thresholds;
		std::optional<Rational> p_star;
		std::optional<Rational> q_star;
		std::int64_t window = 0;
	};

	/// Exponents p > 1 at which some unweighted allowable index of the window stops
	/// being allowable; p_star is the smallest one above 2.
	ThresholdReport thresholds(const QuotientRep &rep, std::int64_t N);
	std::int64_t default_threshold_window(const QuotientRep &rep);
} // namespace mbk
