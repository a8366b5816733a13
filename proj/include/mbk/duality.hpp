#pragma once

#include "mbk/projection.hpp"

#include <vector>

namespace mbk
{
	/// Data for the twisted pairing {f, g}_p = integral over U of f conj(g o chi_p).
	/// The dual side lives on the (p-1)-th Reinhardt power with weight eta_q.
	struct PairingContext
	{
		QuotientRep rep;
		LpContext ctx;
		DomainSpec dual_domain;
		RadialWeight eta_q;

		static PairingContext make(const QuotientRep &rep, const LpContext &ctx);
	};

	Complex pairing(const PairingContext &pc, const BandLimited &f, const BandLimited &g, const QuadratureGrid &grid);
	Complex pairing(const PairingContext &pc, const SampledFunction &f, const SampledFunction &g, const QuadratureGrid &grid);

	/// Grid whose radial substitution suits every function handed to the pairing.
	QuadratureGrid pairing_grid(const PairingContext &pc, const std::vector<BandLimited> &functions, GridOptions opts);

	struct AdjointReport
	{
		Complex lhs;
		Complex rhs;
		double residual = 0.0;
	};

	/// |{P_p f, g}_p - {f, P_{q,eta_q} g}_p|, projections by their coefficient functionals.
	AdjointReport adjoint_residual(const PairingContext &pc, const BandLimited &f, const BandLimited &g,
		GridOptions opts = {});

	struct DualBasisReport
	{
		std::vector<MultiIndex> indices;
		/// entry (beta, alpha) = {e_beta, h_alpha}_p with h_alpha = e_alpha / ||e_alpha||^p.
		Eigen::MatrixXcd matrix;
		double max_deviation = 0.0;
		/// Largest relative gap in ||h||_{L^q(U)} = ||h o chi_q||_{L^q(U, eta_q)} over the
		/// monomials of the window that are q-integrable.
		double max_isometry_rel_err = 0.0;
		std::size_t isometry_checked = 0;
	};

	DualBasisReport dual_basis_check(const PairingContext &pc, std::int64_t N, GridOptions opts = {});

	/// ||g_alpha||_{q,mu} * ||e_alpha||_{p,mu}, both by quadrature.
	double dual_norm_product(const QuotientRep &rep, const LpContext &ctx, const RadialWeight &weight,
		const MultiIndex &alpha, GridOptions opts = {});
} // namespace mbk
