#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace mbk;
using json = nlohmann::ordered_json;

namespace mbp
{
	namespace
	{
		UsageFailure usage(const std::string &flag, const std::string &what)
		{
			return UsageFailure(flag + ": " + what);
		}

		std::string trim(const std::string &s)
		{
			const auto b = s.find_first_not_of(" \t\r\n");
			if (b == std::string::npos)
				return "";
			const auto e = s.find_last_not_of(" \t\r\n");
			return s.substr(b, e - b + 1);
		}

		std::vector<std::string> split(const std::string &s, char sep)
		{
			std::vector<std::string> out;
			std::string cur;
			for (char c : s)
			{
				if (c == sep)
				{
					out.push_back(trim(cur));
					cur.clear();
				}
				else
					cur.push_back(c);
			}
			out.push_back(trim(cur));
			return out;
		}

		double parse_double(const std::string &s, const std::string &flag)
		{
			std::size_t used = 0;
			double v = 0.0;
			try
			{
				v = std::stod(s, &used);
			}
			catch (const std::exception &)
			{
				throw usage(flag, "cannot read number '" + s + "'");
			}
			if (used != s.size() || !std::isfinite(v))
				throw usage(flag, "cannot read number '" + s + "'");
			return v;
		}

		MultiIndex parse_index(const std::string &text, int n, const std::string &flag)
		{
			std::string s = text;
			for (char &c : s)
				if (c == ' ')
					c = ',';
			std::vector<std::string> parts;
			for (const std::string &x : split(s, ','))
				if (!x.empty())
					parts.push_back(x);
			if (int(parts.size()) != n)
				throw usage(flag, "multi-index needs " + std::to_string(n) + " entries, got '" + text + "'");
			MultiIndex a(n);
			for (int k = 0; k < n; ++k)
			{
				const auto r = Rational::parse(parts[std::size_t(k)]);
				if (!r || !r->is_integer())
					throw usage(flag, "multi-index entries must be integers, got '" + parts[std::size_t(k)] + "'");
				a(k) = r->num();
			}
			return a;
		}

		Param json_param(const json &v, const std::string &flag)
		{
			if (v.is_number_integer())
				return Param(v.get<std::int64_t>());
			if (v.is_number())
				return Param(v.get<double>());
			if (v.is_string())
			{
				try
				{
					return Param::parse(v.get<std::string>());
				}
				catch (const std::exception &)
				{
				}
			}
			throw usage(flag, "bad exponent " + v.dump());
		}

		Complex json_complex(const json &v, const std::string &flag)
		{
			if (v.is_number())
				return Complex(v.get<double>(), 0.0);
			if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
				return Complex(v[0].get<double>(), v[1].get<double>());
			throw usage(flag, "coefficient must be a number or [re, im], got " + v.dump());
		}

		MultiIndex json_index(const json &v, int n, const std::string &flag)
		{
			if (!v.is_array() || int(v.size()) != n)
				throw usage(flag, "exponent list must have " + std::to_string(n) + " integers, got " + v.dump());
			MultiIndex a(n);
			for (int k = 0; k < n; ++k)
			{
				if (!v[std::size_t(k)].is_number_integer())
					throw usage(flag, "exponent list must hold integers, got " + v.dump());
				a(k) = v[std::size_t(k)].get<std::int64_t>();
			}
			return a;
		}

		json complex_json(Complex c)
		{
			return json::array({c.real(), c.imag()});
		}

		json index_json(const MultiIndex &a)
		{
			json out = json::array();
			for (Eigen::Index k = 0; k < a.size(); ++k)
				out.push_back(a(k));
			return out;
		}

		json point_json(const ComplexPoint &z)
		{
			json out = json::array();
			for (Eigen::Index k = 0; k < z.size(); ++k)
				out.push_back(complex_json(z(k)));
			return out;
		}

		json number_or_null(double v)
		{
			return std::isfinite(v) ? json(v) : json(nullptr);
		}

		// Provenance attached to every record; exact computations carry a null grid.
		struct Provenance
		{
			std::optional<int> R;
			std::optional<int> T;
			std::optional<std::int64_t> window;
			std::string method;

			void stamp(json &rec) const
			{
				json grid;
				grid["R"] = R ? json(*R) : json(nullptr);
				grid["T"] = T ? json(*T) : json(nullptr);
				rec["grid"] = grid;
				rec["window"] = window ? json(*window) : json(nullptr);
				rec["method"] = method;
			}
		};

		std::string csv_cell(const json &v)
		{
			if (v.is_null())
				return "";
			if (v.is_string())
				return v.get<std::string>();
			if (v.is_array())
			{
				std::string out;
				for (std::size_t i = 0; i < v.size(); ++i)
				{
					if (i)
						out += ";";
					if (v[i].is_array())
					{
						for (std::size_t j = 0; j < v[i].size(); ++j)
							out += (j ? "," : "") + csv_cell(v[i][j]);
					}
					else
						out += csv_cell(v[i]);
				}
				return out;
			}
			return v.dump();
		}

		void flatten(const json &rec, const std::string &prefix, std::vector<std::pair<std::string, std::string>> &out)
		{
			for (auto it = rec.begin(); it != rec.end(); ++it)
			{
				const std::string key = prefix.empty() ? it.key() : prefix + "_" + it.key();
				if (it->is_object())
					flatten(*it, key, out);
				else
					out.emplace_back(key, csv_cell(*it));
			}
		}

		// Buffers records and writes them as JSON lines or as one CSV table.
		class Emitter
		{
		public:
			Emitter(std::ostream &out, bool csv) : out_(out), csv_(csv) {}

			void emit(const json &rec)
			{
				if (!csv_)
				{
					out_ << rec.dump() << "\n";
					return;
				}
				std::vector<std::pair<std::string, std::string>> cells;
				flatten(rec, "", cells);
				if (!header_written_)
				{
					for (std::size_t i = 0; i < cells.size(); ++i)
						out_ << (i ? "," : "") << csv_escape(cells[i].first);
					out_ << "\r\n";
					header_written_ = true;
				}
				for (std::size_t i = 0; i < cells.size(); ++i)
					out_ << (i ? "," : "") << csv_escape(cells[i].second);
				out_ << "\r\n";
			}

		private:
			std::ostream &out_;
			bool csv_;
			bool header_written_ = false;
		};

		int error_exit(const Error &e)
		{
			switch (e.code())
			{
			case ErrorCode::SlowConvergence:
			case ErrorCode::NonFiniteSample:
			case ErrorCode::PreimageFailure:
			case ErrorCode::Overflow:
				return VerificationFailure;
			default:
				return UsageError;
			}
		}

		struct Setup
		{
			QuotientRep rep;
			LpContext ctx;
		};

		Setup setup(const RunConfig &c)
		{
			const DomainSpec spec = parse_domain(c.domain);
			return Setup{quotient_representation(spec), LpContext::make(parse_p(c.p))};
		}

		ComplexPoint inside_point(const QuotientRep &rep, const std::string &text, const std::string &flag)
		{
			const ComplexPoint z = parse_point(text, flag);
			if (z.size() != rep.dimension())
				throw usage(flag, "point has " + std::to_string(z.size()) + " coordinates, the domain has dimension " +
					std::to_string(rep.dimension()));
			if (!contains(rep.target, z))
				throw usage(flag, "point lies outside the domain");
			return z;
		}

		GridOptions grid_options(const RunConfig &c)
		{
			GridOptions go;
			go.R = c.radial;
			go.T = c.angular;
			return go;
		}

		GridOptions coarse(GridOptions go)
		{
			go.R = std::max(2, go.R / 2);
			go.T = std::max(1, go.T / 2 + 1);
			return go;
		}

		int cmd_kernel(const RunConfig &c, Emitter &em)
		{
			const Setup s = setup(c);
			const ComplexPoint z = inside_point(s.rep, c.z, "--z");
			const ComplexPoint w = inside_point(s.rep, c.w, "--w");
			const PolyhedronKernel pk = make_polyhedron_kernel(s.rep, s.ctx);
			json rec;
			Provenance prov{std::nullopt, std::nullopt, std::nullopt, c.method};
			Complex value;
			if (c.method == "closed")
				value = mbk_polyhedron(pk, z, w);
			else
			{
				SeriesOptions so;
				so.window = c.window;
				prov.window = series_window(pk, z, w, so);
				so.window = prov.window;
				value = mbk_series(s.rep, s.ctx, RadialWeight::unweighted(), z, w, so);
			}
			rec["value"] = complex_json(value);
			prov.stamp(rec);
			em.emit(rec);
			return Success;
		}

		int cmd_indices(const RunConfig &c, Emitter &em)
		{
			const Setup s = setup(c);
			const std::int64_t N = c.window.value_or(2);
			const Provenance prov{std::nullopt, std::nullopt, N, "exact"};
			for (const MultiIndex &alpha : window_indices(s.rep.dimension(), N))
			{
				json rec;
				rec["alpha"] = index_json(alpha);
				rec["norm_p"] = number_or_null(monomial_norm(s.rep, s.ctx, RadialWeight::unweighted(), alpha));
				rec["allowable"] = is_allowable(s.rep, s.ctx, RadialWeight::unweighted(), alpha);
				prov.stamp(rec);
				em.emit(rec);
			}
			return Success;
		}

		int cmd_norm(const RunConfig &c, Emitter &em)
		{
			const Setup s = setup(c);
			const BandLimited f = parse_function(c.f, s.rep.dimension(), "--f");
			auto norm_at = [&](const GridOptions &go) {
				const GridOptions r = resolve_grid(s.rep, s.ctx, RadialWeight::unweighted(), f.radial_exponents(), go);
				try
				{
					return lp_norm(s.rep, make_grid(s.rep.factors(), r), f, s.ctx);
				}
				catch (const Error &e)
				{
					if (e.code() == ErrorCode::NotNormalizable)
						throw usage("--f", e.what());
					throw;
				}
			};
			const GridOptions go = grid_options(c);
			const double v = norm_at(go);
			json rec;
			rec["norm"] = number_or_null(v);
			rec["norm_p"] = number_or_null(std::pow(v, s.ctx.p.value()));
			rec["error_estimate"] = number_or_null(std::abs(v - norm_at(coarse(go))));
			Provenance{go.R, go.T, std::nullopt, "tensor-gauss-legendre"}.stamp(rec);
			em.emit(rec);
			return Success;
		}

		int cmd_integrate(const RunConfig &c, Emitter &em)
		{
			const DomainSpec spec = parse_domain(c.domain);
			const QuotientRep rep = quotient_representation(spec);
			const BandLimited f = parse_function(c.f, rep.dimension(), "--f");
			const LpContext two = LpContext::make(Param(2));
			auto value_at = [&](const GridOptions &go) {
				const GridOptions r = resolve_grid(rep, two, RadialWeight::unweighted(), f.radial_exponents(), go);
				try
				{
					return integrate_target(rep, make_grid(rep.factors(), r), f);
				}
				catch (const Error &e)
				{
					if (e.code() == ErrorCode::NotNormalizable)
						throw usage("--f", e.what());
					throw;
				}
			};
			const GridOptions go = grid_options(c);
			const Complex v = value_at(go);
			json rec;
			rec["value"] = complex_json(v);
			rec["error_estimate"] = number_or_null(std::abs(v - value_at(coarse(go))));
			Provenance{go.R, go.T, std::nullopt, "tensor-gauss-legendre"}.stamp(rec);
			em.emit(rec);
			return Success;
		}

		int cmd_project(const RunConfig &c, Emitter &em)
		{
			const Setup s = setup(c);
			const BandLimited f = parse_function(c.f, s.rep.dimension(), "--f");
			if (c.at.empty())
				throw usage("--at", "at least one evaluation point is required");
			std::vector<ComplexPoint> pts;
			for (const std::string &t : c.at)
				pts.push_back(inside_point(s.rep, t, "--at"));
			const GridOptions go = grid_options(c);
			const PolyhedronKernel pk = make_polyhedron_kernel(s.rep, s.ctx);
			std::optional<BandLimited> projected;
			if (c.method == "coefficients")
			{
				const GridOptions r = resolve_grid(s.rep, s.ctx, RadialWeight::unweighted(), f.radial_exponents(), go);
				projected = project_band_limited(s.rep, s.ctx, RadialWeight::unweighted(), f, make_grid(s.rep.factors(), r));
			}
			for (const ComplexPoint &z : pts)
			{
				json rec;
				rec["point"] = point_json(z);
				rec["value"] = complex_json(projected ? (*projected)(z) : apply_mbp(pk, f, go, z));
				Provenance{go.R, go.T, std::nullopt, c.method == "coefficients" ? "coefficients" : "kernel"}.stamp(rec);
				em.emit(rec);
			}
			return Success;
		}

		int cmd_thresholds(const RunConfig &c, Emitter &em)
		{
			const QuotientRep rep = quotient_representation(parse_domain(c.domain));
			const std::int64_t N = c.window.value_or(default_threshold_window(rep));
			const ThresholdReport r = thresholds(rep, N);
			json rec, values = json::array(), exact = json::array();
			for (const Rational &t : r.thresholds)
			{
				values.push_back(t.value());
				exact.push_back(t.str());
			}
			rec["thresholds"] = values;
			rec["thresholds_exact"] = exact;
			rec["p_star"] = r.p_star ? json(r.p_star->value()) : json(nullptr);
			rec["q_star"] = r.q_star ? json(r.q_star->value()) : json(nullptr);
			rec["p_star_exact"] = r.p_star ? r.p_star->str() : std::string("inf");
			rec["q_star_exact"] = r.q_star ? r.q_star->str() : std::string("1");
			Provenance{std::nullopt, std::nullopt, N, "exact"}.stamp(rec);
			em.emit(rec);
			return Success;
		}

		int cmd_duality(const RunConfig &c, Emitter &em, bool csv)
		{
			const Setup s = setup(c);
			const std::int64_t N = c.window.value_or(1);
			const PairingContext pc = PairingContext::make(s.rep, s.ctx);
			const BandLimited f = parse_function(c.f, s.rep.dimension(), "--f");
			const BandLimited g = parse_function(c.g, s.rep.dimension(), "--g");
			const GridOptions go = grid_options(c);
			const DualBasisReport bio = dual_basis_check(pc, N, go);
			const Provenance prov{go.R, go.T, N, "pairing"};
			for (std::size_t b = 0; b < bio.indices.size(); ++b)
				for (std::size_t a = 0; a < bio.indices.size(); ++a)
				{
					json rec;
					rec["beta"] = index_json(bio.indices[b]);
					rec["alpha"] = index_json(bio.indices[a]);
					rec["value"] = complex_json(bio.matrix(Eigen::Index(b), Eigen::Index(a)));
					prov.stamp(rec);
					em.emit(rec);
				}
			const AdjointReport adj = adjoint_residual(pc, f, g, go);
			json summary;
			summary["max_deviation"] = bio.max_deviation;
			summary["isometry_max_rel_err"] = bio.max_isometry_rel_err;
			summary["isometry_checked"] = bio.isometry_checked;
			summary["adjoint_lhs"] = complex_json(adj.lhs);
			summary["adjoint_rhs"] = complex_json(adj.rhs);
			summary["adjoint_residual"] = adj.residual;
			prov.stamp(summary);
			if (!csv)
				em.emit(summary);
			if (!c.residuals.empty())
			{
				std::ofstream file(c.residuals);
				if (!file)
					throw usage("--residuals", "cannot write '" + c.residuals + "'");
				file << summary.dump() << "\n";
			}
			return Success;
		}

		// Verification suites: each check produces one TAP line.
		struct Check
		{
			std::string name;
			bool ok;
			json info;
		};

		std::vector<ComplexPoint> random_points(const QuotientRep &rep, std::mt19937_64 &rng, int count)
		{
			std::uniform_real_distribution<double> r(0.2, 0.7), th(0.0, two_pi);
			std::vector<ComplexPoint> out;
			for (int i = 0; i < count; ++i)
			{
				ComplexPoint z(rep.dimension());
				for (Eigen::Index j = 0; j < z.size(); ++j)
				{
					const double rad = r(rng);
					z(j) = std::polar(rad, th(rng));
				}
				out.push_back(monomial_map_eval(rep.A, z));
			}
			return out;
		}

		std::string alpha_str(const MultiIndex &a)
		{
			std::string s = "(";
			for (Eigen::Index k = 0; k < a.size(); ++k)
				s += (k ? "," : "") + std::to_string(a(k));
			return s + ")";
		}

		void suite_reproducing(const Setup &s, const RunConfig &c, std::mt19937_64 &rng, std::vector<Check> &out)
		{
			const std::int64_t N = c.window.value_or(1);
			const GridOptions go = grid_options(c);
			const PolyhedronKernel pk = make_polyhedron_kernel(s.rep, s.ctx);
			const auto pts = random_points(s.rep, rng, 3);
			for (const MultiIndex &alpha : enumerate_allowable(s.rep, s.ctx, RadialWeight::unweighted(), N))
			{
				const BandLimited f = BandLimited::monomial(alpha);
				double worst = 0.0;
				for (const ComplexPoint &z : pts)
					worst = std::max(worst, std::abs(apply_mbp(pk, f, go, z) - f(z)) / std::abs(f(z)));
				json info;
				info["max_rel_err"] = worst;
				Provenance{go.R, go.T, N, "kernel"}.stamp(info);
				out.push_back({"reproducing alpha=" + alpha_str(alpha), worst <= 1e-6, info});
			}
		}

		void suite_series(const Setup &s, const RunConfig &c, std::mt19937_64 &rng, std::vector<Check> &out)
		{
			const PolyhedronKernel pk = make_polyhedron_kernel(s.rep, s.ctx);
			const auto zs = random_points(s.rep, rng, 5);
			const auto ws = random_points(s.rep, rng, 5);
			for (std::size_t i = 0; i < zs.size(); ++i)
			{
				SeriesOptions so;
				so.window = c.window;
				const std::int64_t N = series_window(pk, zs[i], ws[i], so);
				so.window = N;
				const Complex closed = mbk_polyhedron(pk, zs[i], ws[i]);
				const Complex series = mbk_series(s.rep, s.ctx, RadialWeight::unweighted(), zs[i], ws[i], so);
				const double err = std::abs(closed - series) / std::abs(series);
				json info;
				info["rel_err"] = err;
				Provenance{std::nullopt, std::nullopt, N, "series"}.stamp(info);
				out.push_back({"closed kernel matches series at pair " + std::to_string(i + 1), err <= 1e-6, info});
			}
		}

		void suite_symmetry(const Setup &s, const RunConfig &, std::mt19937_64 &rng, std::vector<Check> &out)
		{
			const auto zs = random_points(s.rep, rng, 5);
			const auto ws = random_points(s.rep, rng, 5);
			for (std::size_t i = 0; i < zs.size(); ++i)
			{
				const double r = twisted_symmetry_residual(s.rep, s.ctx, zs[i], ws[i], KernelMethod::Closed);
				json info;
				info["residual"] = r;
				Provenance{std::nullopt, std::nullopt, std::nullopt, "closed"}.stamp(info);
				out.push_back({"twisted symmetry at pair " + std::to_string(i + 1), r <= 1e-8, info});
			}
		}

		void suite_biorthogonality(const Setup &s, const RunConfig &c, std::mt19937_64 &, std::vector<Check> &out)
		{
			const std::int64_t N = c.window.value_or(1);
			const GridOptions go = grid_options(c);
			const DualBasisReport r = dual_basis_check(PairingContext::make(s.rep, s.ctx), N, go);
			json info;
			info["max_deviation"] = r.max_deviation;
			info["indices"] = r.indices.size();
			Provenance{go.R, go.T, N, "pairing"}.stamp(info);
			out.push_back({"biorthogonality matrix is the identity", r.max_deviation <= 1e-8, info});
			json iso;
			iso["max_rel_err"] = r.max_isometry_rel_err;
			iso["checked"] = r.isometry_checked;
			Provenance{go.R, go.T, N, "pairing"}.stamp(iso);
			out.push_back({"twisting map is an isometry onto the weighted dual", r.max_isometry_rel_err <= 1e-8, iso});
		}

		void suite_dual_norm(const Setup &s, const RunConfig &c, std::mt19937_64 &, std::vector<Check> &out)
		{
			const std::int64_t N = c.window.value_or(1);
			const GridOptions go = grid_options(c);
			for (const MultiIndex &alpha : enumerate_allowable(s.rep, s.ctx, RadialWeight::unweighted(), N))
			{
				const double v = dual_norm_product(s.rep, s.ctx, RadialWeight::unweighted(), alpha, go);
				json info;
				info["product"] = v;
				Provenance{go.R, go.T, N, "quadrature"}.stamp(info);
				out.push_back({"dual norm product alpha=" + alpha_str(alpha), std::abs(v - 1.0) <= 1e-8, info});
			}
		}

		using Suite = std::function<void(const Setup &, const RunConfig &, std::mt19937_64 &, std::vector<Check> &)>;

		const std::vector<std::pair<std::string, Suite>> &suites()
		{
			static const std::vector<std::pair<std::string, Suite>> all = {
				{"reproducing", suite_reproducing},
				{"series", suite_series},
				{"symmetry", suite_symmetry},
				{"biorthogonality", suite_biorthogonality},
				{"dual-norm", suite_dual_norm},
			};
			return all;
		}

		int cmd_verify(const RunConfig &c, std::ostream &out)
		{
			const Setup s = setup(c);
			std::vector<std::pair<std::string, Suite>> chosen;
			for (const auto &entry : suites())
				if (c.suite == "all" || c.suite == entry.first)
					chosen.push_back(entry);
			if (chosen.empty())
				throw usage("--suite", "unknown suite '" + c.suite + "'");
			std::mt19937_64 rng(c.seed);
			std::vector<Check> checks;
			for (const auto &entry : chosen)
			{
				try
				{
					entry.second(s, c, rng, checks);
				}
				catch (const Error &e)
				{
					json info;
					info["error"] = e.what();
					Provenance{c.radial, c.angular, c.window, entry.first}.stamp(info);
					checks.push_back({entry.first + " suite raised " + to_string(e.code()), false, info});
				}
			}
			out << "TAP version 13\n1.." << checks.size() << "\n";
			bool all_ok = true;
			for (std::size_t i = 0; i < checks.size(); ++i)
			{
				out << (checks[i].ok ? "ok " : "not ok ") << (i + 1) << " - " << checks[i].name << "\n";
				out << "  ---\n  " << checks[i].info.dump() << "\n  ...\n";
				all_ok = all_ok && checks[i].ok;
			}
			return all_ok ? Success : VerificationFailure;
		}

		void check_threads()
		{
			if (const char *env = std::getenv("MBP_THREADS"))
			{
				char *end = nullptr;
				const long v = std::strtol(env, &end, 10);
				if (end == env || *end != '\0' || v <= 0)
					throw usage("MBP_THREADS", "must be a positive integer, got '" + std::string(env) + "'");
			}
		}

		void build_app(CLI::App &app, RunConfig &c)
		{
			app.require_subcommand(1);
			auto common = [&](CLI::App *sub, bool with_p) {
				sub->add_option("--domain", c.domain, "domain JSON, inline or a file path")->required();
				if (with_p)
					sub->add_option("--p", c.p, "exponent p > 1, as a/b, an integer or a decimal");
				sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
			};
			auto grid = [&](CLI::App *sub) {
				sub->add_option("--radial", c.radial, "radial nodes per coordinate")->check(CLI::Range(2, 4096));
				sub->add_option("--angular", c.angular, "angular nodes per coordinate")->check(CLI::Range(1, 4096));
			};
			auto window = [&](CLI::App *sub, const std::string &help) {
				sub->add_option("-N,--N", c.window, help)->check(CLI::NonNegativeNumber);
			};

			CLI::App *kernel = app.add_subcommand("kernel", "evaluate the kernel at a pair of points");
			common(kernel, true);
			kernel->add_option("--z", c.z, "first point, re,im;re,im")->required();
			kernel->add_option("--w", c.w, "second point, re,im;re,im")->required();
			kernel->add_option("--method", c.method, "closed or series")->check(CLI::IsMember({"closed", "series"}));
			kernel->add_option("--window", c.window, "series window")->check(CLI::NonNegativeNumber);

			CLI::App *indices = app.add_subcommand("indices", "list indices with their norms and allowability");
			common(indices, true);
			window(indices, "index window |alpha|_inf <= N");

			CLI::App *norm = app.add_subcommand("norm", "L^p norm of a function");
			common(norm, true);
			grid(norm);
			norm->add_option("--f", c.f, "function")->required();

			CLI::App *integrate = app.add_subcommand("integrate", "integral of a function over the domain");
			common(integrate, false);
			grid(integrate);
			integrate->add_option("--f", c.f, "function")->required();

			CLI::App *project = app.add_subcommand("project", "apply the projection at points");
			common(project, true);
			grid(project);
			project->add_option("--f", c.f, "function")->required();
			project->add_option("--at", c.at, "evaluation point, repeatable")->required();
			project->add_option("--method", c.method, "kernel or coefficients")
				->check(CLI::IsMember({"kernel", "coefficients"}));

			CLI::App *thr = app.add_subcommand("thresholds", "thresholds and p_star");
			common(thr, false);
			window(thr, "index window");

			CLI::App *duality = app.add_subcommand("duality", "biorthogonality matrix and adjoint residual");
			common(duality, true);
			grid(duality);
			window(duality, "index window");
			duality->add_option("--f", c.f, "first function of the adjoint check");
			duality->add_option("--g", c.g, "second function of the adjoint check");
			duality->add_option("--residuals", c.residuals, "also write the residual record as JSON to this file");

			CLI::App *verify = app.add_subcommand("verify", "run an invariant suite and print a TAP report");
			common(verify, true);
			grid(verify);
			window(verify, "index window");
			verify->add_option("--suite", c.suite, "reproducing, series, symmetry, biorthogonality, dual-norm or all")
				->required();
			verify->add_option("--seed", c.seed, "seed for random sample points");
		}

		void parse_into(CLI::App &app, RunConfig &c, const std::vector<std::string> &args)
		{
			std::vector<std::string> rev(args.rbegin(), args.rend());
			app.parse(rev);
			c.subcommand = app.get_subcommands().front()->get_name();
			if (c.subcommand == "kernel" && c.method != "closed" && c.method != "series")
				throw usage("--method", "kernel method must be closed or series");
			if (c.subcommand == "project" && c.method == "closed")
				c.method = "kernel";
		}
	} // namespace

	std::string csv_escape(const std::string &field)
	{
		if (field.find_first_of(",\"\r\n") == std::string::npos)
			return field;
		std::string out = "\"";
		for (char ch : field)
		{
			if (ch == '"')
				out += "\"\"";
			else
				out += ch;
		}
		return out + "\"";
	}

	DomainSpec parse_domain(const std::string &raw)
	{
		std::string text = trim(raw);
		if (!text.empty() && text[0] == '@')
			text = text.substr(1);
		if (text.empty())
			throw usage("--domain", "empty domain specification");
		if (text[0] != '{')
		{
			std::ifstream file(text);
			if (!file)
				throw usage("--domain", "not inline JSON and no readable file '" + text + "'");
			std::stringstream buf;
			buf << file.rdbuf();
			text = buf.str();
		}
		json j;
		try
		{
			j = json::parse(text);
		}
		catch (const json::parse_error &e)
		{
			throw usage("--domain", std::string("invalid JSON: ") + e.what());
		}
		if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
			throw usage("--domain", "expected an object with a \"type\" field");
		const std::string type = j["type"].get<std::string>();
		auto factor = [](const json &v) {
			if (v.is_string() && v.get<std::string>() == "disc")
				return FactorKind::UnitDisc;
			if (v.is_string() && v.get<std::string>() == "punctured_disc")
				return FactorKind::PuncturedUnitDisc;
			throw usage("--domain", "factor must be \"disc\" or \"punctured_disc\", got " + v.dump());
		};
		try
		{
			if (type == "disc")
				return DomainSpec::disc();
			if (type == "punctured_disc")
				return DomainSpec::punctured_disc();
			if (type == "product")
			{
				if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
					throw usage("--domain", "product needs a non-empty \"factors\" array");
				std::vector<FactorKind> fs;
				for (const json &v : j["factors"])
					fs.push_back(factor(v));
				return DomainSpec::product(fs);
			}
			if (type == "monomial_polyhedron")
			{
				if (!j.contains("B") || !j["B"].is_array() || j["B"].empty())
					throw usage("--domain", "monomial_polyhedron needs a square integer matrix \"B\"");
				const json &B = j["B"];
				const Eigen::Index n = Eigen::Index(B.size());
				IntMatrix M(n, n);
				for (Eigen::Index i = 0; i < n; ++i)
				{
					const json &row = B[std::size_t(i)];
					if (!row.is_array() || Eigen::Index(row.size()) != n)
						throw usage("--domain", "\"B\" must be square");
					for (Eigen::Index k = 0; k < n; ++k)
					{
						if (!row[std::size_t(k)].is_number_integer())
							throw usage("--domain", "\"B\" entries must be integers");
						M(i, k) = row[std::size_t(k)].get<std::int64_t>();
					}
				}
				return DomainSpec::polyhedron(M);
			}
		}
		catch (const Error &e)
		{
			throw usage("--domain", e.what());
		}
		throw usage("--domain", "unknown domain type '" + type + "'");
	}

	Param parse_p(const std::string &text)
	{
		try
		{
			const Param p = Param::parse(trim(text));
			LpContext::make(p);
			return p;
		}
		catch (const Error &e)
		{
			throw usage("--p", e.what());
		}
	}

	ComplexPoint parse_point(const std::string &text, const std::string &flag)
	{
		const std::vector<std::string> coords = split(text, ';');
		ComplexPoint z(Eigen::Index(coords.size()));
		for (std::size_t k = 0; k < coords.size(); ++k)
		{
			const std::vector<std::string> parts = split(coords[k], ',');
			if (parts.size() > 2 || parts[0].empty())
				throw usage(flag, "coordinate must be re,im, got '" + coords[k] + "'");
			const double re = parse_double(parts[0], flag);
			const double im = parts.size() == 2 ? parse_double(parts[1], flag) : 0.0;
			z(Eigen::Index(k)) = Complex(re, im);
		}
		return z;
	}

	BandLimited parse_function(const std::string &raw, int n, const std::string &flag)
	{
		const std::string text = trim(raw);
		if (text == "builtin:one")
			return BandLimited::constant(n, 1.0);
		for (const std::string head : {"builtin:monomial", "builtin:conj-monomial"})
		{
			if (text.rfind(head, 0) != 0 || text.size() == head.size() || (text[head.size()] != ':' && text[head.size()] != ' '))
				continue;
			const MultiIndex alpha = parse_index(text.substr(head.size() + 1), n, flag);
			return head == "builtin:monomial" ? BandLimited::monomial(alpha) : BandLimited::conj_monomial(alpha);
		}
		if (text.rfind("poly:", 0) == 0)
		{
			json j;
			try
			{
				j = json::parse(text.substr(5));
			}
			catch (const json::parse_error &e)
			{
				throw usage(flag, std::string("invalid JSON: ") + e.what());
			}
			if (!j.is_array() || j.empty())
				throw usage(flag, "poly: expects a non-empty array of terms");
			BandLimited f(n);
			for (const json &t : j)
			{
				if (!t.is_object())
					throw usage(flag, "each term must be an object");
				BandTerm term;
				term.c = t.contains("c") ? json_complex(t["c"], flag) : Complex(1.0);
				term.a = t.contains("a") ? json_index(t["a"], n, flag) : MultiIndex::Zero(n);
				term.b = t.contains("b") ? json_index(t["b"], n, flag) : MultiIndex::Zero(n);
				term.s.assign(std::size_t(n), Param(0));
				if (t.contains("s"))
				{
					if (!t["s"].is_array() || int(t["s"].size()) != n)
						throw usage(flag, "\"s\" must list " + std::to_string(n) + " exponents");
					for (int k = 0; k < n; ++k)
						term.s[std::size_t(k)] = json_param(t["s"][std::size_t(k)], flag);
				}
				f.add(term);
			}
			return f;
		}
		throw usage(flag, "unknown function '" + text + "'");
	}

	RunConfig parse_args(const std::vector<std::string> &args)
	{
		RunConfig c;
		CLI::App app{"Monomial basis kernels and projections", "mbp"};
		build_app(app, c);
		try
		{
			parse_into(app, c, args);
		}
		catch (const CLI::ParseError &e)
		{
			throw UsageFailure(e.what());
		}
		return c;
	}

	int run(const RunConfig &c, std::ostream &out, std::ostream &err)
	{
		try
		{
			check_threads();
			const bool csv = c.format == "csv";
			Emitter em(out, csv);
			if (c.subcommand == "kernel")
				return cmd_kernel(c, em);
			if (c.subcommand == "indices")
				return cmd_indices(c, em);
			if (c.subcommand == "norm")
				return cmd_norm(c, em);
			if (c.subcommand == "integrate")
				return cmd_integrate(c, em);
			if (c.subcommand == "project")
				return cmd_project(c, em);
			if (c.subcommand == "thresholds")
				return cmd_thresholds(c, em);
			if (c.subcommand == "duality")
				return cmd_duality(c, em, csv);
			if (c.subcommand == "verify")
				return cmd_verify(c, out);
			throw UsageFailure("unknown subcommand '" + c.subcommand + "'");
		}
		catch (const UsageFailure &e)
		{
			err << "mbp: " << e.what() << "\n";
			return UsageError;
		}
		catch (const Error &e)
		{
			err << "mbp: " << to_string(e.code()) << ": " << e.what() << "\n";
			return error_exit(e);
		}
	}

	int main_entry(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
	{
		RunConfig c;
		CLI::App app{"Monomial basis kernels and projections", "mbp"};
		build_app(app, c);
		try
		{
			parse_into(app, c, args);
		}
		catch (const CLI::CallForHelp &)
		{
			out << app.help();
			return Success;
		}
		catch (const CLI::ParseError &e)
		{
			err << "mbp: " << e.what() << "\n";
			return UsageError;
		}
		catch (const UsageFailure &e)
		{
			err << "mbp: " << e.what() << "\n";
			return UsageError;
		}
		return run(c, out, err);
	}
} // namespace mbp
