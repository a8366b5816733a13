#pragma once

#include "mbk/duality.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbp
{
	enum ExitCode
	{
		Success = 0,
		VerificationFailure = 1,
		UsageError = 2,
	};

	/// Bad command line; the message names the offending flag.
	class UsageFailure : public std::runtime_error
	{
	public:
		using std::runtime_error::runtime_error;
	};

	struct RunConfig
	{
		std::string subcommand;
		std::string domain;
		std::string p = "2";
		int radial = 64;
		int angular = 129;
		std::optional<std::int64_t> window;
		std::string format = "json";
		std::uint64_t seed = 0;
		std::string method = "closed";
		std::string z;
		std::string w;
		std::string f = "builtin:one";
		std::string g = "builtin:one";
		std::vector<std::string> at;
		std::string suite;
		std::string residuals;
	};

	/// Parses argv (without the program name handling done by the caller); throws UsageFailure.
	RunConfig parse_args(const std::vector<std::string> &args);

	/// Runs one subcommand, streaming records to out and diagnostics to err.
	int run(const RunConfig &config, std::ostream &out, std::ostream &err);

	/// parse_args + run with usage errors mapped to exit code 2.
	int main_entry(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

	// Argument parsers, exposed for tests.
	mbk::DomainSpec parse_domain(const std::string &text);
	mbk::Param parse_p(const std::string &text);
	mbk::ComplexPoint parse_point(const std::string &text, const std::string &flag);
	mbk::BandLimited parse_function(const std::string &text, int n, const std::string &flag);

	std::string csv_escape(const std::string &field);
} // namespace mbp
