#pragma once

#include <ostream>

#include "hillbloch/config.hpp"

namespace hillbloch {

/// Each command writes its files into cfg.output and a short summary to log.
/// Module errors propagate as SpectralError; a FAIL verdict is not an error.

/// bands.csv, bands.svg, gaps.json, census.json
void cmd_spectrum(const RunConfig& cfg, std::ostream& log);
/// verify.json
void cmd_verify(const RunConfig& cfg, std::ostream& log);
/// condition.json
void cmd_condition(const RunConfig& cfg, std::ostream& log);
/// oracle.json: lowest Galerkin eigenvalues at cfg.t against oracle roots.
void cmd_oracle_check(const RunConfig& cfg, std::ostream& log);

/// Smallest K with (2π(K − d − 2))² ≥ Λ_max, plus one.
int spectrum_truncation(double lambda_max, int degree);

}  // namespace hillbloch
