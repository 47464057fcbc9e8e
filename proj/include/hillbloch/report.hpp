#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hillbloch/asymptotics.hpp"
#include "hillbloch/oracle.hpp"
#include "hillbloch/spectrum.hpp"

namespace hillbloch {

using json = nlohmann::ordered_json;

json to_json(const DecayReport& r);
json to_json(const ConstantFit& f);
json to_json(const VerifyReport& r);
json to_json(const GapReport& r);
json to_json(const FiniteGapVerdict& v);
json to_json(const GapCensus& c);
json to_json(const EdgeCheck& e);
json to_json(const QuasimomentumRoots& q);
json table_summary(const BandTable& bt);

/// RFC 4180: fields with a comma, quote, CR or LF are quoted and quotes doubled.
std::string csv_field(std::string_view s);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

/// Shortest text that reads back to the same double.
std::string format_number(double x);

/// Header t, lambda_1, ..., lambda_B; one row per grid point.
void write_bands_csv(std::ostream& os, const BandTable& bt);

/// SVG 1.1 band diagram: one polyline per band over t, resolved gaps shaded.
void write_bands_svg(std::ostream& os, const BandTable& bt, const GapReport& gaps);

}  // namespace hillbloch
