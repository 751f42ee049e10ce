#pragma once

#include <json.hpp>

#include "spectra/audit.hpp"
#include "spectra/construct.hpp"
#include "spectra/exposure.hpp"
#include "spectra/fit.hpp"

namespace spectra::cli {

using json = nlohmann::ordered_json;

json to_json(const VertexSet& s);
json to_json(const std::vector<Unit>& units);
json to_json(const ExtractRound& r);
json to_json(const std::vector<ExtractRound>& trace);
json to_json(const EventRecord& e);
json to_json(const ResolvedConstruction& r);
json to_json(const ConstructionResult& r);
json to_json(const ResolvedExposure& r);
json to_json(const PerKRecord& r);
json to_json(const PerMOutcome& o);
json to_json(const TheoremWindow& w);
json to_json(const TheoremOutcome& o);
json to_json(const SlopeFit& f);

}  // namespace spectra::cli
