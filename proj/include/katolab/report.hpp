#pragma once

#include "katolab/estimates.hpp"
#include "katolab/kato.hpp"
#include "katolab/spectral.hpp"
#include "katolab/suite.hpp"
#include "katolab/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace katolab {

/// Keys are sorted, so equal inputs serialize to equal bytes.
using Json = nlohmann::json;

/// Finite doubles stay numbers; infinities and NaN become the strings "inf", "-inf", "nan".
Json json_number(double v);

Json to_json(const EstimateParams& p);
Json to_json(const KatoCertificate& c);
Json to_json(const VerificationReport& r);
Json to_json(const SuiteResult& s);
Json to_json(const ConvergenceTable& t);
Json to_json(const SweepRow& row);

/// Eigenvalues plus one per-vertex array per eigenvector.
Json spectral_to_json(const SpectralData& s);

/// Geometry summary of a mesh: counts, volume, diameter, curvature statistics.
Json mesh_summary(const DiscreteManifold& m);

/// {"header": {tool, version, command, generated}, "body": body}. Only the
/// header carries the wall-clock timestamp.
Json make_document(const std::string& command, Json body);

/// One row per sample: check,point,other_point,t,other_t,observed,bound,margin.
void write_samples_csv(std::ostream& out, const VerificationReport& r, bool header = true);

} // namespace katolab
