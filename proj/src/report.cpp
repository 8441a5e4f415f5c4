#include "katolab/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace katolab {

namespace {

constexpr const char* kVersion = "1.0.0";

Json location(const SampleLocation& at) {
  return Json{{"point", at.point}, {"other_point", at.otherPoint}, {"t", json_number(at.t)},
              {"other_t", json_number(at.otherT)}};
}

std::string utcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

} // namespace

Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const EstimateParams& p) {
  return Json{{"n", p.n},
              {"alpha", json_number(p.alpha)},
              {"delta", json_number(p.delta)},
              {"beta", json_number(p.beta)},
              {"b", json_number(p.b)},
              {"a", json_number(p.a)},
              {"threshold", json_number(p.threshold())},
              {"exponent", json_number(p.baseExponent())}};
}

Json to_json(const KatoCertificate& c) {
  Json j{{"beta", json_number(c.beta)},
         {"b", json_number(c.b)},
         {"quadrature_error", json_number(c.quadratureError)},
         {"admissible", c.admissible}};
  j["threshold"] = c.threshold ? json_number(*c.threshold) : Json(nullptr);
  return j;
}

Json to_json(const VerificationReport& r) {
  Json metrics = Json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = json_number(v);
  return Json{{"check", r.checkName},
              {"manifold", r.manifold},
              {"params", r.params ? to_json(*r.params) : Json(nullptr)},
              {"worst_margin", json_number(r.worstMargin)},
              {"worst_location", location(r.worstLocation)},
              {"samples_tested", r.samplesTested},
              {"samples_skipped", r.samplesSkipped},
              {"tolerance",
               Json{{"kind", r.tolerance.kind},
                    {"constant", json_number(r.tolerance.constant)},
                    {"mesh_size", json_number(r.tolerance.meshSize)},
                    {"value", json_number(r.tolerance.value)}}},
              {"pass", r.passed},
              {"metrics", metrics},
              {"notes", r.notes}};
}

Json to_json(const SuiteResult& s) {
  Json reports = Json::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  return Json{{"manifold", s.manifold},
              {"certificate", s.certificate ? to_json(*s.certificate) : Json(nullptr)},
              {"params", s.params ? to_json(*s.params) : Json(nullptr)},
              {"metric_scale", json_number(s.metricScale)},
              {"mode_count", s.modeCount},
              {"reports", reports},
              {"notes", s.notes},
              {"pass", s.passed()}};
}

Json to_json(const ConvergenceTable& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json metrics = Json::object();
    for (const auto& [k, v] : row.metrics) metrics[k] = json_number(v);
    rows.push_back(Json{{"level", row.level},
                        {"mesh_size", json_number(row.meshSize)},
                        {"worst_margin", json_number(row.worstMargin)},
                        {"violation", json_number(row.violation)},
                        {"metrics", metrics}});
  }
  Json orders = Json::array();
  for (double o : t.empiricalOrders) orders.push_back(json_number(o));
  return Json{{"check", t.checkName},
              {"rows", rows},
              {"violation_nonincreasing", t.violationNonincreasing},
              {"empirical_orders", orders}};
}

Json to_json(const SweepRow& row) {
  Json j{{"alpha", json_number(row.alpha)}, {"admissible", row.certificate.has_value()}};
  if (row.certificate) {
    j["certificate"] = to_json(*row.certificate);
    j["liyau_rhs_at_half_beta"] = json_number(row.liyauAtHalfBeta);
    j["betti_bound"] = json_number(row.bettiBound);
    j["betti_overflow"] = row.bettiOverflow;
  }
  return j;
}

Json spectral_to_json(const SpectralData& s) {
  Json values = Json::array();
  for (int k = 0; k < s.modeCount(); ++k) values.push_back(json_number(s.eigenvalues()[k]));
  Json vectors = Json::array();
  for (int k = 0; k < s.modeCount(); ++k) {
    Json column = Json::array();
    for (int x = 0; x < s.pointCount(); ++x) column.push_back(json_number(s.eigenvectors()(x, k)));
    vectors.push_back(std::move(column));
  }
  Json weights = Json::array();
  for (int x = 0; x < s.pointCount(); ++x) weights.push_back(json_number(s.weights()[x]));
  return Json{{"point_count", s.pointCount()},
              {"mode_count", s.modeCount()},
              {"complete", s.isComplete()},
              {"kernel_floor", json_number(s.kernelFloor())},
              {"eigenvalues", values},
              {"eigenvectors", vectors},
              {"weights", weights}};
}

Json mesh_summary(const DiscreteManifold& m) {
  const ScalarField k = m.gaussianCurvature();
  const ScalarField rho = rho_minus(m);
  Json j{{"descriptor", m.descriptor()},
         {"vertices", m.vertexCount()},
         {"faces", m.faceCount()},
         {"edges", m.edgeCount()},
         {"euler_characteristic", m.eulerCharacteristic()},
         {"first_betti_number", surface_betti_number(m)},
         {"volume", json_number(m.volume())},
         {"diameter", json_number(diameter(m))},
         {"mean_edge_length", json_number(m.meanEdgeLength())},
         {"negative_cotan_weights", m.negativeCotanWeights()},
         {"curvature_min", json_number(k.minCoeff())},
         {"curvature_max", json_number(k.maxCoeff())},
         {"rho_minus_max", json_number(rho.maxCoeff())},
         {"rho_minus_integral", json_number(rho.dot(m.vertexAreas()))},
         {"gauss_bonnet_residual",
          json_number(std::abs(m.angleDefects().sum() - 2.0 * std::numbers::pi * m.eulerCharacteristic()))}};
  if (m.referenceCurvature())
    j["curvature_error_sup"] = json_number((k - *m.referenceCurvature()).cwiseAbs().maxCoeff());
  return j;
}

Json make_document(const std::string& command, Json body) {
  return Json{{"header", Json{{"tool", "katolab"}, {"version", kVersion}, {"command", command},
                              {"generated", utcTimestamp()}}},
              {"body", std::move(body)}};
}

void write_samples_csv(std::ostream& out, const VerificationReport& r, bool header) {
  if (header) out << "check,point,other_point,t,other_t,observed,bound,margin\n";
  const auto old = out.precision(17);
  for (const auto& s : r.samples) {
    out << r.checkName << ',' << s.at.point << ',' << s.at.otherPoint << ',' << s.at.t << ',' << s.at.otherT << ','
        << s.observed << ',' << s.bound << ',' << s.margin << '\n';
  }
  out.precision(old);
}

} // namespace katolab
