// JSON report builders for the command line. Schemas are fixed; angle
// vectors travel as arrays of radians, matrices as row-major arrays of rows.
// Serialization is deterministic (keys are ordered, doubles round-trip).

#ifndef CONELAP_REPORT_HPP
#define CONELAP_REPORT_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "conelap/cone.hpp"
#include "conelap/polytope.hpp"
#include "conelap/wirtinger.hpp"

namespace conelap::cli {

using nlohmann::json;

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);
json to_json(const Signature<double>& s);

Eigen::VectorXd vector_from_json(const json& j);
Eigen::MatrixXd matrix_from_json(const json& j);

// {"normals": [[x,y,z], ...]}
Eigen::MatrixXd read_normals_file(const std::string& path);

json matrix_report(const WirtingerMatrix<double>& wm,
                   const Signature<double>& numeric,
                   const Signature<double>& predicted, bool warn_near_resonance);
json verdict_report(const AngleVector<double>& angles, const Eigen::VectorXd& x,
                    const WirtingerVerdict<double>& v);
json violation_report(const AngleVector<double>& angles,
                      const std::optional<Eigen::VectorXd>& x);
json gap_report(const AngleVector<double>& angles, const GapReport<double>& g);
json polygon_report(const ConePolygon<double>& p,
                    const AngleVector<double>& angles);
json semidefinite_report(const QuermassForm<double>& form,
                         const SemidefiniteReport<double>& rep);
json quermass_report(const QuermassForm<double>& form);

}  // namespace conelap::cli

#endif  // CONELAP_REPORT_HPP
