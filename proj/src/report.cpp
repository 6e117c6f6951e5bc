#include "conelap/report.hpp"

#include <fstream>
#include <stdexcept>

namespace conelap::cli {

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Signature<double>& s) {
  return json{{"positive", s.positive},
              {"zero", s.zero},
              {"negative", s.negative},
              {"tolerance", s.tolerance}};
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a JSON array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("expected a JSON array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index r = 0;
  for (const auto& row : j) {
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument("ragged JSON matrix");
    Eigen::Index c = 0;
    for (const auto& x : row) m(r, c++) = x.get<double>();
    ++r;
  }
  return m;
}

Eigen::MatrixXd read_normals_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open normals file '" + path + "'");
  json doc = json::parse(in);
  if (!doc.contains("normals"))
    throw std::invalid_argument("normals file lacks a 'normals' key");
  return matrix_from_json(doc["normals"]);
}

namespace {

const char* mode_name(Mode m) {
  return m == Mode::Closed ? "closed" : "dirichlet";
}

}  // namespace

json matrix_report(const WirtingerMatrix<double>& wm,
                   const Signature<double>& numeric,
                   const Signature<double>& predicted,
                   bool warn_near_resonance) {
  return json{{"mode", mode_name(wm.angles.mode())},
              {"angles", to_json(wm.angles.angles())},
              {"omega", wm.omega},
              {"matrix", to_json(wm.matrix)},
              {"weights", to_json(wm.weights)},
              {"signature", to_json(numeric)},
              {"predicted_signature", to_json(predicted)},
              {"match", numeric.counts_equal(predicted)},
              {"near_resonance_warning", warn_near_resonance}};
}

json verdict_report(const AngleVector<double>& angles, const Eigen::VectorXd& x,
                    const WirtingerVerdict<double>& v) {
  return json{{"mode", mode_name(angles.mode())},
              {"angles", to_json(angles.angles())},
              {"x", to_json(x)},
              {"lhs", v.lhs},
              {"rhs", v.rhs},
              {"constraint_residual", v.constraint_residual},
              {"holds", v.holds},
              {"equality_case", v.equality_case}};
}

json violation_report(const AngleVector<double>& angles,
                      const std::optional<Eigen::VectorXd>& x) {
  json out{{"mode", mode_name(angles.mode())},
           {"angles", to_json(angles.angles())},
           {"omega", angles.total()},
           {"violation_exists", x.has_value()}};
  if (x) {
    out["x"] = to_json(*x);
    const auto v = check_wirtinger(angles, *x);
    out["lhs"] = v.lhs;
    out["rhs"] = v.rhs;
    out["constraint_residual"] = v.constraint_residual;
  }
  return out;
}

json gap_report(const AngleVector<double>& angles, const GapReport<double>& g) {
  return json{{"mode", mode_name(angles.mode())},
              {"angles", to_json(angles.angles())},
              {"omega", angles.total()},
              {"spectrum", to_json(g.spectrum)},
              {"ground", g.ground},
              {"second", g.second},
              {"gap", g.gap}};
}

json polygon_report(const ConePolygon<double>& p,
                    const AngleVector<double>& angles) {
  json sides = json::array();
  for (const auto& s : p.sides) {
    sides.push_back(json{{"start", {s.start.x(), s.start.y()}},
                         {"end", {s.end.x(), s.end.y()}}});
  }
  return json{{"angles", to_json(angles.angles())},
              {"support", to_json(p.support)},
              {"edge_lengths", to_json(p.edge_lengths)},
              {"perimeter", p.perimeter},
              {"area", p.area},
              {"geometric_perimeter", p.geometric_perimeter},
              {"geometric_area", p.geometric_area},
              {"convex", p.convex},
              {"vertices", std::move(sides)}};
}

json quermass_report(const QuermassForm<double>& form) {
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(form.matrix.rows());
  return json{{"normals", to_json(form.fan.normals)},
              {"matrix", to_json(form.matrix)},
              {"valid_radius", form.valid_radius},
              {"quermass_of_ones", ones.dot(form.matrix * ones)}};
}

json semidefinite_report(const QuermassForm<double>& form,
                         const SemidefiniteReport<double>& rep) {
  return json{{"signature", to_json(rep.signature)},
              {"expected_signature", to_json(rep.expected)},
              {"signature_matches", rep.signature_matches},
              {"translation_residual", rep.translation_residual},
              {"max_constrained_value", rep.max_constrained_value},
              {"constraint_tolerance", rep.constraint_tolerance},
              {"restricted_zero_dim", rep.restricted_zero_dim},
              {"kernel_alignment_angle", rep.kernel_alignment_angle},
              {"kernel_basis", to_json(rep.kernel)},
              {"min_adjacent_entry", rep.min_adjacent_entry},
              {"adjacency_positive", rep.adjacency_positive},
              {"valid_radius", form.valid_radius},
              {"ok", rep.ok}};
}

}  // namespace conelap::cli
