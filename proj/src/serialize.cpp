#include "ngca/serialize.hpp"

#include <fstream>
#include <string>

namespace ngca::io {

namespace {

Json rows_of(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_rows(const Json& j, const char* field) {
  if (!j.is_array()) throw Error(Errc::parse, std::string("'") + field + "' must be an array of rows");
  const auto rows = static_cast<Index>(j.size());
  const Index cols = rows > 0 ? static_cast<Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw Error(Errc::parse, std::string("'") + field + "' row " + std::to_string(i) + " is ragged");
    }
    for (Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Vector vector_from(const Json& j, const char* field) {
  if (!j.is_array()) throw Error(Errc::parse, std::string("'") + field + "' must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

Json to_json(const Subspace& s) {
  Json basis = Json::array();
  for (Index i = 0; i < s.basis.rows(); ++i) {
    for (Index c = 0; c < s.basis.cols(); ++c) basis.push_back(s.basis(i, c));
  }
  return Json{{"frame", std::string(to_string(s.frame))},
              {"basis", std::move(basis)},
              {"d_x", s.basis.rows()},
              {"d_s", s.basis.cols()},
              {"warning_degenerate_gap", s.degenerate_gap}};
}

Subspace subspace_from_json(const Json& j) {
  try {
    Subspace s;
    s.frame = frame_from_string(j.at("frame").get<std::string>());
    const auto d_x = j.at("d_x").get<Index>();
    const auto d_s = j.at("d_s").get<Index>();
    const auto& flat = j.at("basis");
    if (d_x < 1 || d_s < 1 || !flat.is_array() || static_cast<Index>(flat.size()) != d_x * d_s) {
      throw Error(Errc::parse, "subspace basis size does not match d_x * d_s");
    }
    s.basis.resize(d_x, d_s);
    for (Index i = 0; i < d_x; ++i) {
      for (Index c = 0; c < d_s; ++c) s.basis(i, c) = flat[static_cast<std::size_t>(i * d_s + c)].get<double>();
    }
    s.degenerate_gap = j.value("warning_degenerate_gap", false);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("malformed subspace document: ") + e.what());
  }
}

Json to_json(const lsldg::GradientModel& m) {
  Json sigma = Json::array(), lambda = Json::array();
  for (Index j = 0; j < m.dims(); ++j) {
    sigma.push_back(m.sigma(j));
    lambda.push_back(m.lambda(j));
  }
  return Json{{"centers", rows_of(m.centers)},
              {"sigma", std::move(sigma)},
              {"lambda", std::move(lambda)},
              {"theta", rows_of(m.theta.transpose())},
              {"dims", m.dims()}};
}

lsldg::GradientModel model_from_json(const Json& j) {
  try {
    lsldg::GradientModel m;
    m.centers = matrix_from_rows(j.at("centers"), "centers");
    m.sigma = vector_from(j.at("sigma"), "sigma");
    m.lambda = vector_from(j.at("lambda"), "lambda");
    m.theta = matrix_from_rows(j.at("theta"), "theta").transpose();
    const auto dims = j.at("dims").get<Index>();
    if (m.centers.cols() != dims || m.sigma.size() != dims || m.lambda.size() != dims ||
        m.theta.cols() != dims || m.theta.rows() != m.centers.rows()) {
      throw Error(Errc::parse, "gradient model fields disagree on dimensions");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("malformed gradient model document: ") + e.what());
  }
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, "'" + path.string() + "': " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error(Errc::io, "failed writing '" + path.string() + "'");
}

}  // namespace ngca::io
