#include "gpassure/model_io.hpp"

#include <fstream>
#include <string>
#include <vector>

#include "gpassure/errors.hpp"
#include "json.hpp"

namespace gpassure {
namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    std::vector<double> row(M.cols());
    for (Eigen::Index j = 0; j < M.cols(); ++j) row[j] = M(i, j);
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::VectorXd vector_from_json(const json& j, Eigen::Index expected,
                                 const char* what) {
  const auto v = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(v.size()) != expected) {
    throw FormatError(std::string("model: ") + what + " has " +
                      std::to_string(v.size()) + " entries, expected " +
                      std::to_string(expected));
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), expected);
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows,
                                 Eigen::Index cols, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw FormatError(std::string("model: ") + what + " must have " +
                      std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    M.row(i) = vector_from_json(j[i], cols, what).transpose();
  }
  return M;
}

}  // namespace

void write_model(std::ostream& out, const GPModel& m) {
  const TrainingSet& ts = m.training_set();
  json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelFormatVersion;
  doc["input_dim"] = m.input_dim();
  doc["model_dim"] = m.model_dim();
  doc["n"] = ts.size();
  doc["kernel"] = {{"type", "squared_exponential"},
                   {"lengthscale", m.params().lengthscale},
                   {"signal_variance", m.params().signal_variance},
                   {"noise_variance", m.params().noise_variance}};
  doc["training"] = {{"inputs", matrix_to_json(ts.inputs)},
                     {"targets", vector_to_json(ts.targets)}};
  if (const auto& proj = m.projection()) {
    doc["projection"] = {
        {"standardization",
         {{"means", vector_to_json(proj->standardization.means)},
          {"scales", vector_to_json(proj->standardization.scales)}}},
        {"pca",
         {{"center", vector_to_json(proj->pca.center)},
          {"components", matrix_to_json(proj->pca.components)},
          {"explained_variance",
           vector_to_json(proj->pca.explained_variance)}}},
        {"target_offset", proj->target_offset}};
  } else {
    doc["projection"] = nullptr;
  }
  out << doc.dump(1) << '\n';
}

void save_model(const std::filesystem::path& path, const GPModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  write_model(out, m);
  if (!out) throw InvalidInput("failed writing " + path.string());
}

GPModel read_model(std::istream& in) {
  try {
    const json doc = json::parse(in);
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw FormatError("model: unrecognized format tag");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw FormatError("model: unsupported version " +
                        std::to_string(version));
    }
    const auto n = doc.at("n").get<Eigen::Index>();
    const auto input_dim = doc.at("input_dim").get<Eigen::Index>();
    const auto model_dim = doc.at("model_dim").get<Eigen::Index>();
    if (n < 1 || input_dim < 1 || model_dim < 1) {
      throw FormatError("model: dimensions must be positive");
    }
    const json& k = doc.at("kernel");
    if (k.at("type").get<std::string>() != "squared_exponential") {
      throw FormatError("model: unsupported kernel type");
    }
    const KernelParams params{k.at("lengthscale").get<double>(),
                              k.at("signal_variance").get<double>(),
                              k.at("noise_variance").get<double>()};

    TrainingSet ts;
    ts.inputs =
        matrix_from_json(doc.at("training").at("inputs"), n, model_dim,
                         "training inputs");
    ts.targets =
        vector_from_json(doc.at("training").at("targets"), n, "targets");

    std::optional<FeatureProjection> projection;
    const json& pj = doc.at("projection");
    if (!pj.is_null()) {
      FeatureProjection fp;
      const json& st = pj.at("standardization");
      fp.standardization.means =
          vector_from_json(st.at("means"), input_dim, "standardization means");
      fp.standardization.scales = vector_from_json(
          st.at("scales"), input_dim, "standardization scales");
      if ((fp.standardization.scales.array() <= 0.0).any()) {
        throw FormatError("model: standardization scales must be positive");
      }
      const json& pca = pj.at("pca");
      fp.pca.center = vector_from_json(pca.at("center"), input_dim, "center");
      fp.pca.components = matrix_from_json(pca.at("components"), input_dim,
                                           model_dim, "components");
      fp.pca.explained_variance = vector_from_json(
          pca.at("explained_variance"), model_dim, "explained variance");
      fp.target_offset = pj.at("target_offset").get<double>();
      projection = std::move(fp);
    } else if (input_dim != model_dim) {
      throw FormatError("model: input_dim differs from model_dim without a "
                        "projection");
    }
    return fit(std::move(ts), params, std::move(projection));
  } catch (const json::exception& e) {
    throw FormatError(std::string("model: ") + e.what());
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
}

GPModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open model " + path.string());
  try {
    return read_model(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace gpassure
