#ifndef GLSHAP_IO_HPP
#define GLSHAP_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "glshap/kernel_model.hpp"
#include "glshap/tree_model.hpp"

namespace glshap {
namespace io {

// Headerless CSV of doubles, one row per record. Throws parse_error with
// 1-based row/column positions.
Matrix read_csv_matrix(const std::string& path);

// Matrix from a .json file (2-d array) or CSV (anything else).
Matrix read_matrix_any(const std::string& path);

// Single numeric vector: JSON array, or a one-row / one-column CSV.
std::vector<double> read_vector_any(const std::string& path);

nlohmann::json json_from_file(const std::string& path);

// Model files are JSON; the key set picks the backend:
// {"feature_count", "trees": [...]} vs {"alpha", "kernel", "train", ...}.
enum class ModelKind { tree_ensemble, kernel };

struct LoadedModel {
  ModelKind kind;
  TreeEnsemble ensemble;
  ProductKernelModel kernel;
};

LoadedModel load_model(const std::string& path);

TreeEnsemble ensemble_from_json(const nlohmann::json& j);

// base_dir resolves a relative "train" CSV path. "kernel" accepts
// "lengthscales" or the gamma form (scalar or per-feature array),
// converted via l = sqrt(1/(2 gamma)).
ProductKernelModel kernel_from_json(const nlohmann::json& j, const std::string& base_dir);

// Inverse of the readers above; gen writes models through these.
nlohmann::json ensemble_to_json(const TreeEnsemble& ensemble);
nlohmann::json kernel_to_json(const ProductKernelModel& model);  // train inline

// Serialization. All numbers print with 17 significant digits so that
// every emitted value round-trips exactly.
std::string format_double(double v);
std::string to_json_string(const nlohmann::json& j, int indent = 2);
std::string csv_row(const std::vector<double>& values);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace io
}  // namespace glshap

#endif
