#include "glshap/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "glshap/errors.hpp"

namespace glshap {
namespace io {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool has_json_extension(const std::string& path) {
  if (path.size() < 5) return false;
  std::string tail = path.substr(path.size() - 5);
  for (char& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return tail == ".json";
}

std::string dir_of(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

double parse_cell(const std::string& cell, long row, long col) {
  if (cell.empty()) throw parse_error("empty cell", row, col);
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + cell.size())
    throw parse_error("not a number: '" + cell + "'", row, col);
  return v;
}

std::string read_whole_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Position of a byte offset within text, for pinpointing JSON errors.
void locate(const std::string& text, std::size_t byte, long& row, long& col) {
  row = 1;
  col = 1;
  std::size_t stop = byte > 0 ? byte - 1 : 0;
  for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++row;
      col = 1;
    } else {
      ++col;
    }
  }
}

const nlohmann::json& need(const nlohmann::json& obj, const char* key,
                           const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) throw parse_error(ctx + ": missing \"" + key + "\"");
  return *it;
}

double need_number(const nlohmann::json& obj, const char* key, const std::string& ctx) {
  const nlohmann::json& v = need(obj, key, ctx);
  if (!v.is_number()) throw parse_error(ctx + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

int need_int(const nlohmann::json& obj, const char* key, const std::string& ctx) {
  const nlohmann::json& v = need(obj, key, ctx);
  if (!v.is_number_integer())
    throw parse_error(ctx + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<double> numbers_from(const nlohmann::json& arr, const std::string& ctx) {
  if (!arr.is_array()) throw parse_error(ctx + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) throw parse_error(ctx + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Matrix matrix_from_json(const nlohmann::json& arr, const std::string& ctx) {
  if (!arr.is_array() || arr.empty())
    throw parse_error(ctx + ": expected a non-empty 2-d array");
  Matrix m;
  for (std::size_t r = 0; r < arr.size(); ++r) {
    std::vector<double> row = numbers_from(arr[r], ctx + "[" + std::to_string(r) + "]");
    if (r == 0) m.cols = row.size();
    if (row.size() != m.cols)
      throw parse_error(ctx + ": ragged rows", static_cast<long>(r + 1));
    m.data.insert(m.data.end(), row.begin(), row.end());
  }
  m.rows = arr.size();
  if (m.cols == 0) throw parse_error(ctx + ": rows are empty");
  return m;
}

void json_escape(const std::string& s, std::string& out) {
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
}

bool scalars_only(const nlohmann::json& arr) {
  for (const auto& v : arr)
    if (v.is_array() || v.is_object()) return false;
  return true;
}

void emit(const nlohmann::json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        out += pad_in + '"';
        json_escape(it.key(), out);
        out += "\": ";
        emit(it.value(), out, indent, depth + 1);
        if (k + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += pad + '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (scalars_only(j)) {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], out, indent, depth);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        emit(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += pad + ']';
      return;
    }
    case nlohmann::json::value_t::string: {
      out += '"';
      json_escape(j.get<std::string>(), out);
      out += '"';
      return;
    }
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case nlohmann::json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v))
        out += "null";
      else
        out += format_double(v);
      return;
    }
    default:
      out += "null";
      return;
  }
}

}  // namespace

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file: " + path);
  Matrix m;
  std::string line;
  long rowno = 0;
  long datarow = 0;
  while (std::getline(in, line)) {
    ++rowno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++datarow;
    std::vector<double> row;
    std::size_t pos = 0;
    long colno = 0;
    for (;;) {
      std::size_t comma = line.find(',', pos);
      std::string cell =
          comma == std::string::npos ? line.substr(pos) : line.substr(pos, comma - pos);
      ++colno;
      row.push_back(parse_cell(trim(cell), rowno, colno));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (datarow == 1)
      m.cols = row.size();
    else if (row.size() != m.cols)
      throw parse_error("expected " + std::to_string(m.cols) + " columns, got " +
                            std::to_string(row.size()),
                        rowno);
    m.data.insert(m.data.end(), row.begin(), row.end());
    ++m.rows;
  }
  if (m.rows == 0) throw parse_error("no data rows in " + path);
  return m;
}

nlohmann::json json_from_file(const std::string& path) {
  std::string text = read_whole_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    long row = -1, col = -1;
    locate(text, e.byte, row, col);
    throw parse_error("invalid JSON in " + path + ": " + e.what(), row, col);
  }
}

Matrix read_matrix_any(const std::string& path) {
  if (has_json_extension(path)) return matrix_from_json(json_from_file(path), path);
  return read_csv_matrix(path);
}

std::vector<double> read_vector_any(const std::string& path) {
  if (has_json_extension(path)) return numbers_from(json_from_file(path), path);
  Matrix m = read_csv_matrix(path);
  if (m.rows != 1 && m.cols != 1)
    throw parse_error(path + ": expected a single row or a single column of numbers");
  return m.data;
}

TreeEnsemble ensemble_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw parse_error("tree model: expected a JSON object");
  TreeEnsemble out;
  out.feature_count = need_int(j, "feature_count", "tree model");
  const nlohmann::json& trees = need(j, "trees", "tree model");
  if (!trees.is_array() || trees.empty())
    throw parse_error("tree model: \"trees\" must be a non-empty array");
  out.trees.reserve(trees.size());
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const std::string tctx = "trees[" + std::to_string(t) + "]";
    const nlohmann::json& jt = trees[t];
    if (!jt.is_object()) throw parse_error(tctx + ": expected an object");
    TreeModel tree;
    tree.feature_count = out.feature_count;
    tree.root = jt.contains("root") ? need_int(jt, "root", tctx) : 0;
    const nlohmann::json& nodes = need(jt, "nodes", tctx);
    if (!nodes.is_array() || nodes.empty())
      throw parse_error(tctx + ": \"nodes\" must be a non-empty array");
    tree.nodes.reserve(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const std::string nctx = tctx + ".nodes[" + std::to_string(k) + "]";
      const nlohmann::json& jn = nodes[k];
      if (!jn.is_object()) throw parse_error(nctx + ": expected an object");
      TreeNode node;
      if (jn.contains("value")) {
        if (jn.contains("feature") || jn.contains("left") || jn.contains("right"))
          throw parse_error(nctx + ": a node is either a leaf (\"value\") or a split");
        node.value = need_number(jn, "value", nctx);
      } else {
        node.feature = need_int(jn, "feature", nctx);
        node.threshold = need_number(jn, "threshold", nctx);
        node.left = need_int(jn, "left", nctx);
        node.right = need_int(jn, "right", nctx);
        node.left_fraction = need_number(jn, "left_fraction", nctx);
      }
      tree.nodes.push_back(node);
    }
    out.trees.push_back(std::move(tree));
  }
  validate_ensemble(out);
  return out;
}

ProductKernelModel kernel_from_json(const nlohmann::json& j, const std::string& base_dir) {
  if (!j.is_object()) throw parse_error("kernel model: expected a JSON object");
  ProductKernelModel model;
  model.alpha = numbers_from(need(j, "alpha", "kernel model"), "kernel model \"alpha\"");
  if (j.contains("intercept")) model.intercept = need_number(j, "intercept", "kernel model");

  const nlohmann::json& train = need(j, "train", "kernel model");
  if (train.is_string()) {
    std::string path = train.get<std::string>();
    if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
    model.train = read_csv_matrix(path);
  } else {
    model.train = matrix_from_json(train, "kernel model \"train\"");
  }

  const nlohmann::json& spec = need(j, "kernel", "kernel model");
  if (!spec.is_object()) throw parse_error("kernel model: \"kernel\" must be an object");
  std::string family = need(spec, "family", "kernel spec").get<std::string>();
  if (family == "rbf") {
    model.kernel.family = KernelFamily::rbf;
  } else if (family == "laplace") {
    model.kernel.family = KernelFamily::laplace;
  } else if (family == "polynomial" || family == "polynomial-per-dim") {
    model.kernel.family = KernelFamily::polynomial;
  } else {
    throw parse_error("kernel spec: unknown family \"" + family + "\"");
  }

  const std::size_t d = model.train.cols;
  if (model.kernel.family != KernelFamily::polynomial) {
    const bool has_ls = spec.contains("lengthscales");
    const bool has_gamma = spec.contains("gamma");
    if (has_ls == has_gamma)
      throw parse_error("kernel spec: give exactly one of \"lengthscales\" or \"gamma\"");
    if (has_ls) {
      const nlohmann::json& ls = spec["lengthscales"];
      model.kernel.lengthscales =
          ls.is_number() ? std::vector<double>(d, ls.get<double>())
                         : numbers_from(ls, "kernel spec \"lengthscales\"");
    } else {
      const nlohmann::json& g = spec["gamma"];
      std::vector<double> gamma = g.is_number()
                                      ? std::vector<double>(d, g.get<double>())
                                      : numbers_from(g, "kernel spec \"gamma\"");
      model.kernel.lengthscales.reserve(gamma.size());
      for (double gv : gamma) {
        if (!(gv > 0.0)) throw parse_error("kernel spec: gamma values must be positive");
        model.kernel.lengthscales.push_back(std::sqrt(1.0 / (2.0 * gv)));
      }
    }
  } else {
    if (spec.contains("degree")) model.kernel.degree = need_int(spec, "degree", "kernel spec");
    if (spec.contains("offset"))
      model.kernel.offset = need_number(spec, "offset", "kernel spec");
  }

  validate_model(model);
  return model;
}

LoadedModel load_model(const std::string& path) {
  nlohmann::json j = json_from_file(path);
  LoadedModel out;
  if (j.is_object() && j.contains("trees")) {
    out.kind = ModelKind::tree_ensemble;
    out.ensemble = ensemble_from_json(j);
  } else if (j.is_object() && j.contains("alpha")) {
    out.kind = ModelKind::kernel;
    out.kernel = kernel_from_json(j, dir_of(path));
  } else {
    throw parse_error(path + ": not a recognized model file (need \"trees\" or \"alpha\")");
  }
  return out;
}

nlohmann::json ensemble_to_json(const TreeEnsemble& ensemble) {
  nlohmann::json trees = nlohmann::json::array();
  for (const TreeModel& tree : ensemble.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"value", n.value}});
      } else {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"left_fraction", n.left_fraction}});
      }
    }
    trees.push_back({{"root", tree.root}, {"nodes", std::move(nodes)}});
  }
  return {{"feature_count", ensemble.feature_count}, {"trees", std::move(trees)}};
}

nlohmann::json kernel_to_json(const ProductKernelModel& model) {
  nlohmann::json spec;
  switch (model.kernel.family) {
    case KernelFamily::rbf:
      spec = {{"family", "rbf"}, {"lengthscales", model.kernel.lengthscales}};
      break;
    case KernelFamily::laplace:
      spec = {{"family", "laplace"}, {"lengthscales", model.kernel.lengthscales}};
      break;
    case KernelFamily::polynomial:
      spec = {{"family", "polynomial"},
              {"degree", model.kernel.degree},
              {"offset", model.kernel.offset}};
      break;
  }
  nlohmann::json train = nlohmann::json::array();
  for (std::size_t r = 0; r < model.train.rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < model.train.cols; ++c) row.push_back(model.train.at(r, c));
    train.push_back(std::move(row));
  }
  return {{"alpha", model.alpha},
          {"intercept", model.intercept},
          {"kernel", std::move(spec)},
          {"train", std::move(train)}};
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_json_string(const nlohmann::json& j, int indent) {
  std::string out;
  emit(j, out, indent, 0);
  out += '\n';
  return out;
}

std::string csv_row(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot write file: " + path);
  out << content;
  if (!out) throw parse_error("write failed: " + path);
}

}  // namespace io
}  // namespace glshap
