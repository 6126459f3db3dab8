#include "qcorr/state_io.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace qcorr {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

json data_pairs(const cx* begin, std::size_t count) {
  json arr = json::array();
  for (std::size_t i = 0; i < count; ++i)
    arr.push_back({begin[i].real(), begin[i].imag()});
  return arr;
}

ordered header(const std::vector<int>& dims,
               const std::vector<std::string>& labels, const char* kind) {
  ordered j;
  j["dims"] = dims;
  j["labels"] = labels;
  j["kind"] = kind;
  return j;
}

std::vector<cx> parse_data(const json& j, std::size_t expected) {
  if (!j.is_array() || j.size() != expected)
    throw std::invalid_argument("state file: data must hold " +
                                std::to_string(expected) + " [re, im] pairs");
  std::vector<cx> out;
  out.reserve(expected);
  for (const json& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number())
      throw std::invalid_argument("state file: each data entry is [re, im]");
    out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return out;
}

}  // namespace

std::string state_to_json(const MultipartiteState& s) {
  ordered j = header(s.dims(), s.labels(), "density");
  // Eigen stores column-major; emit row-major as documented.
  json arr = json::array();
  for (int r = 0; r < s.dim(); ++r)
    for (int c = 0; c < s.dim(); ++c)
      arr.push_back({s.matrix()(r, c).real(), s.matrix()(r, c).imag()});
  j["data"] = arr;
  return j.dump(2);
}

std::string state_to_json(const PureState& s) {
  ordered j = header(s.dims(), s.labels(), "pure");
  j["data"] = data_pairs(s.vec().data(), static_cast<std::size_t>(s.dim()));
  return j.dump(2);
}

void save_state_file(const std::string& path, const MultipartiteState& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write state file: " + path);
  out << state_to_json(s) << '\n';
}

void save_state_file(const std::string& path, const PureState& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write state file: " + path);
  out << state_to_json(s) << '\n';
}

LoadedState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read state file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("state file " + path + ": " + e.what());
  }

  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty())
    throw std::invalid_argument("state file: dims must be a nonempty array");
  std::vector<int> dims;
  for (const json& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 2)
      throw std::invalid_argument("state file: every dimension must be >= 2");
    dims.push_back(d.get<int>());
  }

  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array() || j["labels"].size() != dims.size())
      throw std::invalid_argument(
          "state file: labels must match dims in length");
    for (const json& l : j["labels"]) {
      if (!l.is_string() || l.get<std::string>().empty())
        throw std::invalid_argument("state file: labels must be nonempty strings");
      labels.push_back(l.get<std::string>());
    }
  } else {
    labels = default_labels(static_cast<int>(dims.size()));
  }

  std::string kind = j.value("kind", "");
  std::size_t dim = 1;
  for (int d : dims) dim *= static_cast<std::size_t>(d);

  if (!j.contains("data"))
    throw std::invalid_argument("state file: missing data");

  if (kind == "pure") {
    std::vector<cx> data = parse_data(j["data"], dim);
    Vector v = Eigen::Map<const Vector>(data.data(), static_cast<Eigen::Index>(dim));
    PureState psi(dims, labels, v);
    MultipartiteState rho = psi.density();
    return LoadedState{std::move(psi), std::move(rho), path};
  }
  if (kind == "density") {
    std::vector<cx> data = parse_data(j["data"], dim * dim);
    Matrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            data[r * dim + c];
    return LoadedState{std::nullopt, MultipartiteState(dims, labels, m), path};
  }
  throw std::invalid_argument(
      "state file: kind must be \"density\" or \"pure\"");
}

LoadedState resolve_state(const std::string& descriptor_or_path) {
  static const char* prefixes[] = {"ghz:", "w:", "bell:", "product:",
                                   "haar:", "mixed:"};
  for (const char* p : prefixes)
    if (descriptor_or_path.rfind(p, 0) == 0)
      return make_named_state(descriptor_or_path);
  return load_state_file(descriptor_or_path);
}

}  // namespace qcorr
