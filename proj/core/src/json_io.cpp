#include "disclab/json_io.hpp"

#include <nlohmann/json.hpp>

namespace disclab {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::validation, "malformed JSON");
  return j;
}

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name))
    fail(ErrorKind::validation, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::validation, std::string("bad field '") + name + "'");
  }
}

json sparse_columns(const std::vector<std::vector<VectorFamily::Entry>>& columns) {
  json out = json::array();
  for (const auto& column : columns) {
    json col = json::array();
    for (const auto& e : column) col.push_back({e.coord + 1, e.value});
    out.push_back(std::move(col));
  }
  return out;
}

}  // namespace

std::string to_json(const SetSplitInstance& instance) {
  json j;
  j["n"] = instance.n;
  j["b"] = instance.b;
  j["sets"] = json::array();
  for (const auto& set : instance.sets)
    j["sets"].push_back({set[0], set[1], set[2], set[3]});
  return j.dump(2) + "\n";
}

SetSplitInstance instance_from_json(const std::string& text) {
  const json j = parse(text);
  SetSplitInstance instance;
  instance.n = field<int>(j, "n");
  instance.b = field<int>(j, "b");
  for (const auto& row : field<json>(j, "sets")) {
    if (!row.is_array() || row.size() != 4)
      fail(ErrorKind::validation, "each set must list exactly 4 elements");
    instance.sets.push_back(
        {row[0].get<int>(), row[1].get<int>(), row[2].get<int>(), row[3].get<int>()});
  }
  instance.validate();
  return instance;
}

std::string to_json(const Assignment& assignment) {
  json j;
  j["values"] = assignment.values;
  return j.dump(2) + "\n";
}

Assignment assignment_from_json(const std::string& text) {
  const json j = parse(text);
  Assignment a;
  a.values = field<std::vector<int>>(j, "values");
  a.validate();
  return a;
}

std::string to_json(const VectorFamily& family) {
  json j;
  j["kind"] = "zero";
  j["d"] = family.d;
  j["N"] = family.N;
  j["scale"] = "1/sqrt3";
  j["m"] = family.m;
  j["n"] = family.n;
  j["columns"] = sparse_columns(family.columns);
  json roles = json::array();
  for (const auto& role : family.roles)
    roles.push_back({{"element", role.element}, {"gadget", role.gadget}});
  json blocks = json::array();
  for (const auto& block : family.blocks)
    blocks.push_back({{"element", block.element},
                      {"first_coord", block.first_coord + 1},
                      {"width", block.width}});
  j["maps"] = {{"n1", family.n1},
               {"n2", family.n2},
               {"column_roles", std::move(roles)},
               {"gadget_blocks", std::move(blocks)}};
  return j.dump(2) + "\n";
}

VectorFamily vector_family_from_json(const std::string& text) {
  const json j = parse(text);
  if (field<std::string>(j, "kind") != "zero")
    fail(ErrorKind::validation, "expected a kind=zero family");
  VectorFamily family;
  family.d = field<int>(j, "d");
  family.N = field<int>(j, "N");
  family.m = field<int>(j, "m");
  family.n = field<int>(j, "n");
  const json maps = field<json>(j, "maps");
  family.n1 = field<int>(maps, "n1");
  family.n2 = field<int>(maps, "n2");
  for (const auto& col : field<json>(j, "columns")) {
    std::vector<VectorFamily::Entry> entries;
    for (const auto& e : col) {
      if (!e.is_array() || e.size() != 2)
        fail(ErrorKind::validation, "sparse entries are [coord, value] pairs");
      entries.push_back({e[0].get<int>() - 1, e[1].get<int>()});
    }
    family.columns.push_back(std::move(entries));
  }
  for (const auto& role : field<json>(maps, "column_roles"))
    family.roles.push_back(
        {field<int>(role, "element"), field<int>(role, "gadget")});
  for (const auto& block : field<json>(maps, "gadget_blocks"))
    family.blocks.push_back({field<int>(block, "element"),
                             field<int>(block, "first_coord") - 1,
                             field<int>(block, "width")});
  if (static_cast<int>(family.columns.size()) != family.N ||
      static_cast<int>(family.roles.size()) != family.N)
    fail(ErrorKind::validation, "column count does not match N");
  if (family.d != family.m + 4 * family.n1 + 5 * family.n2 ||
      family.N != family.n + 2 * family.n1 + 3 * family.n2)
    fail(ErrorKind::validation, "dimension fields are inconsistent");
  for (const auto& column : family.columns) {
    if (column.size() != 3)
      fail(ErrorKind::validation, "every column has exactly 3 nonzeros");
    for (const auto& e : column)
      if (e.coord < 0 || e.coord >= family.d || (e.value != 1 && e.value != -1))
        fail(ErrorKind::validation, "sparse entry out of range");
  }
  return family;
}

std::string to_json(const BiasedFamily& family) {
  json j;
  j["kind"] = "biased";
  j["d"] = family.D();
  j["N"] = family.N();
  j["m"] = family.m;
  j["n"] = family.n;
  j["p"] = to_string(family.p);
  j["q"] = to_string(family.q);
  j["beta"] = to_string(family.beta);
  j["scale"] = family.scale();
  // Sparse integer columns of the row-rescaled matrix; rows beyond the first
  // m carry an implicit 1/m factor.
  j["pi_rows_scaled_by_m"] = true;
  const auto rows = family.int_rows();
  json columns = json::array();
  for (int c = 0; c < family.N(); ++c) {
    json col = json::array();
    for (int r = 0; r < family.D(); ++r)
      if (rows(r, c) != 0) col.push_back({r + 1, rows(r, c)});
    columns.push_back(std::move(col));
  }
  j["columns"] = std::move(columns);
  return j.dump(2) + "\n";
}

BiasedFamily biased_family_from_json(const std::string& text) {
  const json j = parse(text);
  if (field<std::string>(j, "kind") != "biased")
    fail(ErrorKind::validation, "expected a kind=biased family");
  BiasedFamily family;
  family.m = field<int>(j, "m");
  family.n = field<int>(j, "n");
  family.p = rational_from_string(field<std::string>(j, "p"));
  family.q = rational_from_string(field<std::string>(j, "q"));
  family.beta = rational_from_string(field<std::string>(j, "beta"));
  if (family.m < 1 || family.n < 1)
    fail(ErrorKind::validation, "m and n must be positive");
  if (field<int>(j, "d") != family.D() || field<int>(j, "N") != family.N())
    fail(ErrorKind::validation, "dimension fields are inconsistent");
  if (family.beta != (Rational(1, 1) - boost::abs(family.p)) * family.q)
    fail(ErrorKind::validation, "beta does not match (1 - |p|) q");

  family.A = Eigen::MatrixXi::Zero(family.m, family.n);
  const json columns = field<json>(j, "columns");
  if (static_cast<int>(columns.size()) != family.N())
    fail(ErrorKind::validation, "column count does not match N");
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> loaded =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(
          family.D(), family.N());
  for (int c = 0; c < family.N(); ++c)
    for (const auto& e : columns[static_cast<std::size_t>(c)]) {
      if (!e.is_array() || e.size() != 2)
        fail(ErrorKind::validation, "sparse entries are [coord, value] pairs");
      const int r = e[0].get<int>() - 1;
      if (r < 0 || r >= family.D())
        fail(ErrorKind::validation, "sparse entry out of range");
      loaded(r, c) = e[1].get<std::int64_t>();
    }
  for (int r = 0; r < family.m; ++r)
    for (int c = 0; c < family.n; ++c) {
      const std::int64_t v = loaded(r, c);
      if (v != 0 && v != 1)
        fail(ErrorKind::validation, "incidence entries must be 0 or 1");
      family.A(r, c) = static_cast<int>(v);
    }
  if (loaded != family.int_rows())
    fail(ErrorKind::validation, "columns do not match the block construction");
  for (int r = 0; r < family.m; ++r) {
    long long row_sum = 0;
    for (int c = 0; c < family.n; ++c) row_sum += family.A(r, c);
    if (row_sum != 4)
      fail(ErrorKind::validation, "incidence rows must sum to 4");
  }
  return family;
}

AnyFamily family_from_json(const std::string& text) {
  const json j = parse(text);
  const std::string kind = field<std::string>(j, "kind");
  if (kind == "zero") return vector_family_from_json(text);
  if (kind == "biased") return biased_family_from_json(text);
  fail(ErrorKind::validation, "unknown family kind '" + kind + "'");
}

std::string to_json(const SigningDistribution& dist) {
  json j;
  j["support"] = json::array();
  for (const auto& atom : dist.support) {
    std::vector<int> x(atom.x.data(), atom.x.data() + atom.x.size());
    j["support"].push_back({{"x", std::move(x)}, {"p", atom.prob}});
  }
  std::vector<double> mean(dist.target_mean.data(),
                           dist.target_mean.data() + dist.target_mean.size());
  j["mean"] = std::move(mean);
  return j.dump(2) + "\n";
}

SigningDistribution distribution_from_json(const std::string& text) {
  const json j = parse(text);
  SigningDistribution dist;
  const auto mean = field<std::vector<double>>(j, "mean");
  dist.target_mean =
      Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<int>(mean.size()));
  for (const auto& atom : field<json>(j, "support")) {
    const auto x = field<std::vector<int>>(atom, "x");
    SigningDistribution::Atom out;
    out.x = Eigen::Map<const Eigen::VectorXi>(x.data(), static_cast<int>(x.size()));
    out.prob = field<double>(atom, "p");
    dist.support.push_back(std::move(out));
  }
  dist.validate();
  return dist;
}

std::string to_json(const CovarianceReport& report) {
  json j;
  const int d = static_cast<int>(report.cov.rows());
  j["d"] = d;
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) flat.push_back(report.cov(r, c));
  j["cov"] = std::move(flat);
  j["op_norm"] = report.op_norm;
  j["trace"] = report.trace;
  j["trace_lower_bound"] = report.trace_lower_bound;
  return j.dump(2) + "\n";
}

namespace {

const char* status_name(OracleStatus status) {
  switch (status) {
    case OracleStatus::exact_zero:
      return "exact_zero";
    case OracleStatus::converged:
      return "converged";
    case OracleStatus::iteration_cap:
      return "iteration_cap";
  }
  return "unknown";
}

}  // namespace

std::string to_json(const OracleResult& result) {
  json j;
  j["value"] = result.value;
  j["lower_bound"] = result.lower_bound;
  j["upper_bound"] = result.upper_bound;
  j["status"] = status_name(result.status);
  j["witness"] = json::parse(to_json(result.witness));
  j["bound_history"] = json::array();
  for (const auto& [lo, hi] : result.bound_history)
    j["bound_history"].push_back({lo, hi});
  return j.dump(2) + "\n";
}

std::string to_json(const std::vector<CheckLine>& lines) {
  json j;
  j["checks"] = json::array();
  for (const auto& line : lines)
    j["checks"].push_back({{"id", line.id},
                           {"lhs", line.lhs},
                           {"rhs", line.rhs},
                           {"pass", line.pass}});
  j["all_pass"] = all_pass(lines);
  return j.dump(2) + "\n";
}

}  // namespace disclab
