#include "ssr/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

namespace ssr {

namespace {

std::string at_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(at_path(path, key) + ": missing");
  return *it;
}

const Json& array_field(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_array()) throw SchemaError(at_path(path, key) + ": expected an array");
  return v;
}

Rational rational_from(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw SchemaError(path + ": '" + v.get<std::string>() + "' is not a rational number");
    }
  }
  throw SchemaError(path + ": expected a number or a numeric string");
}

Integer integer_from(const Json& v, const std::string& path) {
  Rational q = rational_from(v, path);
  if (q.get_den() != 1) throw SchemaError(path + ": expected an integer");
  return q.get_num();
}

std::size_t index_from(const Json& v, const std::string& path) {
  if (!v.is_number_unsigned()) throw SchemaError(path + ": expected a nonnegative integer index");
  return v.get<std::size_t>();
}

QVector vector_from(const Json& v, const std::string& path, bool integral, std::optional<std::size_t> size = {}) {
  if (!v.is_array()) throw SchemaError(path + ": expected an array of numbers");
  QVector out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    out.push_back(integral ? Rational(integer_from(v[i], p)) : rational_from(v[i], p));
  }
  if (size && out.size() != *size)
    throw SchemaError(path + ": expected " + std::to_string(*size) + " entries, got " + std::to_string(out.size()));
  return out;
}

std::vector<QVector> vectors_from(const Json& v, const std::string& path, bool integral,
                                  std::optional<std::size_t> size = {}) {
  if (!v.is_array()) throw SchemaError(path + ": expected an array of vectors");
  std::vector<QVector> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(vector_from(v[i], path + "[" + std::to_string(i) + "]", integral, size));
  return out;
}

std::vector<std::size_t> indices_from(const Json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path + ": expected an array of indices");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(index_from(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Json vector_json(const QVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

Json vectors_json(const std::vector<QVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(vector_json(v));
  return out;
}

Json values_json(const std::vector<Rational>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(v.get_str());
  return out;
}

Json step_json(const TraceStep& s) {
  Json j;
  j["kind"] = to_string(s.kind);
  j["side"] = to_string(s.side);
  j["round"] = s.round;
  j["digest"] = s.digest;
  j["source_multiplicity"] = s.source_multiplicity.get_str();
  switch (s.kind) {
    case StepKind::cut:
      j["normals"] = vectors_json(s.normals);
      break;
    case StepKind::star:
      j["point"] = vector_json(s.point);
      break;
    case StepKind::triangulate:
      j["ray_order"] = s.ray_order;
      break;
    case StepKind::barycentric:
      j["order"] = s.order;
      break;
    case StepKind::mbs: {
      Json points = Json::array();
      for (const auto& [cone, point] : s.marked.points) points.push_back({{"cone", cone}, {"point", vector_json(point)}});
      j["marked"] = {{"points", points}, {"order", s.marked.order}};
      break;
    }
    case StepKind::join: {
      Json fibers = Json::array();
      for (const auto& [ray, points] : s.fiber_points) fibers.push_back({{"ray", ray}, {"points", vectors_json(points)}});
      j["fibers"] = fibers;
      break;
    }
    case StepKind::alteration: {
      Json mult = Json::array();
      for (const auto& [ray, m] : s.alteration.multipliers) mult.push_back({{"ray", ray}, {"multiplier", m.get_str()}});
      j["multipliers"] = mult;
      break;
    }
    case StepKind::pullback:
      break;
  }
  if (s.certificate) j["certificate"] = values_json(s.certificate->values);
  return j;
}

TraceStep step_from(const Json& j, const std::string& path) {
  TraceStep s;
  const Json& kind = field(j, "kind", path);
  const Json& side = field(j, "side", path);
  if (!kind.is_string() || !side.is_string()) throw SchemaError(path + ": kind and side must be strings");
  s.kind = step_kind_from_string(kind.get<std::string>());
  s.side = side_from_string(side.get<std::string>());
  s.round = index_from(field(j, "round", path), at_path(path, "round"));
  const Json& digest = field(j, "digest", path);
  if (!digest.is_string()) throw SchemaError(at_path(path, "digest") + ": expected a string");
  s.digest = digest.get<std::string>();
  s.source_multiplicity = integer_from(field(j, "source_multiplicity", path), at_path(path, "source_multiplicity"));
  switch (s.kind) {
    case StepKind::cut:
      s.normals = vectors_from(field(j, "normals", path), at_path(path, "normals"), false);
      break;
    case StepKind::star:
      s.point = vector_from(field(j, "point", path), at_path(path, "point"), false);
      break;
    case StepKind::triangulate:
      s.ray_order = indices_from(field(j, "ray_order", path), at_path(path, "ray_order"));
      break;
    case StepKind::barycentric:
      s.order = indices_from(field(j, "order", path), at_path(path, "order"));
      break;
    case StepKind::mbs: {
      std::string mp = at_path(path, "marked");
      const Json& marked = field(j, "marked", path);
      const Json& points = array_field(marked, "points", mp);
      for (std::size_t i = 0; i < points.size(); ++i) {
        std::string pp = mp + ".points[" + std::to_string(i) + "]";
        s.marked.points[index_from(field(points[i], "cone", pp), pp + ".cone")] =
            vector_from(field(points[i], "point", pp), pp + ".point", false);
      }
      s.marked.order = indices_from(field(marked, "order", mp), mp + ".order");
      break;
    }
    case StepKind::join: {
      const Json& fibers = array_field(j, "fibers", path);
      for (std::size_t i = 0; i < fibers.size(); ++i) {
        std::string fp = at_path(path, "fibers") + "[" + std::to_string(i) + "]";
        s.fiber_points[index_from(field(fibers[i], "ray", fp), fp + ".ray")] =
            vectors_from(field(fibers[i], "points", fp), fp + ".points", false);
      }
      break;
    }
    case StepKind::alteration: {
      const Json& mult = array_field(j, "multipliers", path);
      for (std::size_t i = 0; i < mult.size(); ++i) {
        std::string mp = at_path(path, "multipliers") + "[" + std::to_string(i) + "]";
        s.alteration.multipliers[index_from(field(mult[i], "ray", mp), mp + ".ray")] =
            integer_from(field(mult[i], "multiplier", mp), mp + ".multiplier");
      }
      break;
    }
    case StepKind::pullback:
      break;
  }
  if (j.contains("certificate")) {
    GoodFunction cert;
    for (const auto& v : vector_from(j["certificate"], at_path(path, "certificate"), false)) cert.values.push_back(v);
    s.certificate = std::move(cert);
  }
  return s;
}

const Json& sub_document(const Json& doc, const std::string& key, const std::filesystem::path& base_dir, Json& storage) {
  const Json& v = field(doc, key, "");
  if (!v.is_string()) return v;
  std::filesystem::path p = v.get<std::string>();
  if (p.is_relative()) p = base_dir / p;
  storage = read_json_file(p);
  return storage;
}

}  // namespace

Json to_json(const Complex& c) {
  Json j;
  j["ambient_dim"] = c.ambient_dim();
  j["rays"] = vectors_json(c.rays());
  Json cones = Json::array();
  for (auto m : c.maximal_cones()) {
    Json cone;
    cone["rays"] = c.cone(m).rays;
    LatticeBasis standard = LatticeBasis::standard(c.ambient_dim()).restrict_to_span(c.generators(m));
    if (!(standard == c.cone(m).lattice)) cone["lattice"] = vectors_json(c.cone(m).lattice.basis_vectors());
    cones.push_back(cone);
  }
  j["cones"] = cones;
  return j;
}

Json to_json(const ComplexMorphism& f) {
  Json matrix = Json::array();
  for (std::size_t i = 0; i < f.map().rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < f.map().cols(); ++k) row.push_back(f.map()(i, k).get_str());
    matrix.push_back(row);
  }
  return {{"matrix", matrix}, {"source", to_json(f.source())}, {"target", to_json(f.target())}};
}

Json to_json(const ReductionTrace& trace) {
  Json j;
  j["format"] = "ssr-trace/1";
  j["initial_digest"] = trace.initial_digest;
  j["final_digest"] = trace.final_digest;
  j["status"] = trace.complete ? "complete" : "failed";
  if (trace.failure) j["failure"] = {{"exit_code", trace.failure->exit_code}, {"message", trace.failure->message}};
  j["reduction_rounds"] = trace.reduction_rounds;
  Json rounds = Json::array();
  for (const auto& r : trace.rounds)
    rounds.push_back({{"round", r.round},
                      {"multiplicity_before", r.multiplicity_before.get_str()},
                      {"multiplicity_after", r.multiplicity_after.get_str()},
                      {"source_cones", r.source_cones},
                      {"target_cones", r.target_cones}});
  j["rounds"] = rounds;
  Json steps = Json::array();
  for (const auto& s : trace.steps) steps.push_back(step_json(s));
  j["steps"] = steps;
  return j;
}

Complex complex_from_json(const Json& doc) {
  const Json& dim = field(doc, "ambient_dim", "");
  if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0)
    throw SchemaError("ambient_dim: expected a positive integer");
  const std::size_t n = dim.get<std::size_t>();
  std::vector<QVector> rays = vectors_from(array_field(doc, "rays", ""), "rays", true, n);
  const Json& cones = array_field(doc, "cones", "");
  std::vector<ConeSpec> specs;
  for (std::size_t i = 0; i < cones.size(); ++i) {
    std::string path = "cones[" + std::to_string(i) + "]";
    ConeSpec spec;
    spec.rays = indices_from(field(cones[i], "rays", path), path + ".rays");
    if (spec.rays.empty()) throw SchemaError(path + ".rays: a cone needs at least one ray");
    for (auto r : spec.rays)
      if (r >= rays.size()) throw SchemaError(path + ".rays: index " + std::to_string(r) + " out of range");
    if (cones[i].contains("lattice")) {
      auto basis = vectors_from(cones[i]["lattice"], path + ".lattice", false, n);
      if (rank_of(basis, n) != basis.size()) throw SchemaError(path + ".lattice: basis vectors are dependent");
      spec.lattice = LatticeBasis::from_generators(n, basis);
    }
    specs.push_back(std::move(spec));
  }
  return Complex(n, std::move(rays), specs);
}

ComplexMorphism morphism_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  const Json& matrix = array_field(doc, "matrix", "");
  Json source_storage, target_storage;
  Complex source = complex_from_json(sub_document(doc, "source", base_dir, source_storage));
  Complex target = complex_from_json(sub_document(doc, "target", base_dir, target_storage));
  if (matrix.size() != target.ambient_dim())
    throw SchemaError("matrix: expected " + std::to_string(target.ambient_dim()) + " rows");
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    QVector row = vector_from(matrix[i], "matrix[" + std::to_string(i) + "]", true, source.ambient_dim());
    std::vector<Integer> r;
    for (const auto& x : row) r.push_back(x.get_num());
    rows.push_back(std::move(r));
  }
  return ComplexMorphism(std::move(source), std::move(target), IntMatrix::from_rows(rows, source.ambient_dim()));
}

ReductionTrace trace_from_json(const Json& doc) {
  ReductionTrace trace;
  const Json& format = field(doc, "format", "");
  if (format != "ssr-trace/1") throw SchemaError("format: expected 'ssr-trace/1'");
  auto str = [&](const char* key) {
    const Json& v = field(doc, key, "");
    if (!v.is_string()) throw SchemaError(std::string(key) + ": expected a string");
    return v.get<std::string>();
  };
  trace.initial_digest = str("initial_digest");
  trace.final_digest = str("final_digest");
  std::string status = str("status");
  if (status != "complete" && status != "failed") throw SchemaError("status: expected 'complete' or 'failed'");
  trace.complete = status == "complete";
  if (doc.contains("failure")) {
    const Json& f = doc["failure"];
    TraceFailure failure;
    const Json& code = field(f, "exit_code", "failure");
    if (!code.is_number_integer()) throw SchemaError("failure.exit_code: expected an integer");
    failure.exit_code = code.get<int>();
    const Json& message = field(f, "message", "failure");
    if (!message.is_string()) throw SchemaError("failure.message: expected a string");
    failure.message = message.get<std::string>();
    trace.failure = failure;
  }
  trace.reduction_rounds = index_from(field(doc, "reduction_rounds", ""), "reduction_rounds");
  const Json& rounds = array_field(doc, "rounds", "");
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    std::string p = "rounds[" + std::to_string(i) + "]";
    RoundRecord r;
    r.round = index_from(field(rounds[i], "round", p), p + ".round");
    r.multiplicity_before = integer_from(field(rounds[i], "multiplicity_before", p), p + ".multiplicity_before");
    r.multiplicity_after = integer_from(field(rounds[i], "multiplicity_after", p), p + ".multiplicity_after");
    r.source_cones = index_from(field(rounds[i], "source_cones", p), p + ".source_cones");
    r.target_cones = index_from(field(rounds[i], "target_cones", p), p + ".target_cones");
    trace.rounds.push_back(r);
  }
  const Json& steps = array_field(doc, "steps", "");
  for (std::size_t i = 0; i < steps.size(); ++i) trace.steps.push_back(step_from(steps[i], "steps[" + std::to_string(i) + "]"));
  return trace;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_json_text(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

Complex read_complex(const std::filesystem::path& path) { return complex_from_json(read_json_file(path)); }

ComplexMorphism read_morphism(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_morphism_document(buffer.str(), path.parent_path());
}

ComplexMorphism parse_morphism_document(const std::string& text, const std::filesystem::path& base_dir) {
  ComplexMorphism f = morphism_from_json(parse_json_text(text), base_dir);
  std::vector<std::string> issues;
  for (auto& i : validate_complex(f.source()).issues) issues.push_back("source: " + i);
  for (auto& i : validate_complex(f.target()).issues) issues.push_back("target: " + i);
  if (issues.empty())
    for (auto& i : validate_morphism(f).issues) issues.push_back(i);
  if (!issues.empty()) throw ValidationError("invalid morphism: " + issues.front(), issues);
  return f;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[out[i] >> 4];
    s += hex[out[i] & 15];
  }
  return s;
}

std::string digest(const Complex& c) { return sha256_hex(to_json(c).dump()); }
std::string digest(const ComplexMorphism& f) { return sha256_hex(to_json(f).dump()); }

}  // namespace ssr
