#include "mhdci/serialize.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mhdci {

namespace {

using nlohmann::json;

json vec3ToJson(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json mat3ToJson(const Mat3& m) {
  json a = json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a.push_back(m(i, j));
  return a;
}

Vec3 vec3FromJson(const json& j) {
  if (!j.is_array() || j.size() != 3) throw SchemaError("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Mat3 mat3FromJson(const json& j) {
  if (!j.is_array() || j.size() != 9) throw SchemaError("expected a 3x3 matrix");
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) m(i, k) = j[i * 3 + k].get<double>();
  return m;
}

json stateToJson(const State15& v) {
  return {{"u", vec3ToJson(v.u)},
          {"S", mat3ToJson(v.S)},
          {"B", vec3ToJson(v.B)},
          {"E", vec3ToJson(v.E)}};
}

State15 stateFromJson(const json& j) {
  if (!j.is_object()) throw SchemaError("state must be an object");
  for (const char* key : {"u", "S", "B", "E"})
    if (!j.contains(key)) throw SchemaError(std::string("state misses field ") + key);
  State15 v;
  v.u = vec3FromJson(j["u"]);
  v.S = mat3FromJson(j["S"]);
  v.B = vec3FromJson(j["B"]);
  v.E = vec3FromJson(j["E"]);
  return v;
}

json nodeToJson(const LaminateNode& n) {
  json j;
  j["state"] = stateToJson(n.state);
  if (!n.leaf()) {
    j["lambda"] = n.lambda;
    j["direction"] = stateToJson(n.direction);
    j["certificate"] = {{"xi_x", vec3ToJson(n.certificate.xiX)},
                        {"xi_t", n.certificate.xiT}};
    j["verdict"] = kindName(n.verdict.kind);
    j["plus"] = nodeToJson(*n.plus);
    j["minus"] = nodeToJson(*n.minus);
  }
  return j;
}

std::unique_ptr<LaminateNode> nodeFromJson(const json& j) {
  if (!j.is_object() || !j.contains("state")) throw SchemaError("node misses state");
  State15 v = stateFromJson(j["state"]);
  if (!j.contains("plus")) return makeLeaf(v);
  for (const char* key : {"lambda", "direction", "certificate", "minus"})
    if (!j.contains(key)) throw SchemaError(std::string("split misses field ") + key);
  const json& cj = j["certificate"];
  if (!cj.contains("xi_x") || !cj.contains("xi_t"))
    throw SchemaError("certificate misses xi_x or xi_t");
  WaveVector cert{vec3FromJson(cj["xi_x"]), cj["xi_t"].get<double>()};
  // makeSplit re-checks the endpoints, membership in M and the cone
  // conditions, and recomputes the verdict
  return makeSplit(v, j["lambda"].get<double>(), stateFromJson(j["direction"]), cert,
                   nodeFromJson(j["plus"]), nodeFromJson(j["minus"]));
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaError("malformed JSON");
  return j;
}

}  // namespace

std::string laminateToJson(const Laminate& lam) {
  json j;
  j["format"] = "laminate/1";
  json atoms = json::array();
  for (const Atom& a : lam.atoms())
    atoms.push_back({{"weight", a.weight}, {"state", stateToJson(a.state)}});
  j["atoms"] = atoms;
  if (lam.root) j["tree"] = nodeToJson(*lam.root);
  return j.dump(2);
}

Laminate laminateFromJson(const std::string& text) {
  json j = parse(text);
  if (!j.is_object() || j.value("format", "") != std::string("laminate/1"))
    throw SchemaError("not a laminate/1 document");
  if (!j.contains("tree")) throw SchemaError("laminate misses tree");
  Laminate lam{nodeFromJson(j["tree"])};
  if (j.contains("atoms")) {
    auto got = lam.atoms();
    const json& want = j["atoms"];
    if (!want.is_array() || want.size() != got.size())
      throw SchemaError("atom list does not match the tree");
    for (std::size_t i = 0; i < got.size(); ++i) {
      double w = want[i].value("weight", -1.0);
      State15 s = stateFromJson(want[i].at("state"));
      if (std::abs(w - got[i].weight) > 1e-12 ||
          norm(s - got[i].state) > 1e-9 * (1.0 + norm(s)))
        throw SchemaError("atom list does not match the tree");
    }
  }
  return lam;
}

void writeLaminate(const std::string& path, const Laminate& lam) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << laminateToJson(lam) << "\n";
}

Laminate readLaminate(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return laminateFromJson(ss.str());
}

void writeField(const std::string& path, const VecField3& F) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  for (const std::vector<double>* c : {&F.x, &F.y, &F.z})
    f.write(reinterpret_cast<const char*>(c->data()),
            std::streamsize(c->size() * sizeof(double)));
  json meta = {{"format", "field3/1"},
               {"n", F.n},
               {"components", {"x", "y", "z"}},
               {"dtype", "float64-le"},
               {"domain", "torus-2pi"}};
  std::ofstream mf(path + ".json");
  mf << meta.dump(2) << "\n";
}

VecField3 readField(const std::string& path) {
  std::ifstream mf(path + ".json");
  if (!mf) throw std::runtime_error("cannot open " + path + ".json");
  std::stringstream ss;
  ss << mf.rdbuf();
  json meta = parse(ss.str());
  if (meta.value("format", "") != std::string("field3/1"))
    throw SchemaError("not a field3/1 sidecar");
  int n = meta.value("n", 0);
  if (n <= 0) throw SchemaError("bad grid size in sidecar");
  VecField3 F = VecField3::zeros(n);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  for (std::vector<double>* c : {&F.x, &F.y, &F.z}) {
    f.read(reinterpret_cast<char*>(c->data()),
           std::streamsize(c->size() * sizeof(double)));
    if (!f) throw SchemaError("field file truncated");
  }
  return F;
}

void writeCsv(const std::string& path, const std::vector<std::string>& columns,
              const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    f << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  f.precision(17);
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::invalid_argument("row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i)
      f << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
}

}  // namespace mhdci
