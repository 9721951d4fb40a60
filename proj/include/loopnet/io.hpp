#pragma once

// JSON encodings for the library types. Doubles are written with round-trip
// precision.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "loopnet/emfield.hpp"
#include "loopnet/geometry.hpp"
#include "loopnet/loopgroup.hpp"
#include "loopnet/simplex.hpp"

namespace loopnet::io {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw FormatError(what);
}

/// Finite numbers as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
inline Json encode_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}
inline double decode_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  require(j.is_string(), "expected a number");
  const auto s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw FormatError("expected a number, got string '" + s + "'");
}

inline Json encode(const FourVector& v) { return Json::array({v[0], v[1], v[2], v[3]}); }
inline FourVector decode_vector(const Json& j) {
  require(j.is_array() && j.size() == 4, "four-vectors are arrays of 4 numbers");
  FourVector v;
  for (std::size_t i = 0; i < 4; ++i) {
    require(j[i].is_number(), "four-vector components must be numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

inline Json encode(const Eigen::Matrix4d& m) {
  Json out = Json::array();
  for (int i = 0; i < 4; ++i) out.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2), m(i, 3)}));
  return out;
}
inline Eigen::Matrix4d decode_matrix(const Json& j) {
  require(j.is_array() && j.size() == 4, "4x4 matrices are arrays of 4 rows");
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i) {
    require(j[i].is_array() && j[i].size() == 4, "matrix rows have 4 entries");
    for (int k = 0; k < 4; ++k) {
      require(j[i][k].is_number(), "matrix entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

inline Json encode(const PoincareElement& p) {
  return Json{{"translation", encode(p.translation)}, {"lorentz", encode(p.lorentz.matrix())}};
}
inline PoincareElement decode_poincare(const Json& j) {
  require(j.is_object(), "Poincare elements are objects");
  PoincareElement p;
  if (j.contains("translation")) p.translation = decode_vector(j.at("translation"));
  if (j.contains("lorentz")) {
    try {
      p.lorentz = LorentzMatrix::from_matrix(decode_matrix(j.at("lorentz")), 1e-9);
    } catch (const GeometryError& e) {
      throw FormatError(e.what());
    }
  }
  return p;
}

inline Json encode(const DoubleCone& o) {
  return Json{{"center", encode(o.center)}, {"radius", o.radius}, {"frame", encode(o.frame)}};
}
inline DoubleCone decode_cone(const Json& j) {
  require(j.is_object() && j.contains("center") && j.contains("radius"), "double cones need 'center' and 'radius'");
  require(j.at("radius").is_number(), "cone radius must be a number");
  try {
    return DoubleCone(decode_vector(j.at("center")), j.at("radius").get<double>(),
                      j.contains("frame") ? decode_poincare(j.at("frame")) : PoincareElement{});
  } catch (const GeometryError& e) {
    throw FormatError(e.what());
  }
}

inline Json encode(const TestFunctionTag& t) {
  Json out;
  out["kind"] = t.kind == TestFunctionKind::Bump ? "bump" : "gaussian";
  out["eps"] = t.eps;
  out["normalization"] = t.normalization;
  out["id"] = t.id;
  if (!t.lorentz.is_identity()) out["lorentz"] = encode(t.lorentz.matrix());
  return out;
}
inline TestFunctionTag decode_tag(const Json& j) {
  require(j.is_object(), "tags are objects");
  TestFunctionTag t;
  const auto kind = j.value("kind", std::string("gaussian"));
  require(kind == "bump" || kind == "gaussian", "tag kind must be 'bump' or 'gaussian'");
  t.kind = kind == "bump" ? TestFunctionKind::Bump : TestFunctionKind::Gaussian;
  t.eps = j.value("eps", t.eps);
  t.normalization = j.value("normalization", 1.0);
  t.id = j.value("id", kind);
  if (j.contains("lorentz")) {
    try {
      t.lorentz = LorentzMatrix::from_matrix(decode_matrix(j.at("lorentz")), 1e-9);
    } catch (const GeometryError& e) {
      throw FormatError(e.what());
    }
  }
  try {
    t.validate();
  } catch (const SimplexError& e) {
    throw FormatError(e.what());
  }
  return t;
}

inline Json encode(const Simplex& s) {
  Json out;
  out["n"] = s.dim();
  Json vs = Json::array();
  for (const auto& v : s.vertices) vs.push_back(encode(v));
  out["vertices"] = std::move(vs);
  out["tag"] = encode(s.tag);
  return out;
}
inline Simplex decode_simplex(const Json& j) {
  require(j.is_object() && j.contains("vertices") && j.contains("tag"), "simplices need 'vertices' and 'tag'");
  const auto& vs = j.at("vertices");
  require(vs.is_array() && !vs.empty() && vs.size() <= 4, "simplices have 1 to 4 vertices");
  std::vector<FourVector> v;
  for (const auto& x : vs) v.push_back(decode_vector(x));
  if (j.contains("n")) require(j.at("n").is_number_integer() && j.at("n").get<int>() + 1 == static_cast<int>(v.size()),
                               "'n' disagrees with the vertex count");
  return Simplex(std::move(v), decode_tag(j.at("tag")));
}

inline Json encode(const Chain<double>& c) {
  Json out = Json::array();
  for (const auto& [s, coef] : c.terms()) {
    Json term;
    term["coef"] = coef;
    term["simplex"] = encode(s);
    out.push_back(std::move(term));
  }
  return out;
}
inline Chain<double> decode_chain(const Json& j) {
  require(j.is_array(), "chains are arrays of terms");
  Chain<double> out;
  for (const auto& term : j) {
    require(term.is_object() && term.contains("coef") && term.at("coef").is_number_integer(),
            "chain terms need an integer 'coef'");
    out.add(decode_simplex(term.at("simplex")), term.at("coef").get<std::int64_t>());
  }
  return out;
}

inline Json encode(const Word& w) {
  Json out = Json::array();
  for (const auto& b : w.letters) {
    Json letter;
    letter["simplex"] = encode(b.segment());
    letter["inverted"] = b.inverted();
    out.push_back(std::move(letter));
  }
  return out;
}
inline Word decode_word(const Json& j) {
  require(j.is_array(), "words are arrays of letters");
  Word w;
  for (const auto& letter : j) {
    require(letter.is_object() && letter.contains("simplex"), "letters need a 'simplex'");
    w.letters.emplace_back(decode_simplex(letter.at("simplex")), letter.value("inverted", false));
  }
  return w;
}

inline Json encode(const Path& p) {
  Json out;
  out["kind"] = p.is_loop() ? "loop" : "path";
  out["source"] = encode(p.source());
  out["target"] = encode(p.target());
  out["tag"] = encode(p.tag());
  out["letters"] = encode(p.word());
  return out;
}
inline Path decode_path(const Json& j) {
  require(j.is_object() && j.contains("source") && j.contains("target") && j.contains("tag"),
          "paths need 'source', 'target' and 'tag'");
  try {
    return Path(decode_vector(j.at("source")), decode_vector(j.at("target")), decode_tag(j.at("tag")),
                decode_word(j.value("letters", Json::array())));
  } catch (const WordError& e) {
    throw FormatError(e.what());
  }
}

inline Json encode(const LoopWord& w) {
  Json out;
  out["kind"] = "loop_word";
  Json fs = Json::array();
  for (const auto& p : w.factors) fs.push_back(encode(p));
  out["factors"] = std::move(fs);
  return out;
}
inline LoopWord decode_loop_word(const Json& j) {
  require(j.is_object() && j.contains("factors") && j.at("factors").is_array(), "loop words need 'factors'");
  std::vector<Path> fs;
  for (const auto& f : j.at("factors")) fs.push_back(decode_path(f));
  try {
    return LoopWord(std::move(fs));
  } catch (const WordError& e) {
    throw FormatError(e.what());
  }
}

inline Json encode(const FieldModel& m) {
  Json out;
  out["kind"] = to_string(m.kind);
  switch (m.kind) {
    case FieldKind::Constant: out["C"] = encode(m.constant); break;
    case FieldKind::Linear: {
      out["C"] = encode(m.constant);
      Json d = Json::array();
      for (const auto& s : m.slope) d.push_back(encode(s));
      out["D"] = std::move(d);
      break;
    }
    case FieldKind::PlaneWave:
      out["amplitude"] = Json::array({m.amplitude(0), m.amplitude(1), m.amplitude(2), m.amplitude(3)});
      out["k"] = encode(m.wave_vector);
      out["phase"] = m.phase;
      break;
    default: {
      Json parts = Json::array();
      for (const auto& p : m.parts) parts.push_back(encode(p));
      out["parts"] = std::move(parts);
    }
  }
  return out;
}

inline FieldModel decode_model(const Json& j) {
  require(j.is_object() && j.contains("kind"), "field models need a 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant") return FieldModel::constant_field(decode_matrix(j.at("C")));
    if (kind == "linear") {
      const auto& d = j.at("D");
      require(d.is_array() && d.size() == 4, "'D' holds 4 matrices, one per derivative index");
      std::array<Eigen::Matrix4d, 4> slope;
      for (std::size_t r = 0; r < 4; ++r) slope[r] = decode_matrix(d[r]);
      return FieldModel::linear_field(decode_matrix(j.at("C")), slope);
    }
    if (kind == "plane_wave") {
      const FourVector a = decode_vector(j.at("amplitude"));
      return FieldModel::plane_wave(as_eigen(a), decode_vector(j.at("k")), j.value("phase", 0.0));
    }
    if (kind == "superposition") {
      std::vector<FieldModel> parts;
      for (const auto& p : j.at("parts")) parts.push_back(decode_model(p));
      return FieldModel::superposition(std::move(parts));
    }
  } catch (const FieldError& e) {
    throw FormatError(e.what());
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed field model: ") + e.what());
  }
  throw FormatError("unknown field model kind '" + kind + "'");
}

}  // namespace loopnet::io
