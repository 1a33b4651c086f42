#include "pickgrass/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace pickgrass {

namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw validation_error("malformed JSON: parse failure");
  return j;
}

const json& need(const json& j, const char* key) {
  if (!j.is_object())
    throw validation_error(std::string("malformed JSON: expected an object with field \"") +
                           key + "\"");
  auto it = j.find(key);
  if (it == j.end())
    throw validation_error(std::string("malformed JSON: missing field \"") + key + "\"");
  return *it;
}

int need_int(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer())
    throw validation_error(std::string("malformed JSON: field \"") + key +
                           "\" must be an integer");
  return v.get<int>();
}

double to_real(const json& v, const char* what) {
  if (!v.is_number())
    throw validation_error(std::string("malformed JSON: ") + what + " must be a number");
  return v.get<double>();
}

cplx to_complex(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2)
    throw validation_error(std::string("malformed JSON: ") + what +
                           " must be a [re,im] pair");
  return {to_real(v[0], what), to_real(v[1], what)};
}

Vec to_point(const json& v, int d, const char* what) {
  if (!v.is_array() || static_cast<int>(v.size()) != d)
    throw validation_error(std::string("malformed JSON: ") + what + " must list " +
                           std::to_string(d) + " coordinates");
  Vec z(d);
  for (int i = 0; i < d; ++i) z(i) = to_complex(v[i], what);
  return z;
}

MultiIndex to_alpha(const json& v, int d) {
  if (!v.is_array() || static_cast<int>(v.size()) != d)
    throw validation_error("malformed JSON: \"alpha\" must list " + std::to_string(d) +
                           " exponents");
  std::vector<int> e(d);
  for (int i = 0; i < d; ++i) {
    if (!v[i].is_number_integer() || v[i].get<int>() < 0)
      throw validation_error("malformed JSON: exponents must be nonnegative integers");
    e[i] = v[i].get<int>();
  }
  return MultiIndex(e);
}

std::map<MultiIndex, cplx> to_terms(const json& v, int d) {
  if (!v.is_array())
    throw validation_error("malformed JSON: \"terms\" must be an array");
  std::map<MultiIndex, cplx> terms;
  for (const json& t : v) {
    MultiIndex a = to_alpha(need(t, "alpha"), d);
    cplx c = to_complex(need(t, "coeff"), "\"coeff\"");
    terms[a] += c;
  }
  return terms;
}

}  // namespace

Divisor parse_divisor(const std::string& text) {
  json j = parse_or_throw(text);
  int d = need_int(j, "d");
  if (d < 1) throw validation_error("malformed JSON: \"d\" must be >= 1");
  const json& pts = need(j, "points");
  if (!pts.is_array())
    throw validation_error("malformed JSON: \"points\" must be an array");
  std::vector<std::pair<BallPoint, int>> out;
  for (const json& p : pts) {
    Vec z = to_point(need(p, "coords"), d, "\"coords\"");
    int mult = need_int(p, "mult");
    out.emplace_back(BallPoint(z), mult);
  }
  return Divisor(d, std::move(out));
}

CommutingTuple parse_tuple(const std::string& text) {
  json j = parse_or_throw(text);
  int n = need_int(j, "n");
  int d = need_int(j, "d");
  if (n < 1 || d < 1)
    throw validation_error("malformed JSON: \"n\" and \"d\" must be >= 1");
  const json& ms = need(j, "matrices");
  if (!ms.is_array() || static_cast<int>(ms.size()) != d)
    throw validation_error("malformed JSON: \"matrices\" must list d matrices");
  std::vector<Mat> A;
  A.reserve(d);
  for (const json& mj : ms) {
    if (!mj.is_array() || static_cast<int>(mj.size()) != n)
      throw validation_error("malformed JSON: each matrix must have n rows");
    Mat m(n, n);
    for (int r = 0; r < n; ++r) {
      const json& row = mj[r];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw validation_error("malformed JSON: each matrix row must have n entries");
      for (int c = 0; c < n; ++c) m(r, c) = to_complex(row[c], "matrix entry");
    }
    A.push_back(std::move(m));
  }
  CommutingTuple t(std::move(A));
  if (t.commutation_defect() > 1e-10)
    throw validation_error("matrices do not commute (defect " +
                           format_real(t.commutation_defect()) + ")");
  return t;
}

TruncVec parse_truncvec(const std::string& text) {
  json j = parse_or_throw(text);
  int d = need_int(j, "d");
  int N = need_int(j, "N");
  if (d < 1 || N < 0)
    throw validation_error("malformed JSON: need \"d\" >= 1 and \"N\" >= 0");
  return TruncVec(d, N, to_terms(need(j, "terms"), d));
}

HomogPoly parse_homog_poly(const std::string& text) {
  json j = parse_or_throw(text);
  int d = need_int(j, "d");
  int degree = need_int(j, "degree");
  if (d < 1 || degree < 1)
    throw validation_error("malformed JSON: need \"d\" >= 1 and \"degree\" >= 1");
  int axis = -1;
  if (j.is_object() && j.find("distinguished") != j.end())
    axis = need_int(j, "distinguished");
  return HomogPoly(d, degree, to_terms(need(j, "terms"), d), axis);
}

CoinvariantModel parse_model(const std::string& text) {
  json j = parse_or_throw(text);
  int d = need_int(j, "d");
  if (d < 1) throw validation_error("malformed JSON: \"d\" must be >= 1");
  const json& gs = need(j, "groups");
  if (!gs.is_array())
    throw validation_error("malformed JSON: \"groups\" must be an array");
  std::vector<ModelGroup> groups;
  for (const json& gj : gs) {
    ModelGroup g{BallPoint(to_point(need(gj, "point"), d, "\"point\"")), {}};
    const json& vs = need(gj, "vectors");
    if (!vs.is_array() || vs.empty())
      throw validation_error("malformed JSON: each group needs a nonempty \"vectors\" array");
    for (const json& vj : vs) g.vectors.push_back(to_terms(vj, d));
    groups.push_back(std::move(g));
  }
  return make_model(d, std::move(groups));
}

PickProblem parse_pick_problem(const std::string& text) {
  json j = parse_or_throw(text);
  int d = need_int(j, "d");
  if (d < 1) throw validation_error("malformed JSON: \"d\" must be >= 1");
  const json& pts = need(j, "points");
  if (!pts.is_array())
    throw validation_error("malformed JSON: \"points\" must be an array");
  std::vector<BallPoint> points;
  for (const json& p : pts) {
    points.emplace_back(to_point(need(p, "coords"), d, "\"coords\""));
    if (p.is_object() && p.find("mult") != p.end() && need_int(p, "mult") != 1)
      throw validation_error("interpolation nodes must be simple (mult 1)");
  }
  const json& ts = need(j, "targets");
  if (!ts.is_array() || ts.size() != pts.size())
    throw validation_error("malformed JSON: need one target per point");
  if (ts.empty()) throw validation_error("malformed JSON: empty problem");

  auto is_scalar = [](const json& t) {
    return t.is_number() ||
           (t.is_array() && t.size() == 2 && t[0].is_number() && t[1].is_number());
  };
  if (is_scalar(ts[0])) {
    std::vector<cplx> targets;
    for (const json& t : ts) {
      if (t.is_number())
        targets.emplace_back(t.get<double>(), 0.0);
      else
        targets.push_back(to_complex(t, "target"));
    }
    return PickProblem(std::move(points), std::move(targets));
  }
  std::vector<Mat> targets;
  for (const json& t : ts) {
    if (!t.is_array() || t.empty())
      throw validation_error("malformed JSON: matrix target must be an array of rows");
    int r = static_cast<int>(t.size());
    Mat m(r, r);
    for (int i = 0; i < r; ++i) {
      const json& row = t[i];
      if (!row.is_array() || static_cast<int>(row.size()) != r)
        throw validation_error("malformed JSON: matrix targets must be square");
      for (int c = 0; c < r; ++c) m(i, c) = to_complex(row[c], "target entry");
    }
    targets.push_back(std::move(m));
  }
  return PickProblem(std::move(points), std::move(targets));
}

cplx parse_complex_pair(const std::string& text) {
  auto parse_part = [](const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    while (end != nullptr && (*end == ' ' || *end == '\t')) ++end;
    if (end == begin || end == nullptr || *end != '\0')
      throw validation_error("cannot parse \"" + s + "\" as a number");
    return v;
  };
  auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_part(text), 0.0};
  return {parse_part(text.substr(0, comma)), parse_part(text.substr(comma + 1))};
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string complex_json(cplx v) {
  return "[" + format_real(v.real()) + "," + format_real(v.imag()) + "]";
}

std::string real_array_json(const std::vector<double>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += format_real(xs[i]);
  }
  return s + "]";
}

std::string int_array_json(const std::vector<int>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(xs[i]);
  }
  return s + "]";
}

std::string point_json(const Vec& z) {
  std::string s = "[";
  for (int i = 0; i < z.size(); ++i) {
    if (i) s += ",";
    s += complex_json(z(i));
  }
  return s + "]";
}

std::string divisor_json(const Divisor& X) {
  std::string s = "{\"d\":" + std::to_string(X.dim()) + ",\"points\":[";
  bool first = true;
  for (const auto& [p, mult] : X.points()) {
    if (!first) s += ",";
    first = false;
    s += "{\"coords\":" + point_json(p.coords()) +
         ",\"mult\":" + std::to_string(mult) + "}";
  }
  return s + "]}";
}

namespace {

std::string terms_json(const std::map<MultiIndex, cplx>& terms) {
  std::string s = "[";
  bool first = true;
  for (const auto& [a, c] : terms) {
    if (!first) s += ",";
    first = false;
    s += "{\"alpha\":" + int_array_json(a.exponents()) +
         ",\"coeff\":" + complex_json(c) + "}";
  }
  return s + "]";
}

}  // namespace

std::string model_json(const CoinvariantModel& m) {
  std::string s = "{\"d\":" + std::to_string(m.d) + ",\"groups\":[";
  bool gfirst = true;
  for (const ModelGroup& g : m.groups) {
    if (!gfirst) s += ",";
    gfirst = false;
    s += "{\"point\":" + point_json(g.point.coords()) + ",\"vectors\":[";
    bool vfirst = true;
    for (const auto& v : g.vectors) {
      if (!vfirst) s += ",";
      vfirst = false;
      s += terms_json(v);
    }
    s += "]}";
  }
  return s + "]}";
}

JsonObject& JsonObject::real(const std::string& key, double v) {
  fields_.emplace_back(key, format_real(v));
  return *this;
}

JsonObject& JsonObject::integer(const std::string& key, long long v) {
  fields_.emplace_back(key, std::to_string(v));
  return *this;
}

JsonObject& JsonObject::boolean(const std::string& key, bool v) {
  fields_.emplace_back(key, v ? "true" : "false");
  return *this;
}

JsonObject& JsonObject::text(const std::string& key, const std::string& v) {
  std::string quoted = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') quoted += '\\';
    quoted += c;
  }
  fields_.emplace_back(key, quoted + "\"");
  return *this;
}

JsonObject& JsonObject::field(const std::string& key, const std::string& raw_fragment) {
  fields_.emplace_back(key, raw_fragment);
  return *this;
}

std::string JsonObject::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i) s += ",";
    s += "\"" + fields_[i].first + "\":" + fields_[i].second;
  }
  return s + "}";
}

}  // namespace pickgrass
