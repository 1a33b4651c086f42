#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pickgrass/ball.hpp"
#include "pickgrass/coinvariant.hpp"
#include "pickgrass/drury_arveson.hpp"
#include "pickgrass/pick.hpp"
#include "pickgrass/quotient.hpp"
#include "pickgrass/spectra.hpp"
#include "pickgrass/types.hpp"

namespace pickgrass {

// ---- parsing ------------------------------------------------------------
// Every parser throws validation_error on syntactically broken input,
// missing or mistyped fields, and on values the constructed object rejects
// (points outside the ball, non-commuting matrices, ...).

// {"d": 2, "points": [{"coords": [[re,im],...], "mult": 1}, ...]}
Divisor parse_divisor(const std::string& text);

// {"n": 3, "d": 2, "matrices": [[[[re,im],...],...], ...]}  (d of them, n x n)
CommutingTuple parse_tuple(const std::string& text);

// {"d": 2, "N": 10, "terms": [{"alpha": [1,0], "coeff": [re,im]}, ...]}
TruncVec parse_truncvec(const std::string& text);

// {"d": 2, "degree": 2, "terms": [...], "distinguished": 0}  (axis optional)
HomogPoly parse_homog_poly(const std::string& text);

// {"d": 2, "groups": [{"point": [[re,im],...],
//                      "vectors": [[{"alpha": [...], "coeff": [re,im]},...],...]}]}
CoinvariantModel parse_model(const std::string& text);

// Divisor fields plus "targets": an array of scalars ([re,im] or plain
// numbers) or of square matrices (rows of [re,im] pairs), one per point.
// Multiplicities beyond 1 are rejected: nodes must be simple.
PickProblem parse_pick_problem(const std::string& text);

// Command-line form "re,im"; a bare "re" means imaginary part zero.
cplx parse_complex_pair(const std::string& text);

// ---- canonical emission --------------------------------------------------
// Reports must be byte-identical across runs on identical data, so all
// output goes through these helpers: fixed field order, no whitespace,
// every floating-point number printed with %.17g.

std::string format_real(double x);
std::string complex_json(cplx v);
std::string real_array_json(const std::vector<double>& xs);
std::string int_array_json(const std::vector<int>& xs);
std::string point_json(const Vec& z);

std::string divisor_json(const Divisor& X);
std::string model_json(const CoinvariantModel& m);

// Object writer preserving insertion order; values arrive pre-rendered.
class JsonObject {
 public:
  JsonObject& real(const std::string& key, double v);
  JsonObject& integer(const std::string& key, long long v);
  JsonObject& boolean(const std::string& key, bool v);
  JsonObject& text(const std::string& key, const std::string& v);
  JsonObject& field(const std::string& key, const std::string& raw_fragment);
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

}  // namespace pickgrass
