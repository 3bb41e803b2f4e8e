#include "besov/io.hpp"

#include <fstream>
#include <sstream>

namespace besov {

namespace {

BigInt big_from_json(const Json& v, const std::string& key) {
  try {
    if (v.is_number_integer()) return BigInt(std::to_string(v.get<std::int64_t>()));
    if (v.is_number_unsigned()) return BigInt(std::to_string(v.get<std::uint64_t>()));
    if (v.is_string()) return BigInt(v.get<std::string>());
  } catch (const std::invalid_argument&) {
  }
  throw InvalidInput("coefficient of '" + key + "' must be integers or decimal strings");
}

Json big_to_json(const BigInt& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

}  // namespace

ExactPoly poly_from_json(const Json& j, std::size_t dimension_if_empty) {
  if (!j.is_object()) throw InvalidInput("polynomial literal must be a JSON object");
  if (j.empty()) return ExactPoly(dimension_if_empty);
  std::size_t dim = 0;
  ExactPoly f(MultiIndex::parse(j.begin().key()).size());
  for (const auto& [key, val] : j.items()) {
    MultiIndex beta = MultiIndex::parse(key);
    if (dim == 0) dim = beta.size();
    if (beta.size() != dim) throw InvalidInput("exponent '" + key + "' has inconsistent length");
    if (!val.is_array() || val.size() != 4)
      throw InvalidInput("coefficient of '" + key + "' must be [re_num, re_den, im_num, im_den]");
    Rational re = make_rational(big_from_json(val[0], key), big_from_json(val[1], key));
    Rational im = make_rational(big_from_json(val[2], key), big_from_json(val[3], key));
    f.add_term(beta, GaussianRational(re, im));
  }
  return f;
}

Json poly_to_json(const ExactPoly& f) {
  Json j = Json::object();
  for (const auto& [beta, c] : f.terms()) {
    j[beta.to_string()] = Json::array({big_to_json(c.re.get_num()), big_to_json(c.re.get_den()),
                                       big_to_json(c.im.get_num()), big_to_json(c.im.get_den())});
  }
  return j;
}

Json float_poly_to_json(const FloatPoly& f) {
  Json j = Json::object();
  for (const auto& [beta, c] : f.terms()) j[beta.to_string()] = Json::array({c.real(), c.imag()});
  return j;
}

Json load_json_arg(const std::string& text_or_path) {
  std::string text = text_or_path;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InvalidInput("empty JSON argument");
  if (text[first] != '{' && text[first] != '[') {
    std::ifstream in(text_or_path);
    if (!in) throw InvalidInput("cannot open '" + text_or_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("JSON parse error: ") + e.what());
  }
}

std::string to_string(const ExactPoly& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (const auto& [beta, c] : f.terms()) {
    if (!s.empty()) s += " + ";
    s += c.to_string();
    for (std::size_t i = 0; i < beta.size(); ++i) {
      if (beta[i] == 0) continue;
      s += "*z" + std::to_string(i + 1);
      if (beta[i] > 1) s += "^" + std::to_string(beta[i]);
    }
  }
  return s;
}

}  // namespace besov
