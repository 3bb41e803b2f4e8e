#pragma once

#include <string>

#include <json.hpp>

#include "besov/sparse_poly.hpp"

namespace besov {

using Json = nlohmann::json;

/// Polynomial literal: {"e1,...,ed": [re_num, re_den, im_num, im_den], ...}.
/// Entries may be JSON integers or decimal strings (for big integers). The
/// dimension is taken from the exponent strings; an empty object needs an
/// explicit dimension.
ExactPoly poly_from_json(const Json& j, std::size_t dimension_if_empty = 1);
Json poly_to_json(const ExactPoly& f);

/// Float polynomial as {"e1,...,ed": [re, im]}.
Json float_poly_to_json(const FloatPoly& f);

/// Parses inline JSON text, or reads the file at that path if the text does
/// not start with '{' or '['.
Json load_json_arg(const std::string& text_or_path);

std::string to_string(const ExactPoly& f);

}  // namespace besov
