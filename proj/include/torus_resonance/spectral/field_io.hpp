#pragma once

// Field files:
//   {"box_radius": M, "real_tagged": bool, "modes": [[a, b, c, re, im], ...]}
// Modes are listed in lexicographic (a, b, c) order; omitted modes are zero.

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "torus_resonance/errors.hpp"
#include "torus_resonance/spectral/field.hpp"

namespace torus_resonance::spectral {

class FieldFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::ordered_json field_to_json(FourierField const& f) {
  nlohmann::ordered_json j;
  j["box_radius"] = f.box_radius();
  j["real_tagged"] = f.real_tagged();
  auto modes = nlohmann::ordered_json::array();
  f.for_each([&](ModeIndex const& m, complex v) {
    if (v == complex{}) return;
    modes.push_back({m.a, m.b, m.c, v.real(), v.imag()});
  });
  j["modes"] = std::move(modes);
  return j;
}

inline FourierField field_from_json(nlohmann::ordered_json const& j) {
  try {
    if (!j.is_object()) throw FieldFormatError("field file must hold a JSON object");
    auto const radius = j.at("box_radius").get<std::int64_t>();
    if (radius < 0) throw FieldFormatError("box_radius must be nonnegative");
    FourierField f(radius, j.value("real_tagged", false));
    ModeIndex previous{};
    bool first = true;
    for (auto const& entry : j.at("modes")) {
      if (!entry.is_array() || entry.size() != 5) throw FieldFormatError("each mode must be [a, b, c, re, im]");
      ModeIndex const m{entry[0].get<std::int64_t>(), entry[1].get<std::int64_t>(), entry[2].get<std::int64_t>()};
      if (!f.contains(m)) throw FieldFormatError("mode " + to_string(m) + " outside box_radius");
      if (!first && !(previous < m)) throw FieldFormatError("modes must be sorted lexicographically without repeats");
      f[m] = {entry[3].get<double>(), entry[4].get<double>()};
      previous = m;
      first = false;
    }
    return f;
  } catch (nlohmann::json::exception const& e) {
    throw FieldFormatError(std::string("malformed field file: ") + e.what());
  }
}

}  // namespace torus_resonance::spectral
