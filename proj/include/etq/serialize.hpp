#pragma once

// JSON form of a QSeries:
//   {"offset_num": mu, "offset_den": 24, "N": N,
//    "coeffs": [[[doubled_exp, re_num, re_den, im_num, im_den], ...], ...]}
// Rational parts are decimal strings so arbitrarily large values round-trip.

#include <json.hpp>

#include "etq/qseries.hpp"

namespace etq {

inline nlohmann::json term_to_json(int exp2, const ExactScalar& c) {
    return nlohmann::json::array({exp2, c.re().get_num().get_str(), c.re().get_den().get_str(),
                                  c.im().get_num().get_str(), c.im().get_den().get_str()});
}

inline ExactScalar term_scalar_from_json(const nlohmann::json& t) {
    auto q = [](const nlohmann::json& n, const nlohmann::json& d) {
        mpq_class v(mpz_class(n.get<std::string>()), mpz_class(d.get<std::string>()));
        v.canonicalize();
        return v;
    };
    return ExactScalar(q(t.at(1), t.at(2)), q(t.at(3), t.at(4)));
}

inline nlohmann::json to_json(const QSeries& s) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int k = 0; k <= s.order(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& t : s[k].terms()) row.push_back(term_to_json(t.exp2, t.coeff));
        coeffs.push_back(std::move(row));
    }
    return {{"offset_num", s.offset24()}, {"offset_den", 24}, {"N", s.order()}, {"coeffs", std::move(coeffs)}};
}

inline QSeries qseries_from_json(const nlohmann::json& j) {
    if (j.at("offset_den").get<long>() != 24) throw Error("QSeries JSON: offset_den must be 24");
    QSeries s(j.at("N").get<int>(), j.at("offset_num").get<long>());
    const auto& coeffs = j.at("coeffs");
    if (static_cast<int>(coeffs.size()) != s.order() + 1) throw Error("QSeries JSON: coefficient count mismatch");
    for (int k = 0; k <= s.order(); ++k) {
        std::vector<ZetaTerm> ts;
        for (const auto& t : coeffs[k]) ts.push_back({t.at(0).get<int>(), term_scalar_from_json(t)});
        s.at(k) = ZetaPoly::from_terms(std::move(ts));
    }
    return s;
}

}  // namespace etq
