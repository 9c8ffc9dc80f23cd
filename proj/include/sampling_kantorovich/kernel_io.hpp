#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "kernel.hpp"
#include "kernel_builder.hpp"

// Kernel definition files (UTF-8 JSON):
//
//   {"type": "bspline", "name": "bspline3", "order": 3}
//   {"type": "classical", "name": "jackson2", "which": "jackson", "params": {"k": 2, "alpha": 1.0}}
//   {"type": "spline_combination", "name": "chi2", "order": 2,
//    "terms": [{"coef": 3.0, "shift": 2.0, "spline_order": 2}, ...]}
//
// Doubles are written with round-trip precision, so spline combinations read
// back bit-identical.

namespace sampling {

inline std::string to_string(classical_family f)
{
    switch (f) {
    case classical_family::fejer: return "fejer";
    case classical_family::vallee_poussin: return "vallee_poussin";
    case classical_family::sinc_product: return "sinc_product";
    case classical_family::jackson: return "jackson";
    }
    return "unknown";
}

inline classical_family classical_family_from_string(const std::string& s)
{
    if (s == "fejer")
        return classical_family::fejer;
    if (s == "vallee_poussin")
        return classical_family::vallee_poussin;
    if (s == "sinc_product")
        return classical_family::sinc_product;
    if (s == "jackson")
        return classical_family::jackson;
    throw error(errc::parse_error, "unknown classical kernel '" + s + "'");
}

inline nlohmann::json kernel_to_json(const kernel& chi)
{
    nlohmann::json j;
    j["name"] = chi.name();
    const auto& src = chi.source();
    if (const auto* b = std::get_if<bspline_spec>(&src)) {
        j["type"] = "bspline";
        j["order"] = b->order;
    } else if (const auto* c = std::get_if<classical_spec>(&src)) {
        j["type"] = "classical";
        j["which"] = to_string(c->which);
        j["params"] = nlohmann::json::object();
        if (c->which == classical_family::jackson) {
            j["params"]["k"] = c->jackson_k;
            j["params"]["alpha"] = c->jackson_alpha;
        }
    } else if (const auto* s = std::get_if<combination_spec>(&src)) {
        j["type"] = "spline_combination";
        j["order"] = s->order;
        auto terms = nlohmann::json::array();
        for (const auto& t : s->terms)
            terms.push_back({{"coef", t.coef}, {"shift", t.shift}, {"spline_order", t.spline_order}});
        j["terms"] = std::move(terms);
    } else {
        throw error(errc::invalid_parameter, "kernel '" + chi.name() + "' has no serializable definition");
    }
    return j;
}

inline kernel kernel_from_json(const nlohmann::json& j)
{
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "bspline") {
            auto k = make_bspline_kernel(j.at("order").get<int>());
            return j.contains("name") ? k.renamed(j["name"].get<std::string>()) : k;
        }
        if (type == "classical") {
            classical_spec spec;
            spec.which = classical_family_from_string(j.at("which").get<std::string>());
            if (j.contains("params")) {
                const auto& p = j["params"];
                spec.jackson_k = p.value("k", 1);
                spec.jackson_alpha = p.value("alpha", 1.0);
            }
            auto k = make_classical_kernel(spec);
            return j.contains("name") ? k.renamed(j["name"].get<std::string>()) : k;
        }
        if (type == "spline_combination") {
            std::vector<spline_term> terms;
            for (const auto& t : j.at("terms"))
                terms.push_back({t.at("coef").get<double>(), t.at("shift").get<double>(),
                                 t.at("spline_order").get<int>()});
            return make_spline_combination(j.value("name", std::string("spline_combination")), std::move(terms));
        }
        throw error(errc::parse_error, "unknown kernel type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, e.what());
    }
}

inline std::string kernel_to_string(const kernel& chi) { return kernel_to_json(chi).dump(2) + "\n"; }

inline kernel kernel_from_string(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, e.what());
    }
    return kernel_from_json(j);
}

inline void save_kernel(const kernel& chi, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw error(errc::parse_error, "cannot open '" + path + "' for writing");
    out << kernel_to_string(chi);
    if (!out)
        throw error(errc::parse_error, "failed writing '" + path + "'");
}

inline kernel load_kernel(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw error(errc::parse_error, "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return kernel_from_string(buf.str());
}

/// Built-in kernels: bspline1..bspline12, fejer, vallee_poussin, sinc_product,
/// jackson<k> (alpha = 1), and chi2 = 3 M_2(x-2) - 2 M_2(x-3).
inline kernel named_kernel(const std::string& name)
{
    const auto numeric_suffix = [&](const std::string& prefix) -> std::optional<int> {
        if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size())
            return std::nullopt;
        const auto rest = name.substr(prefix.size());
        if (rest.find_first_not_of("0123456789") != std::string::npos || rest.size() > 3)
            return std::nullopt;
        return std::stoi(rest);
    };
    if (auto n = numeric_suffix("bspline"))
        return make_bspline_kernel(*n);
    if (auto k = numeric_suffix("jackson"))
        return make_classical_kernel({classical_family::jackson, *k, 1.0});
    if (name == "jackson")
        return make_classical_kernel({classical_family::jackson, 1, 1.0});
    if (name == "fejer" || name == "vallee_poussin" || name == "sinc_product")
        return make_classical_kernel({classical_family_from_string(name), 1, 1.0});
    if (name == "chi2")
        return build_matched_kernel(2, {2.0, 3.0}, "chi2").as_kernel();
    throw error(errc::invalid_parameter, "unknown kernel '" + name + "'");
}

inline std::vector<std::string> builtin_kernel_names()
{
    return {"bspline1", "bspline2", "bspline3", "bspline4", "bspline5", "fejer",
            "vallee_poussin", "sinc_product", "jackson1", "jackson2", "chi2"};
}

} // namespace sampling
