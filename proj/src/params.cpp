#include "maser/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "maser/errors.hpp"

namespace maser {

void ModelParams::validate() const {
    if (!(phi > 0.0) || !std::isfinite(phi))
        throw DomainError("ModelParams: phi must be positive");
    if (!(n_ex > 0.0) || !std::isfinite(n_ex))
        throw DomainError("ModelParams: n_ex must be positive");
    if (!(nu >= 0.0) || !std::isfinite(nu))
        throw DomainError("ModelParams: nu must be nonnegative");
    if (n_max < 8)
        throw DomainError("ModelParams: n_max must be at least 8");
    if (!(tail_tol > 0.0))
        throw DomainError("ModelParams: tail_tol must be positive");
}

int default_n_max(double n_ex) {
    return std::max(64, static_cast<int>(std::lround(1.4 * n_ex + 10.0)));
}

ModelParams make_params(double phi, double n_ex, double nu, int n_max,
                        double tail_tol) {
    ModelParams p;
    p.phi = phi;
    p.n_ex = n_ex;
    p.nu = nu;
    p.n_max = n_max > 0 ? n_max : default_n_max(n_ex);
    p.tail_tol = tail_tol;
    p.validate();
    return p;
}

namespace {

ModelParams params_from_json(const nlohmann::json& j) {
    static const char* known[] = {"phi", "n_ex", "nu", "n_max", "tail_tol"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw ConfigError("model params: unknown key '" + key + "'");
    }
    if (!j.contains("phi") || !j.contains("n_ex") || !j.contains("nu"))
        throw ConfigError("model params: phi, n_ex and nu are required");
    ModelParams p;
    p.phi = j.at("phi").get<double>();
    p.n_ex = j.at("n_ex").get<double>();
    p.nu = j.at("nu").get<double>();
    p.n_max = j.value("n_max", 0);
    if (p.n_max <= 0) p.n_max = default_n_max(p.n_ex);
    p.tail_tol = j.value("tail_tol", 1e-10);
    p.validate();
    return p;
}

} // namespace

ModelParams params_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model params: ") + e.what());
    }
    return params_from_json(j);
}

ModelParams params_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open params file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return params_from_json_text(ss.str());
}

std::string params_to_json_text(const ModelParams& p) {
    nlohmann::json j;
    j["phi"] = p.phi;
    j["n_ex"] = p.n_ex;
    j["nu"] = p.nu;
    j["n_max"] = p.n_max;
    j["tail_tol"] = p.tail_tol;
    return j.dump();
}

} // namespace maser
