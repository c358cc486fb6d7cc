#include "pwd/profiles.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace pwd {

namespace {

void require_finite_nonneg(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
        throw DomainError(std::string("profile parameter ") + name +
                          " must be finite and non-negative");
}

}  // namespace

PrecisionProfile::PrecisionProfile(ProfileFamily family, double p0, double p1, double p2)
    : family_(family), p_{p0, p1, p2} {}

PrecisionProfile PrecisionProfile::constant_variance(double sigma2) {
    require_finite_nonneg(sigma2, "sigma2");
    return {ProfileFamily::ConstantVariance, sigma2, 0.0, 0.0};
}

PrecisionProfile PrecisionProfile::constant_cv(double kappa) {
    require_finite_nonneg(kappa, "kappa");
    return {ProfileFamily::ConstantCV, kappa, 0.0, 0.0};
}

PrecisionProfile PrecisionProfile::rocke_lorenzato(double sigma, double kappa) {
    require_finite_nonneg(sigma, "sigma");
    require_finite_nonneg(kappa, "kappa");
    return {ProfileFamily::RockeLorenzato, sigma, kappa, 0.0};
}

PrecisionProfile PrecisionProfile::linear_sd(double sigma, double kappa) {
    require_finite_nonneg(sigma, "sigma");
    require_finite_nonneg(kappa, "kappa");
    return {ProfileFamily::LinearSD, sigma, kappa, 0.0};
}

PrecisionProfile PrecisionProfile::power(double a, double b, double p) {
    require_finite_nonneg(a, "a");
    require_finite_nonneg(b, "b");
    if (a == 0.0 && b == 0.0) throw DomainError("Power profile: a and b cannot both be zero");
    if (!std::isfinite(p) || p <= 0.0) throw DomainError("Power profile: p must be positive");
    return {ProfileFamily::Power, a, b, p};
}

double PrecisionProfile::operator()(double mu) const {
    if (!std::isfinite(mu)) throw DomainError("profile evaluation: mu must be finite");
    switch (family_) {
        case ProfileFamily::ConstantVariance:
            return p_[0];
        case ProfileFamily::ConstantCV: {
            const double s = p_[0] * mu;
            return s * s;
        }
        case ProfileFamily::RockeLorenzato: {
            const double s = p_[1] * mu;
            return p_[0] * p_[0] + s * s;
        }
        case ProfileFamily::LinearSD: {
            const double s = p_[0] + p_[1] * mu;
            return s * s;
        }
        case ProfileFamily::Power:
            if (mu < 0.0) throw DomainError("Power profile: mu must be non-negative");
            if (mu == 0.0) return p_[0];
            return p_[0] + p_[1] * std::pow(mu, p_[2]);
    }
    throw DomainError("profile evaluation: unknown family");
}

PrecisionProfile PrecisionProfile::scaled(double lambda) const {
    if (!std::isfinite(lambda) || lambda <= 0.0)
        throw DomainError("profile scale: lambda must be positive and finite");
    const double r = std::sqrt(lambda);
    switch (family_) {
        case ProfileFamily::ConstantVariance:
            return {family_, lambda * p_[0], 0.0, 0.0};
        case ProfileFamily::ConstantCV:
            return {family_, r * p_[0], 0.0, 0.0};
        case ProfileFamily::RockeLorenzato:
        case ProfileFamily::LinearSD:
            return {family_, r * p_[0], r * p_[1], 0.0};
        case ProfileFamily::Power:
            return {family_, lambda * p_[0], lambda * p_[1], p_[2]};
    }
    throw DomainError("profile scale: unknown family");
}

double PrecisionProfile::param(int i) const { return p_[i]; }

int PrecisionProfile::param_count() const {
    switch (family_) {
        case ProfileFamily::ConstantVariance:
        case ProfileFamily::ConstantCV:
            return 1;
        case ProfileFamily::RockeLorenzato:
        case ProfileFamily::LinearSD:
            return 2;
        case ProfileFamily::Power:
            return 3;
    }
    return 0;
}

PrecisionProfile scale(const PrecisionProfile& profile, double lambda) {
    return profile.scaled(lambda);
}

std::string family_name(ProfileFamily family) {
    switch (family) {
        case ProfileFamily::ConstantVariance: return "constant_variance";
        case ProfileFamily::ConstantCV: return "constant_cv";
        case ProfileFamily::RockeLorenzato: return "rocke_lorenzato";
        case ProfileFamily::LinearSD: return "linear_sd";
        case ProfileFamily::Power: return "power";
    }
    return "unknown";
}

void to_json(nlohmann::json& j, const PrecisionProfile& profile) {
    nlohmann::json params;
    switch (profile.family()) {
        case ProfileFamily::ConstantVariance:
            params["sigma2"] = profile.param(0);
            break;
        case ProfileFamily::ConstantCV:
            params["kappa"] = profile.param(0);
            break;
        case ProfileFamily::RockeLorenzato:
        case ProfileFamily::LinearSD:
            params["sigma"] = profile.param(0);
            params["kappa"] = profile.param(1);
            break;
        case ProfileFamily::Power:
            params["a"] = profile.param(0);
            params["b"] = profile.param(1);
            params["p"] = profile.param(2);
            break;
    }
    j = nlohmann::json{{"family", family_name(profile.family())}, {"params", params}};
}

PrecisionProfile profile_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family") || !j.contains("params"))
        throw DataError("profile JSON must be an object with \"family\" and \"params\"");
    const std::string fam = j.at("family").get<std::string>();
    const nlohmann::json& p = j.at("params");
    auto get = [&](const char* name) {
        if (!p.contains(name) || !p.at(name).is_number())
            throw DataError(std::string("profile JSON: missing numeric parameter \"") + name +
                            "\" for family " + fam);
        return p.at(name).get<double>();
    };
    try {
        if (fam == "constant_variance") return PrecisionProfile::constant_variance(get("sigma2"));
        if (fam == "constant_cv") return PrecisionProfile::constant_cv(get("kappa"));
        if (fam == "rocke_lorenzato")
            return PrecisionProfile::rocke_lorenzato(get("sigma"), get("kappa"));
        if (fam == "linear_sd") return PrecisionProfile::linear_sd(get("sigma"), get("kappa"));
        if (fam == "power") return PrecisionProfile::power(get("a"), get("b"), get("p"));
    } catch (const DomainError& e) {
        throw DataError(std::string("profile JSON: ") + e.what());
    }
    throw DataError("profile JSON: unknown family \"" + fam + "\"");
}

void from_json(const nlohmann::json& j, PrecisionProfile& profile) {
    profile = profile_from_json(j);
}

}  // namespace pwd
