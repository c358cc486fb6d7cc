#pragma once

// Precision-profile models g(mu): parametric functions mapping true
// concentration to measurement variance. Profiles are immutable values;
// scaling by a constant returns a new profile of the same family.

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pwd/errors.hpp"

namespace pwd {

enum class ProfileFamily {
    ConstantVariance,  // g(mu) = sigma2
    ConstantCV,        // g(mu) = (kappa*mu)^2
    RockeLorenzato,    // g(mu) = sigma^2 + (kappa*mu)^2
    LinearSD,          // g(mu) = (sigma + kappa*mu)^2
    Power,             // g(mu) = a + b*mu^p
};

class PrecisionProfile {
public:
    static PrecisionProfile constant_variance(double sigma2);
    static PrecisionProfile constant_cv(double kappa);
    static PrecisionProfile rocke_lorenzato(double sigma, double kappa);
    static PrecisionProfile linear_sd(double sigma, double kappa);
    static PrecisionProfile power(double a, double b, double p);

    ProfileFamily family() const { return family_; }

    // Variance at concentration mu. Throws DomainError for non-finite mu, and
    // for negative mu under the Power family (mu^p is undefined there).
    double operator()(double mu) const;

    // New profile evaluating to lambda * this(mu) for every mu.
    PrecisionProfile scaled(double lambda) const;

    // Family-specific parameters, in declaration order.
    double param(int i) const;
    int param_count() const;

    bool operator==(const PrecisionProfile&) const = default;

private:
    PrecisionProfile(ProfileFamily family, double p0, double p1, double p2);

    ProfileFamily family_;
    double p_[3];
};

// Free-function spellings of the two profile operations.
inline double evaluate(const PrecisionProfile& profile, double mu) { return profile(mu); }
PrecisionProfile scale(const PrecisionProfile& profile, double lambda);

std::string family_name(ProfileFamily family);

void to_json(nlohmann::json& j, const PrecisionProfile& profile);
void from_json(const nlohmann::json& j, PrecisionProfile& profile);
PrecisionProfile profile_from_json(const nlohmann::json& j);

}  // namespace pwd
