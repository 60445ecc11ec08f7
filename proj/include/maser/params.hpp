#pragma once

#include <string>

namespace maser {

// Physical parameters of the atom maser plus the Fock-space truncation.
// phi is the accumulated Rabi angle (radians), n_ex the pump rate (atoms per
// unit time), nu the bath occupancy, n_max the highest retained photon
// number. tail_tol bounds the stationary mass allowed above n_max.
struct ModelParams {
    double phi = 0.0;
    double n_ex = 0.0;
    double nu = 0.0;
    int n_max = 0;
    double tail_tol = 1e-10;

    void validate() const; // throws DomainError on out-of-range fields
};

// Truncation level sized so that the stationary tail mass stays below
// ~1e-10 over the working phi range: 64 for n_ex = 16, 220 for n_ex = 150.
int default_n_max(double n_ex);

// Convenience constructor applying default_n_max.
ModelParams make_params(double phi, double n_ex, double nu, int n_max = 0,
                        double tail_tol = 1e-10);

// Strict JSON loading: keys phi, n_ex, nu, n_max (optional), tail_tol
// (optional); unknown keys are rejected with ConfigError.
ModelParams params_from_json_text(const std::string& text);
ModelParams params_from_json_file(const std::string& path);
std::string params_to_json_text(const ModelParams& p);

} // namespace maser
