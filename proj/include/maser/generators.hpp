#pragma once

#include <span>
#include <vector>

#include "maser/params.hpp"
#include "maser/tridiag.hpp"

namespace maser {

// Detection channels, numbered as in the record labels.
enum class Channel : int {
    ground_atom = 1,  // atom detected in the ground state (photon gained)
    excited_atom = 2, // atom detected in the excited state (photon count kept)
    emission = 3,     // photon emitted into the bath
    absorption = 4,   // photon absorbed from the bath
};

// Diagonal-sector action of a jump superoperator: (J x)[n] = rate[n] *
// x[n + src_offset]. src_offset is -1 for up-jumps (level n fed from n-1),
// 0 for level-preserving jumps and +1 for down-jumps.
struct JumpOp {
    int src_offset = 0;
    std::vector<double> rate;

    std::size_t size() const { return rate.size(); }
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    // 1^T J x: total intensity of this channel in state x.
    double intensity(std::span<const double> x) const;
};

// All generators of the model restricted to diagonal states. l_full is the
// master generator (exactly trace preserving on the truncated space: the
// birth rate out of n_max is dropped), l0 generates the evolution between
// atom detections, and l_full = l0 + j1 + j2 entry by entry.
struct GeneratorSet {
    ModelParams params;
    JumpOp j1, j2, j3, j4;
    Tridiag l0, l_full;

    const JumpOp& jump(Channel c) const;
    // Survival generator L - J_c for the atom channels (waiting times).
    Tridiag survival(Channel c) const;
};

// Birth/death rates of the cavity process, Fock level k.
double birth_rate(const ModelParams& p, int k);          // k -> k+1
double death_rate(const ModelParams& p, int k);          // k -> k-1
double atom_fraction_of_birth(const ModelParams& p, int k); // P(up-jump at k is an atom)
double excited_intensity(const ModelParams& p, int k);   // excited-atom Poisson rate at k

// Builds the full generator set; validates the parameters and the
// truncation (stationary tail mass above n_max must stay below tail_tol).
GeneratorSet build_generators(const ModelParams& p);

} // namespace maser
