#include "maser/generators.hpp"

#include <cassert>
#include <cmath>

#include "maser/errors.hpp"
#include "maser/stationary.hpp"

namespace maser {

void JumpOp::apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = size();
    assert(x.size() == n && y.size() == n);
    switch (src_offset) {
        case -1:
            y[0] = 0.0;
            for (std::size_t i = 1; i < n; ++i) y[i] = rate[i] * x[i - 1];
            break;
        case 0:
            for (std::size_t i = 0; i < n; ++i) y[i] = rate[i] * x[i];
            break;
        case 1:
            for (std::size_t i = 0; i + 1 < n; ++i) y[i] = rate[i] * x[i + 1];
            y[n - 1] = 0.0;
            break;
        default:
            throw DomainError("JumpOp: bad src_offset");
    }
}

std::vector<double> JumpOp::apply(std::span<const double> x) const {
    std::vector<double> y(size());
    apply(x, y);
    return y;
}

double JumpOp::intensity(std::span<const double> x) const {
    const std::size_t n = size();
    double s = 0.0;
    switch (src_offset) {
        case -1:
            for (std::size_t i = 1; i < n; ++i) s += rate[i] * x[i - 1];
            break;
        case 0:
            for (std::size_t i = 0; i < n; ++i) s += rate[i] * x[i];
            break;
        case 1:
            for (std::size_t i = 0; i + 1 < n; ++i) s += rate[i] * x[i + 1];
            break;
        default:
            throw DomainError("JumpOp: bad src_offset");
    }
    return s;
}

const JumpOp& GeneratorSet::jump(Channel c) const {
    switch (c) {
        case Channel::ground_atom: return j1;
        case Channel::excited_atom: return j2;
        case Channel::emission: return j3;
        case Channel::absorption: return j4;
    }
    throw DomainError("GeneratorSet: bad channel");
}

Tridiag GeneratorSet::survival(Channel c) const {
    Tridiag s = l_full;
    const std::size_t n = s.size();
    if (c == Channel::ground_atom) {
        // Remove the atom part of the up-flux; the bath part stays.
        for (std::size_t i = 1; i < n; ++i) s.sub[i] -= j1.rate[i];
    } else if (c == Channel::excited_atom) {
        for (std::size_t i = 0; i < n; ++i) s.diag[i] -= j2.rate[i];
    } else {
        throw DomainError("survival generator defined for atom channels only");
    }
    return s;
}

double birth_rate(const ModelParams& p, int k) {
    if (k >= p.n_max) return 0.0;
    const double s = std::sin(p.phi * std::sqrt(static_cast<double>(k + 1)));
    return p.n_ex * s * s + p.nu * static_cast<double>(k + 1);
}

double death_rate(const ModelParams& p, int k) {
    return (p.nu + 1.0) * static_cast<double>(k);
}

double atom_fraction_of_birth(const ModelParams& p, int k) {
    const double s = std::sin(p.phi * std::sqrt(static_cast<double>(k + 1)));
    const double atom = p.n_ex * s * s;
    const double total = atom + p.nu * static_cast<double>(k + 1);
    return total > 0.0 ? atom / total : 0.0;
}

double excited_intensity(const ModelParams& p, int k) {
    const double c = std::cos(p.phi * std::sqrt(static_cast<double>(k + 1)));
    return p.n_ex * c * c;
}

GeneratorSet build_generators(const ModelParams& p) {
    validate_truncation(p);
    const std::size_t n = static_cast<std::size_t>(p.n_max) + 1;

    GeneratorSet g;
    g.params = p;
    g.j1 = JumpOp{-1, std::vector<double>(n, 0.0)};
    g.j2 = JumpOp{0, std::vector<double>(n, 0.0)};
    g.j3 = JumpOp{1, std::vector<double>(n, 0.0)};
    g.j4 = JumpOp{-1, std::vector<double>(n, 0.0)};

    for (std::size_t i = 0; i < n; ++i) {
        const double lvl = static_cast<double>(i);
        const double sin_i = std::sin(p.phi * std::sqrt(lvl));
        const double cos_i1 = std::cos(p.phi * std::sqrt(lvl + 1.0));
        if (i >= 1) {
            g.j1.rate[i] = p.n_ex * sin_i * sin_i; // feed level i from i-1
            g.j4.rate[i] = p.nu * lvl;
        }
        g.j2.rate[i] = p.n_ex * cos_i1 * cos_i1;
        if (i + 1 < n) g.j3.rate[i] = (p.nu + 1.0) * (lvl + 1.0);
    }

    // Between-jump generator L0 = J3 + J4 - diag(total outflow). At the
    // truncation boundary the up-flux (channels 1 and 4) is dropped so that
    // l_full stays exactly conservative.
    g.l0 = Tridiag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lvl = static_cast<double>(i);
        g.l0.sub[i] = g.j4.rate[i];
        g.l0.sup[i] = g.j3.rate[i];
        double outflow = (p.nu + 1.0) * lvl; // emission
        if (i + 1 < n) {
            outflow += p.nu * (lvl + 1.0); // absorption
            outflow += p.n_ex;             // atom detection, either label
        } else {
            outflow += g.j2.rate[i]; // only the level-preserving atom channel
        }
        g.l0.diag[i] = -outflow;
    }

    g.l_full = g.l0;
    for (std::size_t i = 0; i < n; ++i) {
        g.l_full.sub[i] += g.j1.rate[i];
        g.l_full.diag[i] += g.j2.rate[i];
    }
    return g;
}

} // namespace maser
