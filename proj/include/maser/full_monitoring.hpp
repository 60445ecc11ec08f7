#pragma once

#include <utility>

#include "maser/params.hpp"
#include "maser/record.hpp"

namespace maser {

// Complete-data log-likelihood of a 4-channel record: sum of log event
// rates at the pre-event level minus the integrated total outflow over the
// holding intervals. Throws FormatError on a label/path mismatch.
double full_monitoring_log_likelihood(const FullRecord& rec, const ModelParams& p);

struct FullMleResult {
    double phi_hat = 0.0;
    double observed_fisher = 0.0; // per record
    bool boundary = false;
};

// MLE of phi for the complete-data likelihood (dense scan plus golden
// section; the curve is cheap to evaluate) and the observed information at
// the maximum. Only the atom-label terms depend on phi, so the likelihood
// shape reduces to per-level detection counts.
FullMleResult full_monitoring_mle(const FullRecord& rec,
                                  std::pair<double, double> search, int n_max);

} // namespace maser
