#pragma once

#include <cstddef>

#include "stlrisk/ext_real.hpp"
#include "stlrisk/formula.hpp"
#include "stlrisk/predicate.hpp"
#include "stlrisk/samples.hpp"
#include "stlrisk/trace.hpp"

namespace stlrisk {

/// Throws unless f can be evaluated at time t on a trace of the given shape:
/// Error(InsufficientHorizon) when a temporal window leaves [0, length-1],
/// Error(UnknownPredicate) / Error(Dimension) for unresolved or
/// ill-dimensioned predicates.
void check_admissible(const Formula& f, const PredicateTable& predicates, std::size_t length, std::size_t dim,
                      std::size_t t);

/// Boolean satisfaction; a predicate holds iff its signed distance is >= 0.
bool eval_boolean(const Formula& f, const PredicateTable& predicates, const Trace& x, std::size_t t);

/// Robust (quantitative) semantics. Until takes the sup over
/// t'' in (t + I) of min(rho_rhs(t''), inf over the open window (t, t'') of
/// rho_lhs), with sup {} = -inf and inf {} = +inf. Since mirrors it over
/// (t - I) with the open window (t'', t).
ExtReal eval_robust(const Formula& f, const PredicateTable& predicates, const Trace& x, std::size_t t);

/// Z^i = -rho(f, e[i], t), in ensemble order. Fails as a whole on any
/// member error. `threads` = 0 picks the hardware concurrency.
RobustnessSamples eval_robust_ensemble(const Formula& f, const PredicateTable& predicates, const Ensemble& e,
                                       std::size_t t, unsigned threads = 1);

}  // namespace stlrisk
