#ifndef MML_CPS_INTERP_HPP
#define MML_CPS_INTERP_HPP

#include "mml/cps.hpp"
#include "mml/interp.hpp"

namespace mml {

/// Direct evaluator for CPS programs. Continuations are first-class values
/// bound in the environment, so callcc-residuals and throws need no special
/// machinery. Used as the soundness oracle for cps_convert.
InterpResult interpret_cps(const CpsFun& entry, const InterpOptions& opts = {});

} // namespace mml

#endif
