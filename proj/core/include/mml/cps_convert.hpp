#ifndef MML_CPS_CONVERT_HPP
#define MML_CPS_CONVERT_HPP

#include "mml/cps.hpp"

namespace mml {

/// One-pass CPS conversion in the Danvy-Filinski style: the converter is
/// driven by a meta-level continuation, so no administrative beta-redexes
/// appear in the output. The whole program becomes a single entry function
/// whose return continuation is supplied by the runtime.
///
/// `counter` continues the frontend's fresh-name counter.
CpsFun cps_convert(const Expr& alpha_renamed, uint64_t& counter);

} // namespace mml

#endif
