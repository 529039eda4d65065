#ifndef MML_TESTS_PLOTKIN_HPP
#define MML_TESTS_PLOTKIN_HPP

#include "mml/cps.hpp"

namespace mml::testsupport {

/// Naive Plotkin-style CPS transform: every evaluation context gets its own
/// continuation binder, marked administrative. Deliberately independent of
/// the production converter so the two can be compared.
CpsFun plotkin_cps(const Expr& alpha_renamed, uint64_t& counter);

/// Beta/eta-normalizes administrative continuations: linear administrative
/// binders are inlined at their single application site and eta-shaped ones
/// are renamed away. The classic result is that this agrees with the
/// one-pass converter up to alpha equivalence.
void normalize_administrative(CpsFun& f);

} // namespace mml::testsupport

#endif
