#ifndef MML_CLI_HPP
#define MML_CLI_HPP

namespace mml {

/// Entry point for the mmlc command-line tool. Exit codes:
///   0 success, 1 runtime trap, 2 usage error, 3 compile diagnostic.
int cli_main(int argc, char** argv);

} // namespace mml

#endif
