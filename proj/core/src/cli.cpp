#include "mml/cli.hpp"

namespace mml {
int cli_main(int, char**) { return 2; } // filled in once the pipeline lands
} // namespace mml
