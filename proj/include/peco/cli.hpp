#pragma once

#include <iosfwd>

namespace peco {

/// `peco analyze|compare|synth ...`. Returns the process exit code:
/// 0 success, 1 usage error, 2 data/format error, 3 numerical failure.
/// Typed errors are reported on `err` as "<ErrorName>: <message>".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace peco
