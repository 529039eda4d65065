#ifndef MML_DIAG_HPP
#define MML_DIAG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mml {

struct SrcLoc {
    int line = 0;
    int col = 0;

    bool valid() const { return line > 0; }
    std::string to_string() const {
        return std::to_string(line) + ":" + std::to_string(col);
    }
};

/// A structured problem report from a checker pass. Checkers collect these
/// instead of aborting.
struct Diagnostic {
    std::string where;   // function/block/closure the problem is in
    std::string message;

    std::string to_string() const {
        return where.empty() ? message : where + ": " + message;
    }
};

using Diagnostics = std::vector<Diagnostic>;

/// Thrown by pipeline stages on malformed input. The CLI maps this to
/// exit code 3 with stage attribution.
class CompileError : public std::runtime_error {
public:
    CompileError(std::string stage, std::string msg, SrcLoc loc = {})
        : std::runtime_error(format(stage, msg, loc)),
          stage_(std::move(stage)), loc_(loc) {}

    const std::string& stage() const { return stage_; }
    SrcLoc loc() const { return loc_; }

private:
    static std::string format(const std::string& stage, const std::string& msg,
                              SrcLoc loc) {
        std::string s = stage + ": ";
        if (loc.valid()) s += loc.to_string() + ": ";
        return s + msg;
    }

    std::string stage_;
    SrcLoc loc_;
};

} // namespace mml

#endif
