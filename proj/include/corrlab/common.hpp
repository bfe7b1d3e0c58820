#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace corrlab {

using cplx = std::complex<double>;

// Domain failures carry a stable machine-readable kind; tests assert on it and
// the CLI emits it as structured JSON on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& what) {
    throw Error(kind, what);
}

inline double sqr(double x) { return x * x; }

} // namespace corrlab
