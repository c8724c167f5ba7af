#ifndef PFB_ERRORS_HPP
#define PFB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pfb {

// Invalid or out-of-domain input (negative scale, pole crossed, d != 3 where required).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Integral provably divergent for the requested profile/exponent combination.
class divergence_error : public std::runtime_error {
public:
    explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

// Iterative scheme failed to reach its tolerance (quadrature, root search, ODE).
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pfb

#endif
