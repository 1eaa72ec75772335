#ifndef BHL_ERRORS_HPP
#define BHL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bhl {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid model/config input (non-Hermitian hopping, U <= 0, bad grids, ...).
struct validation_error : error {
    explicit validation_error(const std::string& msg) : error(msg) {}
};

// Basis or matrix size exceeds the configured cap.
struct dimension_error : error {
    explicit dimension_error(const std::string& msg) : error(msg) {}
};

// Operands live on different bases.
struct mismatch_error : error {
    explicit mismatch_error(const std::string& msg) : error(msg) {}
};

// Occupation state with total above the basis cutoff; callers use this to
// detect sector-boundary leakage.
struct out_of_truncation_error : error {
    explicit out_of_truncation_error(const std::string& msg) : error(msg) {}
};

// Site or displacement coordinates outside the lattice.
struct invalid_site_error : error {
    explicit invalid_site_error(const std::string& msg) : error(msg) {}
};

// Parameter combination outside an operation's domain (lambda = 0 in the
// chain inequality, inadmissible K in the spectral bound, ...).
struct domain_error : error {
    explicit domain_error(const std::string& msg) : error(msg) {}
};

} // namespace bhl

#endif
