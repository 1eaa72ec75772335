#ifndef BHL_MODEL_HPP
#define BHL_MODEL_HPP

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bhl/errors.hpp"
#include "bhl/lattice.hpp"

namespace bhl {

// Translationally invariant hopping t_{x, x(+)z} = amp(z).  Displacements are
// canonicalized into {0,...,N-1}^d, so inputs like +1 and -1 collapse to the
// same key on an N=2 ring and must then agree.  Hermiticity t(-z) = conj(t(z))
// is validated at construction.
class HoppingSpec {
public:
    using Amplitude = std::complex<double>;

    HoppingSpec() = default;

    static HoppingSpec build(const LatticeSpec& lattice,
                             const std::vector<std::pair<Coords, Amplitude>>& raw) {
        HoppingSpec h;
        const int n = lattice.linear_size();
        for (const auto& [disp, amp] : raw) {
            if (static_cast<int>(disp.size()) != lattice.dimension())
                throw validation_error("hopping displacement has wrong dimension");
            Coords canon(disp.size());
            for (std::size_t a = 0; a < disp.size(); ++a)
                canon[a] = ((disp[a] % n) + n) % n;
            const int key = lattice.index_of(canon);
            const auto it = h.amplitudes_.find(key);
            if (it != h.amplitudes_.end()) {
                if (std::abs(it->second - amp) > 1e-14)
                    throw validation_error("conflicting amplitudes for one canonical displacement");
            } else if (std::abs(amp) > 0.0) {
                h.amplitudes_.emplace(key, amp);
            }
        }
        h.validate(lattice);
        h.derive_constants(lattice);
        return h;
    }

    static HoppingSpec none(const LatticeSpec& lattice) { return build(lattice, {}); }

    // Nearest-neighbor hopping with real amplitude t along every axis.
    static HoppingSpec nearest_neighbor(const LatticeSpec& lattice, double t) {
        std::vector<std::pair<Coords, Amplitude>> raw;
        for (int a = 0; a < lattice.dimension(); ++a) {
            Coords plus(static_cast<std::size_t>(lattice.dimension()), 0);
            Coords minus(static_cast<std::size_t>(lattice.dimension()), 0);
            plus[static_cast<std::size_t>(a)] = 1;
            minus[static_cast<std::size_t>(a)] = -1;
            raw.emplace_back(plus, Amplitude(t, 0.0));
            raw.emplace_back(minus, Amplitude(t, 0.0));
        }
        return build(lattice, raw);
    }

    const std::map<int, Amplitude>& amplitudes() const { return amplitudes_; }

    Amplitude at(int displacement_index) const {
        const auto it = amplitudes_.find(displacement_index);
        return it == amplitudes_.end() ? Amplitude(0.0, 0.0) : it->second;
    }

    Amplitude onsite() const { return at(0); }

    bool empty() const { return amplitudes_.empty(); }

    // max_x sum_y |t_xy| = sum_z |amp(z)|
    double coupling_bound() const { return coupling_bound_; }
    // |t(0)|
    double onsite_bound() const { return onsite_bound_; }
    // sum_z |amp(z)| |z|^2 with |z| from the minimal image
    double second_moment() const { return second_moment_; }

private:
    void validate(const LatticeSpec& lattice) const {
        const int n = lattice.linear_size();
        for (const auto& [key, amp] : amplitudes_) {
            Coords z = lattice.site(key);
            Coords neg(z.size());
            for (std::size_t a = 0; a < z.size(); ++a)
                neg[a] = (n - z[a]) % n;
            const Amplitude mirror = at(lattice.index_of(neg));
            if (std::abs(mirror - std::conj(amp)) > 1e-14)
                throw validation_error("hopping is not Hermitian: t(-z) != conj(t(z))");
        }
    }

    void derive_constants(const LatticeSpec& lattice) {
        coupling_bound_ = 0.0;
        second_moment_ = 0.0;
        onsite_bound_ = std::abs(onsite());
        for (const auto& [key, amp] : amplitudes_) {
            coupling_bound_ += std::abs(amp);
            second_moment_ += std::abs(amp) * minimal_image_norm_sq(lattice, lattice.site(key));
        }
    }

    std::map<int, Amplitude> amplitudes_;
    double coupling_bound_ = 0.0;
    double onsite_bound_ = 0.0;
    double second_moment_ = 0.0;
};

// Grand canonical Bose-Hubbard model: H = U N2 + T - mu N + lambda L.
struct ModelSpec {
    LatticeSpec lattice;
    HoppingSpec hopping;
    double repulsion = 1.0;          // U > 0
    double chemical_potential = 0.0; // mu
    double symmetry_breaking = 0.0;  // lambda
    double inverse_temperature = 1.0; // beta > 0

    ModelSpec(LatticeSpec lat, HoppingSpec hop, double u, double mu, double lambda, double beta)
        : lattice(std::move(lat)), hopping(std::move(hop)), repulsion(u),
          chemical_potential(mu), symmetry_breaking(lambda), inverse_temperature(beta) {
        validate();
    }

    void validate() const {
        if (!(repulsion > 0.0))
            throw validation_error("on-site repulsion U must be > 0");
        if (!(inverse_temperature > 0.0))
            throw validation_error("inverse temperature beta must be > 0");
    }

    ModelSpec with(double u, double mu, double lambda, double beta) const {
        return ModelSpec(lattice, hopping, u, mu, lambda, beta);
    }

    ModelSpec with_symmetry_breaking(double lambda) const {
        return with(repulsion, chemical_potential, lambda, inverse_temperature);
    }

    ModelSpec with_chemical_potential(double mu) const {
        return with(repulsion, mu, symmetry_breaking, inverse_temperature);
    }
};

} // namespace bhl

#endif
