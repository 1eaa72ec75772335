#ifndef BHL_CONFIG_HPP
#define BHL_CONFIG_HPP

#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bhl/csv.hpp"
#include "bhl/errors.hpp"
#include "bhl/model.hpp"
#include "bhl/scan.hpp"

namespace bhl {

using nlohmann::json;

inline constexpr const char* tool_version = "0.1.0";

struct VerifyGrid {
    std::vector<int> linear_sizes{2, 3, 4};
    std::vector<int> cutoffs{4, 6};
    std::vector<double> repulsions{0.5, 1.0, 2.0};
    std::vector<double> chemical_potentials{-1.0, 0.0, 1.0};
    std::vector<double> symmetry_breakings{0.05, 0.2, 1.0};
    std::vector<double> inverse_temperatures{0.5, 1.0, 2.0};
    int relative_bound_samples = 100;
    std::vector<int> relative_bound_orders{1, 2, 5};
    int sector_norm_max = 6;
};

struct DensityScanConfig {
    std::vector<double> chemical_potentials{-1.0, 0.0, 1.0};
    double convergence_gate = 1e-8;
    int cutoff_start = 4;
    int cutoff_max = 20;
    double window_center = 0.0;
    std::vector<double> window_fractions{0.5, 0.25};
    int window_cutoff = 8;
};

struct ConvergenceScanConfig {
    std::vector<int> cutoffs{2, 3, 4, 5, 6, 7, 8, 9, 10};
    double tolerance = 1e-8;
};

struct KsumCase {
    int dimension = 1;
    std::vector<int> linear_sizes{8, 16, 32, 64};
    double second_moment = 1.0;
    double alpha = 1.0;
};

struct RunConfig {
    int dimension = 1;
    int linear_size = 2;
    std::vector<std::pair<Coords, std::complex<double>>> raw_hopping{
        {{1}, {-0.5, 0.0}}, {{-1}, {-0.5, 0.0}}};
    double repulsion = 1.0;
    double chemical_potential = 0.0;
    double symmetry_breaking = 0.2;
    double inverse_temperature = 1.0;

    CutoffPolicy cutoff;
    std::size_t dimension_cap = TruncatedBasis::default_dimension_cap;
    std::uint64_t seed = 20240901u;
    int jobs = 1;
    std::string output_dir = "out";

    VerifyGrid verify;
    CondensationScanConfig condensation;
    DensityScanConfig density_scan;
    ConvergenceScanConfig convergence_scan;
    std::vector<KsumCase> ksum_cases{{1, {8, 16, 32, 64}, 1.0, 1.0},
                                     {2, {16, 32, 64, 128, 256}, 1.0, 0.01}};

    std::string config_hash; // of the file contents, empty for built-in defaults

    LatticeSpec make_lattice(int dim, int n) const { return LatticeSpec(dim, n); }

    HoppingSpec make_hopping(const LatticeSpec& lattice) const {
        std::vector<std::pair<Coords, std::complex<double>>> fitted;
        for (const auto& [disp, amp] : raw_hopping) {
            if (static_cast<int>(disp.size()) != lattice.dimension())
                throw validation_error("hopping displacement dimension differs from lattice");
            fitted.emplace_back(disp, amp);
        }
        return HoppingSpec::build(lattice, fitted);
    }

    ModelSpec make_model() const {
        const LatticeSpec lat = make_lattice(dimension, linear_size);
        return ModelSpec(lat, make_hopping(lat), repulsion, chemical_potential, symmetry_breaking,
                         inverse_temperature);
    }

    ModelSpec make_grid_model(int n, double u, double mu, double lambda, double beta) const {
        const LatticeSpec lat = make_lattice(1, n);
        return ModelSpec(lat, make_hopping_for(lat), u, mu, lambda, beta);
    }

    HoppingSpec make_hopping_for(const LatticeSpec& lat) const {
        // re-canonicalize the raw displacements for this lattice; 1d grids use
        // the first component of each displacement
        std::vector<std::pair<Coords, std::complex<double>>> fitted;
        for (const auto& [disp, amp] : raw_hopping) {
            Coords cut(disp.begin(), disp.begin() + lat.dimension());
            fitted.emplace_back(cut, amp);
        }
        return HoppingSpec::build(lat, fitted);
    }

    void validate() const {
        if (!(repulsion > 0.0)) throw validation_error("config: repulsion U must be > 0");
        if (!(inverse_temperature > 0.0))
            throw validation_error("config: inverse temperature beta must be > 0");
        if (jobs < 1) throw validation_error("config: jobs must be >= 1");
        make_model(); // validates lattice + Hermitian hopping
        for (double u : verify.repulsions)
            if (!(u > 0.0)) throw validation_error("config: verify grid has U <= 0");
        for (double b : verify.inverse_temperatures)
            if (!(b > 0.0)) throw validation_error("config: verify grid has beta <= 0");
        // every implied dimension must fit under the cap (identities build M+2)
        for (int n : verify.linear_sizes)
            for (int m : verify.cutoffs)
                if (binomial(m + 2 + n, n) > dimension_cap)
                    throw validation_error("config: verify grid exceeds dimension cap");
    }
};

namespace detail {

inline Coords parse_displacement(const std::string& key) {
    Coords out;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ','))
        out.push_back(std::stoi(part));
    if (out.empty()) throw validation_error("empty hopping displacement key");
    return out;
}

template <typename T>
inline void read_into(const json& j, const char* key, T& value) {
    if (j.contains(key)) value = j.at(key).get<T>();
}

} // namespace detail

inline RunConfig parse_config(const json& j) {
    RunConfig cfg;
    if (j.contains("model")) {
        const json& m = j.at("model");
        detail::read_into(m, "dimension", cfg.dimension);
        detail::read_into(m, "linear_size", cfg.linear_size);
        detail::read_into(m, "repulsion", cfg.repulsion);
        detail::read_into(m, "chemical_potential", cfg.chemical_potential);
        detail::read_into(m, "symmetry_breaking", cfg.symmetry_breaking);
        detail::read_into(m, "inverse_temperature", cfg.inverse_temperature);
        if (m.contains("hopping")) {
            cfg.raw_hopping.clear();
            for (const auto& [key, value] : m.at("hopping").items()) {
                if (!value.is_array() || value.size() != 2)
                    throw validation_error("hopping amplitude must be [re, im]");
                cfg.raw_hopping.emplace_back(
                    detail::parse_displacement(key),
                    std::complex<double>(value.at(0).get<double>(), value.at(1).get<double>()));
            }
        }
    }
    if (j.contains("cutoff")) {
        const json& c = j.at("cutoff");
        const std::string mode = c.value("mode", "adaptive");
        if (mode == "fixed") {
            cfg.cutoff.adaptive = false;
            detail::read_into(c, "value", cfg.cutoff.fixed);
        } else if (mode == "adaptive") {
            cfg.cutoff.adaptive = true;
            detail::read_into(c, "tolerance", cfg.cutoff.tolerance);
            detail::read_into(c, "min", cfg.cutoff.min);
            detail::read_into(c, "max", cfg.cutoff.max);
        } else {
            throw validation_error("cutoff mode must be 'fixed' or 'adaptive'");
        }
    }
    {
        std::size_t cap = cfg.dimension_cap;
        detail::read_into(j, "dimension_cap", cap);
        cfg.dimension_cap = cap;
    }
    detail::read_into(j, "seed", cfg.seed);
    detail::read_into(j, "jobs", cfg.jobs);
    detail::read_into(j, "output_dir", cfg.output_dir);

    if (j.contains("verify")) {
        const json& v = j.at("verify");
        detail::read_into(v, "linear_sizes", cfg.verify.linear_sizes);
        detail::read_into(v, "cutoffs", cfg.verify.cutoffs);
        detail::read_into(v, "repulsions", cfg.verify.repulsions);
        detail::read_into(v, "chemical_potentials", cfg.verify.chemical_potentials);
        detail::read_into(v, "symmetry_breakings", cfg.verify.symmetry_breakings);
        detail::read_into(v, "inverse_temperatures", cfg.verify.inverse_temperatures);
        detail::read_into(v, "relative_bound_samples", cfg.verify.relative_bound_samples);
        detail::read_into(v, "relative_bound_orders", cfg.verify.relative_bound_orders);
        detail::read_into(v, "sector_norm_max", cfg.verify.sector_norm_max);
    }
    if (j.contains("scans")) {
        const json& s = j.at("scans");
        if (s.contains("condensation")) {
            const json& c = s.at("condensation");
            if (c.contains("linear_sizes")) {
                cfg.condensation.linear_sizes.clear();
                for (const auto& [key, value] : c.at("linear_sizes").items())
                    cfg.condensation.linear_sizes[std::stoi(key)] = value.get<std::vector<int>>();
            }
            detail::read_into(c, "symmetry_breakings", cfg.condensation.lambdas);
            detail::read_into(c, "hopping_amplitude", cfg.condensation.hopping_amplitude);
            detail::read_into(c, "repulsion", cfg.condensation.repulsion);
            detail::read_into(c, "chemical_potential", cfg.condensation.chemical_potential);
            detail::read_into(c, "beta", cfg.condensation.beta);
            if (c.contains("cutoff")) {
                const json& cc = c.at("cutoff");
                detail::read_into(cc, "tolerance", cfg.condensation.cutoff.tolerance);
                detail::read_into(cc, "min", cfg.condensation.cutoff.min);
                detail::read_into(cc, "max", cfg.condensation.cutoff.max);
            }
        }
        if (s.contains("density")) {
            const json& d = s.at("density");
            detail::read_into(d, "chemical_potentials", cfg.density_scan.chemical_potentials);
            detail::read_into(d, "convergence_gate", cfg.density_scan.convergence_gate);
            detail::read_into(d, "cutoff_start", cfg.density_scan.cutoff_start);
            detail::read_into(d, "cutoff_max", cfg.density_scan.cutoff_max);
            detail::read_into(d, "window_center", cfg.density_scan.window_center);
            detail::read_into(d, "window_fractions", cfg.density_scan.window_fractions);
            detail::read_into(d, "window_cutoff", cfg.density_scan.window_cutoff);
        }
        if (s.contains("convergence")) {
            const json& c = s.at("convergence");
            detail::read_into(c, "cutoffs", cfg.convergence_scan.cutoffs);
            detail::read_into(c, "tolerance", cfg.convergence_scan.tolerance);
        }
        if (s.contains("ksum")) {
            cfg.ksum_cases.clear();
            for (const json& c : s.at("ksum")) {
                KsumCase k;
                detail::read_into(c, "dimension", k.dimension);
                detail::read_into(c, "linear_sizes", k.linear_sizes);
                detail::read_into(c, "second_moment", k.second_moment);
                detail::read_into(c, "alpha", k.alpha);
                cfg.ksum_cases.push_back(k);
            }
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("config parse error: ") + e.what());
    }
    RunConfig cfg = parse_config(j);
    cfg.config_hash = fnv1a_hex(buf.str());
    return cfg;
}

// Per-check outcome of a verification run.
struct CheckResult {
    std::string name;
    std::string status; // pass / fail / inconclusive / skipped
    double min_slack = 0.0;
    std::size_t rows = 0;
    double seconds = 0.0;
};

struct SuiteResult {
    std::vector<CheckResult> checks;

    bool overall_pass() const {
        for (const auto& c : checks)
            if (c.status == "fail") return false;
        return true;
    }
};

} // namespace bhl

#endif
