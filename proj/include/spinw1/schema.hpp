// schema.hpp — the external JSON schema: Hamiltonian term lists, state
// specifications, geometries, and whole system descriptions.
//
// System document:
//   { "n": 4, "q": 2,
//     "geometry": {"type": "chain" | "grid2d" | "matrix", ...},
//     "hamiltonian": [ {"sites": [0,1], "pauli": "ZZ", "coeff": 1.0},
//                      {"sites": [2], "matrix": [[re,im], ...], "coeff": 0.5} ],
//     "state":  {"type": "gibbs", "beta": 0.5},
//     "state2": {"type": "basis", "string": "0000"},
//     "family": {"type": "chain_template", "bond": [term...], "site": [term...]},
//     "params": {...} }
#pragma once

#include "spinw1/geometry.hpp"
#include "spinw1/observable.hpp"
#include "spinw1/states.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace spinw1 {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Term list -> observable. Pauli strings expand over non-identity letters;
// explicit matrices are trace-stripped into the identity offset. Errors name
// the offending field and term index.
LocalObservable parse_observable(const nlohmann::json& terms, int n, int q,
                                 const std::string& field = "hamiltonian");

struct StateRequest {
    StateSpec spec;
    bool dephase = false;  // computational-basis dephasing applied after build
};

StateRequest parse_state_spec(const nlohmann::json& state, int n, int q,
                              const std::optional<LocalObservable>& hamiltonian,
                              const std::string& field = "state");

Geometry parse_geometry(const nlohmann::json& geometry, int n, int q);

struct FamilySpec {
    std::vector<ObservableTerm> bond_terms;  // on sites {i, i+1}
    std::vector<ObservableTerm> site_terms;  // on site {i}
    int q = 2;
    LocalObservable instantiate(int n) const;
};

FamilySpec parse_family(const nlohmann::json& family, int q);

struct SystemDescription {
    int n = 1;
    int q = 2;
    Geometry geometry;
    std::optional<LocalObservable> hamiltonian;
    std::optional<StateRequest> state;
    std::optional<StateRequest> state2;
    std::optional<FamilySpec> family;
    nlohmann::json params;
};

SystemDescription parse_system(const nlohmann::json& doc);

}  // namespace spinw1
