"""Exact-diagonalization laboratory for the disordered long-range Ising chain.

The heavy lifting lives in the compiled extension ``mblsim._core``; this
package re-exports it and adds dict-based wrappers around the JSON harness
entry points.
"""

import json as _json

from ._core import (  # noqa: F401
    BdgHamiltonian,
    CapacityError,
    ConfigError,
    ConvergenceError,
    CouplingMatrix,
    CovarianceState,
    Hamiltonian,
    ModelSpec,
    NormalModes,
    TrapSpec,
    __version__,
    all_sz,
    all_zz,
    build_bdg,
    coupling_from_matrix,
    coupling_from_modes,
    equilibrium_positions,
    eth_beta,
    eth_rdm,
    evolve,
    evolve_covariance,
    expectation_pauli,
    ff_observables,
    fit_alpha,
    hamming_distance,
    init_covariance,
    kac_norm,
    kac_normalized_couplings,
    make_model,
    neel_state,
    power_law_couplings,
    qfi_staggered,
    r_statistic,
    reduced_density_matrix,
    run_ensemble_json,
    run_levelstats_json,
    sample_disorder,
    transverse_modes,
    z_product_state,
)


def run_ensemble(config):
    """Run a disorder-averaged ensemble from a config dict; returns the result
    document as a dict."""
    return _json.loads(run_ensemble_json(_json.dumps(config)))


def run_levelstats(config, bins=20):
    """Adjacent-gap statistics over a disorder ensemble; returns a dict."""
    return _json.loads(run_levelstats_json(_json.dumps(config), bins))
