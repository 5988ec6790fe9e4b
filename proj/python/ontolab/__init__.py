"""Numerical laboratory for ontological models of a single qubit.

The heavy lifting lives in the compiled extension ``ontolab._core``; this
package re-exports its public surface.
"""

from ._core import (
    HypothesisRefusal,
    ModelContractError,
    bloch_vector,
    bm_conditional_indicator,
    bm_to_ks_reduction,
    born_probability,
    classify,
    einstein1927,
    fidelity,
    model_names,
    residual,
    theorem1,
    verify_born,
)

__all__ = [
    "HypothesisRefusal",
    "ModelContractError",
    "bloch_vector",
    "bm_conditional_indicator",
    "bm_to_ks_reduction",
    "born_probability",
    "classify",
    "einstein1927",
    "fidelity",
    "model_names",
    "residual",
    "theorem1",
    "verify_born",
]
