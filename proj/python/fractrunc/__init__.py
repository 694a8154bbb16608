"""Fractional truncated Laplacians on the half-space.

The numerical core lives in the compiled ``_core`` module.  Verification
reports come back as dicts parsed from their JSON form.
"""

import json as _json

from . import _core
from ._core import (  # noqa: F401
    DomainError,
    Error,
    ExponentOutOfRange,
    Field,
    GeometryViolation,
    NoRoot,
    bump_train,
    c_iso,
    c_k,
    c_n_plus,
    c_perp,
    c_s_mu,
    exponent_table_csv,
    field_from_json,
    find_gamma_bar,
    find_gamma_plus,
    find_gamma_tilde,
    hat_c_dec,
    hat_c_gro,
    normalizing_constant,
    power_profile,
    power_transform,
    psi,
    singular_supersolution,
    v_gamma,
    v_minus_gamma,
    w_gamma,
)


def _report(fn):
    def wrapped(*args, **kwargs):
        return _json.loads(fn(*args, **kwargs))

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


verify_bump_train = _report(_core.verify_bump_train)
verify_T49_2 = _report(_core.verify_T49_2)
verify_psi_subsolution = _report(_core.verify_psi_subsolution)
verify_singular_supersolution = _report(_core.verify_singular_supersolution)
verify_power_identity = _report(_core.verify_power_identity)

__version__ = "0.1.0"
