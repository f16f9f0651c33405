"""Backend selector for the hot kernels.

The compiled extension is preferred; set ``NVSENSOR_PURE_PYTHON=1`` to force
the pure-Python mirror, and any import failure of the extension falls back to
it silently. ``BACKEND`` names whichever one is active.
"""

import os

if os.environ.get("NVSENSOR_PURE_PYTHON", "") not in ("", "0"):
    from nvsensor import _kernels_py as _impl
else:
    try:
        from nvsensor import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from nvsensor import _kernels_py as _impl

BACKEND = _impl.__backend__

shell_inv_r6 = _impl.shell_inv_r6
bath_rate = _impl.bath_rate
lorentzian = _impl.lorentzian
gamma_parts = _impl.gamma_parts
dgamma_dn = _impl.dgamma_dn
eta_at = _impl.eta_at
optimal_tau = _impl.optimal_tau
batch_gamma = _impl.batch_gamma
batch_dgamma_dn = _impl.batch_dgamma_dn
batch_optimal_tau = _impl.batch_optimal_tau
