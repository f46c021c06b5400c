"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it was built; otherwise,
or when ``RECTCURVES_BACKEND=python`` is set, the numpy fallback in
``_pykernels`` is used.  ``BACKEND`` names the active implementation.
"""
import os

from . import _pykernels

python = _pykernels

try:
    from . import _ckernels as compiled
except ImportError:  # extension not built
    compiled = None

if compiled is not None and os.environ.get("RECTCURVES_BACKEND", "").lower() != "python":
    _impl = compiled
    BACKEND = "cython"
else:
    _impl = _pykernels
    BACKEND = "python"

gram_schmidt_batch = _impl.gram_schmidt_batch
rk4_affine = _impl.rk4_affine
rk4_frenet = _impl.rk4_frenet
rk4_transport = _impl.rk4_transport


def available_backends():
    return {"python": _pykernels, **({"cython": compiled} if compiled is not None else {})}
