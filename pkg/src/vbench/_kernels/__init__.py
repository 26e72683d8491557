"""Hot-kernel backend selection.

The compiled extension (``core_ext``, Cython) is preferred; the pure-numpy
fallback (``core_py``) is picked up automatically when the extension is not
built, or when ``VBENCH_PURE_KERNELS=1`` is set. Both expose the same
functions with identical semantics.
"""
import os

if os.environ.get("VBENCH_PURE_KERNELS", "") == "1":
    from . import core_py as _impl

    BACKEND = "python"
else:
    try:
        from . import core_ext as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import core_py as _impl

        BACKEND = "python"

spin_apply = _impl.spin_apply
ry_batch = _impl.ry_batch
rxexp_batch = _impl.rxexp_batch
cnot_batch = _impl.cnot_batch
rbm_sweep_flip = _impl.rbm_sweep_flip
rbm_sweep_exchange = _impl.rbm_sweep_exchange
jastrow_sweep_flip = _impl.jastrow_sweep_flip
jastrow_sweep_exchange = _impl.jastrow_sweep_exchange


def backend() -> str:
    """Name of the kernel backend in use ("cython" or "python")."""
    return BACKEND
