"""Kernel selection: the compiled extension if importable, else numpy."""

from . import _fallback

try:
    from . import _kernels as kernels
except ImportError:  # extension not built
    kernels = _fallback
    BACKEND = "python"
else:
    BACKEND = "cython"

BACKENDS = {"python": _fallback}
if BACKEND == "cython":
    BACKENDS["cython"] = kernels


def get(name=None):
    """Return the kernel module ``name`` ("cython" or "python"), default the active one."""
    if name is None:
        return kernels
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available "
                         f"(have: {', '.join(BACKENDS)})") from None
