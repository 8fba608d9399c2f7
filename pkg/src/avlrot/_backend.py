"""Kernel selection.

The compiled kernel is preferred when its extension module imports;
otherwise the pure-Python kernel takes over.  Set ``AVLROT_BACKEND`` to
``compiled`` or ``pure`` to force one (forcing ``compiled`` raises if
the extension is unavailable).
"""

import os


def _compiled():
    from avlrot._speedups import TreeKernel

    return TreeKernel


def _pure():
    from avlrot._pykernel import TreeKernel

    return TreeKernel


_requested = os.environ.get("AVLROT_BACKEND", "").strip().lower()
if _requested in ("", "auto"):
    try:
        DEFAULT_KERNEL = _compiled()
        BACKEND = "compiled"
    except ImportError:
        DEFAULT_KERNEL = _pure()
        BACKEND = "pure"
elif _requested == "compiled":
    DEFAULT_KERNEL = _compiled()
    BACKEND = "compiled"
elif _requested == "pure":
    DEFAULT_KERNEL = _pure()
    BACKEND = "pure"
else:
    raise ValueError(
        f"AVLROT_BACKEND={_requested!r}: expected 'compiled', 'pure' or 'auto'"
    )


def available_backends() -> dict:
    """Importable kernels by name."""
    out = {"pure": _pure()}
    try:
        out["compiled"] = _compiled()
    except ImportError:
        pass
    return out


def kernel_class(name=None):
    """Kernel class for ``name`` (default: the selected backend)."""
    if name is None:
        return DEFAULT_KERNEL
    try:
        return available_backends()[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}") from None
