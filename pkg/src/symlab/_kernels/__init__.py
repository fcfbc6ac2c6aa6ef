"""Kernel backend selection.

The hot 2D polygon kernels exist twice: a compiled Cython extension
(`_core`) and a pure-numpy reference (`_numpy_backend`). The compiled
backend is used when it imported successfully and the environment
variable SYMLAB_FORCE_FALLBACK is unset. Both expose the same
signatures; `tests/test_kernels.py` asserts parity.
"""

import importlib
import os

from . import _numpy_backend

_force_fallback = os.environ.get("SYMLAB_FORCE_FALLBACK", "") not in ("", "0")

_core = None
if not _force_fallback:
    try:
        _core = importlib.import_module("._core", __name__)
    except ImportError:
        _core = None

BACKEND = "cython" if _core is not None else "numpy"

# shared (numpy is already optimal for these)
polygon_area = _numpy_backend.polygon_area
polygon_perimeter = _numpy_backend.polygon_perimeter
polygon_inertia = _numpy_backend.polygon_inertia
support_values = _numpy_backend.support_values
support_arc_angles = _numpy_backend.support_arc_angles
support_l2_sq = _numpy_backend.support_l2_sq
prune_collinear = _numpy_backend.prune_collinear

if _core is not None:
    convex_minkowski_sum = _core.convex_minkowski_sum
    steiner_symmetral = _core.steiner_symmetral
    disk_overlap_area = _core.disk_overlap_area
    disk_hausdorff = _core.disk_hausdorff
else:
    convex_minkowski_sum = _numpy_backend.convex_minkowski_sum
    steiner_symmetral = _numpy_backend.steiner_symmetral
    disk_overlap_area = _numpy_backend.disk_overlap_area
    disk_hausdorff = _numpy_backend.disk_hausdorff
