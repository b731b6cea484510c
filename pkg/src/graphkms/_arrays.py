"""Small array helpers shared across modules."""

import numpy as np


def readonly(a, dtype=None):
    """Copy ``a`` into a fresh array and lock it against writes."""
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr
