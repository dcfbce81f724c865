import numpy as np


def coeff_err(x):
    """Largest coefficient of a Grassmann element or matrix."""
    if hasattr(x, "max_abs"):
        return x.max_abs()
    return float(np.max(np.abs(x.coeffs)))
