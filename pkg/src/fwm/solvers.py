"""Bracketing root finder shared by the ZDW and phasematching searches."""
import math

from .exceptions import NoRootError

MAX_ITER = 200


def bisect(func, lo, hi, rel_tol=1e-6, scale=None, max_iter=MAX_ITER):
    """Bisection on ``[lo, hi]`` stopping on the residual, not the bracket.

    Stops as soon as ``|func(x)| < rel_tol * scale``. ``scale`` defaults to
    the larger endpoint magnitude. If the bracket collapses to adjacent
    floats first, the endpoint with the smaller residual is returned.
    """
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise NoRootError(
            f"no sign change on [{lo:.6e}, {hi:.6e}]: f={f_lo:.3e}, {f_hi:.3e}"
        )
    if scale is None:
        scale = max(abs(f_lo), abs(f_hi))
    target = rel_tol * scale
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = func(mid)
        if abs(f_mid) < target:
            return mid
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo if abs(f_lo) <= abs(f_hi) else hi
