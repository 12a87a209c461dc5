"""Principal-axis analysis of the per-pair quadratic constraint.

The (x, y) block a x^2 + 2b xy + c y^2 rotates to F X^2 + G Y^2 with

    phi = atan2(2b, c - a) / 2,
    F = (a + c)/2 - sqrt((a - c)^2 + 4 b^2)/2,
    G = (a + c)/2 + sqrt((a - c)^2 + 4 b^2)/2      (F <= G always).

The (z, w) block -alpha z^2 - 2 beta zw - sigma w^2 is handled by
diagonalizing (alpha, beta, sigma) with the same convention and negating
the eigenvalues, so the full surface type follows from the two signatures.
"""

from dataclasses import dataclass

import numpy as np

TOL_ZERO = 1e-10


@dataclass(frozen=True)
class DiagResult:
    """Eigenvalues F <= G and principal angle phi of one 2x2 block."""

    F: float
    G: float
    phi: float


def diagonalize2(a: float, b: float, c: float) -> DiagResult:
    """Closed-form eigendecomposition of [[a, b], [b, c]].

    The angle is phi = atan2(2b, c - a) / 2; for the doubly degenerate
    case a = c, b = 0 the angle is 0 by convention.
    """
    h = np.hypot(a - c, 2.0 * b)
    if h == 0.0:
        return DiagResult(F=float(a), G=float(c), phi=0.0)
    mean = 0.5 * (a + c)
    return DiagResult(F=float(mean - 0.5 * h), G=float(mean + 0.5 * h),
                      phi=float(0.5 * np.arctan2(2.0 * b, c - a)))


@dataclass(frozen=True)
class SignatureReport:
    xy: DiagResult
    zw: DiagResult
    signs: tuple          # sign pattern of the four diagonal coefficients
    boundary: bool        # any eigenvalue within TOL_ZERO of zero
    definite_xy: bool     # sufficient condition a > 0, c > 0, ac > b^2
    definite_zw: bool     # sufficient condition alpha < 0, sigma < 0, a*s > b^2


def classify_signature(a, b, c, alpha, beta, sigma, tol=TOL_ZERO) -> SignatureReport:
    """Signature of the full quadratic in principal axes.

    The diagonal form is F X^2 + G Y^2 - F' Z^2 - G' W^2 where (F', G')
    diagonalize the (alpha, beta, sigma) block; the reported signs are of
    (F, G, -F', -G'). Eigenvalues within `tol` of zero flag a boundary
    (degenerate) surface.
    """
    dxy = diagonalize2(a, b, c)
    dzw = diagonalize2(alpha, beta, sigma)
    diag = (dxy.F, dxy.G, -dzw.F, -dzw.G)
    scale = max(1.0, max(abs(v) for v in diag))
    boundary = any(abs(v) <= tol * scale for v in diag)
    signs = tuple(0 if abs(v) <= tol * scale else (1 if v > 0 else -1)
                  for v in diag)
    return SignatureReport(
        xy=dxy, zw=dzw, signs=signs, boundary=boundary,
        definite_xy=bool(a > 0 and c > 0 and a * c > b * b),
        definite_zw=bool(alpha < 0 and sigma < 0 and alpha * sigma > beta * beta),
    )
