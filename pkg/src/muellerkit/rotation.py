"""Rotation-only Mueller devices.

A device with s0' = s0 acts as a 3-rotation on the polarization vector.
One measurement (S -> S') leaves a one-parameter family of rotations,
parametrized by an angle Gamma:

    alpha = sin(Gamma) / sqrt(2 (S^2 + S.S'))
    beta  = cos(Gamma) / (S sqrt(2 (S^2 + S.S')))
    n0 = beta (S^2 + S.S'),   n = alpha (S + S') + beta (S x S')

with n0^2 + n^2 = 1. Two independent measurements pin Gamma down (up to
the harmless global sign of (n0, n)).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (AntipodalInput, DegenerateGeometry, HalfTurn,
                     InconsistentPairs, LengthMismatch, NegativeSquare,
                     SingularSystem)
from .lorentz import (MuellerMatrix, RealParameter, k_from_nm, mueller_from_k,
                      TOL_K, TOL_L)
from .stokes import MeasurementPair, StokesVector

TOL_CONS = 1e-8
TOL_DEG = 1e-12


@dataclass(frozen=True)
class Family3DSolution:
    gamma: float
    alpha: float
    beta: float
    n0: float
    n: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.n, dtype=float).reshape(3).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "n", arr)

    def real_parameter(self) -> RealParameter:
        return RealParameter(n0=self.n0, n=self.n, m0=0.0, m=np.zeros(3))

    def matrix(self) -> MuellerMatrix:
        return mueller_from_k(k_from_nm(self.real_parameter()))


def _rotation_vectors(p: MeasurementPair, tol=1e-9):
    s, sp = p.input.s, p.output.s
    smag, spmag = np.linalg.norm(s), np.linalg.norm(sp)
    if abs(smag - spmag) > tol * max(1.0, smag):
        raise LengthMismatch(f"|S| = {smag} vs |S'| = {spmag}")
    return s, sp, smag


def family_3d(p: MeasurementPair, gamma: float, tol_deg=TOL_DEG) -> Family3DSolution:
    """One-measurement rotation family at angle `gamma`."""
    s, sp, smag = _rotation_vectors(p)
    denom = smag * smag + float(s @ sp)
    if denom <= tol_deg:
        raise AntipodalInput(
            "S' antipodal to S: family parametrization singular "
            "(solutions are half-turns about axes perpendicular to S)")
    root = np.sqrt(2.0 * denom)
    alpha = np.sin(gamma) / root
    beta = np.cos(gamma) / (smag * root)
    n0 = beta * denom
    n = alpha * (s + sp) + beta * np.cross(s, sp)
    return Family3DSolution(gamma=float(gamma), alpha=float(alpha),
                            beta=float(beta), n0=float(n0), n=n)


def gibbs_3d(p: MeasurementPair, gamma: float, tol=TOL_K) -> np.ndarray:
    """Gibbs rotation vector c = n / n0 of the family member at `gamma`."""
    s, sp, smag = _rotation_vectors(p)
    denom = smag * smag + float(s @ sp)
    if denom <= TOL_DEG:
        raise AntipodalInput("S' antipodal to S")
    if abs(np.cos(gamma)) <= tol:
        raise HalfTurn("n0 = 0: Gibbs vector undefined")
    return (np.tan(gamma) * smag * (s + sp) + np.cross(s, sp)) / denom


def _unit_pair(p: MeasurementPair):
    s, sp, _ = _rotation_vectors(p)
    smag, spmag = np.linalg.norm(s), np.linalg.norm(sp)
    if smag == 0.0 or spmag == 0.0:
        raise DegenerateGeometry("zero polarization vector: no direction")
    return s / smag, sp / spmag


def _gamma_expressions(N1, N1p, N2, N2p):
    """The four tan(Gamma) = num/den forms from the two-pair elimination."""
    return [
        (float(N1 @ np.cross(N2, N2p)), float((N2 - N1) @ (N2 + N2p))),
        (-float(N1p @ np.cross(N2p, N2)), float((N2p - N1p) @ (N2p + N2))),
        (float(N2 @ np.cross(N1, N1p)), float((N1 - N2) @ (N1 + N1p))),
        (-float(N2p @ np.cross(N1p, N1)), float((N1p - N2p) @ (N1p + N1))),
    ]


def solve_two_3d(p1: MeasurementPair, p2: MeasurementPair,
                 tol_cons=TOL_CONS, tol_l=TOL_L) -> Family3DSolution:
    """Unique rotation device from two independent measurements.

    Gamma is extracted as atan2(num, den) from the best-conditioned of the
    four equivalent ratio expressions; the remaining expressions are
    cross-checked. The candidate at Gamma is validated on the second pair,
    falling back to Gamma + pi (the ratio loses the quadrant).
    """
    N1, N1p = _unit_pair(p1)
    N2, N2p = _unit_pair(p2)

    c1, c2 = float(N1 @ N1p), float(N2 @ N2p)
    if abs(c1 - c2) > tol_cons * max(1.0, abs(c1)):
        raise InconsistentPairs(
            f"N1.N1' = {c1} vs N2.N2' = {c2}: no common rotation")

    exprs = _gamma_expressions(N1, N1p, N2, N2p)
    if all(np.hypot(num, den) <= TOL_CONS for num, den in exprs):
        raise DegenerateGeometry(
            "all ratio expressions vanish: pairs do not pin the axis")

    num, den = max(exprs, key=lambda e: abs(e[1]))
    # cross-check every non-degenerate expression against the chosen one
    tan_ref = num / den if abs(den) > TOL_CONS else np.inf
    for n_i, d_i in exprs:
        if abs(d_i) > tol_cons and abs(den) > tol_cons:
            if abs(n_i / d_i - tan_ref) > tol_cons * max(1.0, abs(tan_ref)):
                raise InconsistentPairs("ratio expressions disagree")

    gamma = np.arctan2(num, den)
    up1 = MeasurementPair(input=StokesVector(1.0, N1),
                          output=StokesVector(1.0, N1p))

    for g in (gamma, gamma + np.pi):
        sol = family_3d(up1, g)
        M = sol.matrix().m
        res = max(np.linalg.norm(M[1:, 1:] @ N1 - N1p),
                  np.linalg.norm(M[1:, 1:] @ N2 - N2p))
        if res <= max(tol_l, 1e-7):
            return sol
    raise InconsistentPairs("no Gamma branch maps both pairs")


def linear_two_3d(p1: MeasurementPair, p2: MeasurementPair,
                  tol_l=TOL_L):
    """Two-measurement reconstruction through the lifted linear system.

    With unit-normalized directions and A_i = N_i + N_i', B_i = N_i - N_i',
    each pair yields

        y^2 [A_i^2 (A_i^2 + B_i^2) - (A_i.B_i)^2] + z^2 A_i^2 = 1

    in the squared coefficients of n0 = y A^2, n = z A + y A x B. Note that
    for exact rotation data A_i.B_i = 0 and A_i^2 + B_i^2 = 4, so the two
    rows are always proportional and the 2x2 system is singular; the
    closed-form solution is only usable on data violating those identities.

    Returns ((y2, z2), Family3DSolution).
    """
    N1, N1p = _unit_pair(p1)
    N2, N2p = _unit_pair(p2)

    rows = []
    for N, Np in ((N1, N1p), (N2, N2p)):
        Av = N + Np
        Bv = N - Np
        A2 = float(Av @ Av)
        B2 = float(Bv @ Bv)
        AB = float(Av @ Bv)
        rows.append((A2 * (A2 + B2) - AB * AB, A2))
    M = np.array(rows)
    rhs = np.ones(2)

    det = np.linalg.det(M)
    scale = max(np.max(np.abs(M)) ** 2, 1e-30)
    if abs(det) <= 1e-10 * scale:
        raise SingularSystem(
            "lifted 2x2 system is rank deficient "
            "(rows are proportional for exact rotation data)")
    y2, z2 = np.linalg.solve(M, rhs)
    if y2 < -TOL_K or z2 < -TOL_K:
        raise NegativeSquare(f"y^2 = {y2}, z^2 = {z2}")
    y2, z2 = max(y2, 0.0), max(z2, 0.0)

    # resolve signs by validating the reconstructed rotation on both pairs
    for sy in (1.0, -1.0):
        for sz in (1.0, -1.0):
            y = sy * np.sqrt(y2)
            z = sz * np.sqrt(z2)
            Av = N1 + N1p
            Bv = N1 - N1p
            n0 = y * float(Av @ Av)
            n = z * Av + y * np.cross(Av, Bv)
            norm = np.hypot(n0, np.linalg.norm(n))
            if norm == 0.0:
                continue
            r = RealParameter(n0=n0 / norm, n=n / norm, m0=0.0, m=np.zeros(3))
            try:
                M3 = mueller_from_k(k_from_nm(r)).m[1:, 1:]
            except Exception:
                continue
            res = max(np.linalg.norm(M3 @ N1 - N1p), np.linalg.norm(M3 @ N2 - N2p))
            if res <= max(tol_l, 1e-7):
                gamma = np.arctan2(
                    z, y * np.sqrt(2.0 * (1.0 + float(N1 @ N1p))))
                sol = Family3DSolution(gamma=float(gamma), alpha=float(z),
                                       beta=float(2.0 * y), n0=r.n0, n=r.n)
                return (float(y2), float(z2)), sol
    raise InconsistentPairs("no sign assignment validates on both pairs")

