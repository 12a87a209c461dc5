"""Independent generators and checkers used to validate the solvers.

Everything here is deliberately simple and solver-free: devices are sampled
directly in the real-split parametrization, datasets are built by applying
a known matrix, and ``direct_linear_solve`` reconstructs a matrix from
pairs by plain least squares without any structural assumption.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometry, RankDeficient
from .lorentz import (ComplexParameter, MuellerMatrix, RealParameter,
                      apply, is_lorentz, k_from_nm, mueller_from_k, nm_from_k,
                      rotation_k)
from .relativistic import (ExpansionCoeffs, constraint_residual, lift,
                           params_to_expansion, quad_coeffs_from_geometry)
from .stokes import MeasurementPair, StokesVector, pair_geometry

CHI_MAX = 2.0


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_lorentz(seed=None, rng=None, chi_max=CHI_MAX) -> ComplexParameter:
    """Uniform-ish sample of a valid device parameter.

    n is drawn in the unit ball, m with |m| <= sinh(chi_max / 2); the
    remaining components solve the two constraints exactly:
    n0^2 is the positive root of the quadratic obtained after eliminating
    m0 = -(n.m) / n0, so the construction never fails.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    while True:
        n = rng.uniform(-1.0, 1.0, 3)
        if float(n @ n) <= 1.0:
            break
    m = random_unit(rng) * rng.uniform(0.0, np.sinh(chi_max / 2.0))
    d = float(n @ m)
    C = 1.0 - float(n @ n) + float(m @ m)
    n0 = np.sqrt((C + np.hypot(C, 2.0 * d)) / 2.0)
    m0 = -d / n0
    return k_from_nm(RealParameter(n0=n0, n=n, m0=m0, m=m))


def random_stokes(rng, s0_range=(0.5, 2.0), p_range=(0.05, 0.999)) -> StokesVector:
    s0 = rng.uniform(*s0_range)
    p = rng.uniform(*p_range)
    return StokesVector(s0, s0 * p * random_unit(rng))


def make_pair(k: ComplexParameter, vin: StokesVector) -> MeasurementPair:
    return MeasurementPair(vin, apply(mueller_from_k(k), vin))


def random_pairs(k: ComplexParameter, count, rng, **kw):
    return [make_pair(k, random_stokes(rng, **kw)) for _ in range(count)]


def rotation_dataset(seed=None, rng=None):
    """Two consistent measurements of one random rotation device.

    A single rotation fixes the family angle only when both probes share
    the cone angle about the device axis (equal axis components of the
    unit input directions); the second probe is therefore built by
    rotating the first about the axis by a random angle, then tilting the
    output pair along the same rotation. Returns (k, pair1, pair2).
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    axis = random_unit(rng)
    angle = rng.uniform(0.3, np.pi - 0.3)
    k = rotation_k(axis, angle)
    L = mueller_from_k(k)

    N1 = random_unit(rng)
    # keep N1 off the axis so the measurements carry information
    while abs(float(N1 @ axis)) > 0.95:
        N1 = random_unit(rng)
    psi = rng.uniform(0.5, 2.0 * np.pi - 0.5)
    cone = mueller_from_k(rotation_k(axis, psi)).m[1:, 1:]
    N2 = cone @ N1

    pairs = []
    for N in (N1, N2):
        s0 = rng.uniform(0.5, 2.0)
        p = rng.uniform(0.2, 1.0)
        vin = StokesVector(s0, s0 * p * N)
        pairs.append(MeasurementPair(vin, apply(L, vin)))
    return k, pairs[0], pairs[1]


def _scale_pair(pair: MeasurementPair, lam: float) -> MeasurementPair:
    return MeasurementPair(
        StokesVector(lam * pair.input.s0, lam * pair.input.s),
        StokesVector(lam * pair.output.s0, lam * pair.output.s))


def _scale_to_surface(pair: MeasurementPair, e: ExpansionCoeffs):
    """Rescale a pair so its constraint surface passes through e.

    Scaling a pair by lam scales (A, B, Avec, Bvec) by lam, hence the
    quadratic coefficients by lam^2 (a, alpha), lam^3 (b, beta) and
    lam^4 (c, sigma); the constraint value becomes a quartic in lam whose
    smallest positive real root is used.
    """
    q = quad_coeffs_from_geometry(pair_geometry(pair))
    x, y, z, w = e.x, e.y, e.z, e.w
    P2 = q.a * x * x - q.alpha * z * z
    P3 = 2.0 * (q.b * x * y - q.beta * z * w)
    P4 = q.c * y * y - q.sigma * w * w
    roots = np.roots([P4, P3, P2, 0.0, -1.0])
    real = [r.real for r in roots
            if abs(r.imag) < 1e-9 * max(1.0, abs(r)) and r.real > 1e-9]
    if not real:
        raise DegenerateGeometry("no positive scaling puts the pair "
                                 "surface through the target point")
    lam = min(real)
    return _scale_pair(pair, lam)


def consistent_dataset(count, seed=None, rng=None, chi_max=CHI_MAX):
    """`count` measurement pairs of one random relativistic device.

    The first pair fixes the expansion point e*; every further pair is an
    independent random pair of an auxiliary random device, rescaled so its
    own constraint surface passes through e* exactly. Each pair is a
    genuine physical measurement of some device, and all share the lifted
    solution lift(e*). Returns (k, e_star, pairs).
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    while True:
        k = random_lorentz(rng=rng, chi_max=chi_max)
        base = make_pair(k, random_stokes(rng))
        g = pair_geometry(base)
        if g.collinear:
            continue
        try:
            e_star = params_to_expansion(g, nm_from_k(k))
        except DegenerateGeometry:
            continue
        break

    pairs = [base]
    while len(pairs) < count:
        aux = random_lorentz(rng=rng, chi_max=chi_max)
        cand = make_pair(aux, random_stokes(rng))
        if pair_geometry(cand).collinear:
            continue
        try:
            scaled = _scale_to_surface(cand, e_star)
        except DegenerateGeometry:
            continue
        q = quad_coeffs_from_geometry(pair_geometry(scaled))
        if abs(constraint_residual(q, e_star)) > 1e-9:
            continue
        pairs.append(scaled)
    return k, e_star, pairs


def direct_linear_solve(pairs, tol_rank=1e-8):
    """Least-squares matrix from input/output pairs, no structure assumed.

    Stacks the 4n x 16 system vec-style and solves by numpy lstsq. Raises
    RankDeficient below full column rank (fewer than four pairs in general
    position). Returns (MuellerMatrix, LorentzReport, residual_norm).
    """
    n = len(pairs)
    Mat = np.zeros((4 * n, 16))
    rhs = np.zeros(4 * n)
    for i, p in enumerate(pairs):
        vin = p.input.as_array()
        for r in range(4):
            Mat[4 * i + r, 4 * r:4 * r + 4] = vin
        rhs[4 * i:4 * i + 4] = p.output.as_array()
    sol, res, rank, sv = np.linalg.lstsq(Mat, rhs, rcond=None)
    if rank < 16:
        raise RankDeficient(
            f"measurement stack has rank {rank} < 16: "
            "matrix not determined", rank=int(rank))
    L = MuellerMatrix(sol.reshape(4, 4))
    resid = float(np.linalg.norm(Mat @ sol - rhs))
    return L, is_lorentz(L), resid


def lifted_target(e: ExpansionCoeffs):
    return lift(e)
