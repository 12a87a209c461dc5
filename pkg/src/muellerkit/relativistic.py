"""Full relativistic Mueller devices.

One measurement pair leaves a 3-parameter family of devices. Expanding the
real-split vectors over the pair basis (Avec, Bvec, Avec x Bvec),

    n0 = A x - Avec^2 y        n = z Avec - w A Bvec + y Avec x Bvec
    m0 = -B z + Bvec^2 w       m = x Bvec - y B Avec + w Avec x Bvec

the orthogonality constraint n0 m0 + n.m = 0 holds identically and the
normalization constraint becomes one quadratic in (x, y, z, w):

    a x^2 + 2b xy + c y^2 - alpha z^2 - 2 beta zw - sigma w^2 = 1.

Four pairs give four simultaneous quadratics (solved here by multistart
damped Newton); six pairs make the system linear in the lifted monomials
(x^2, xy, y^2, z^2, zw, w^2).
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (ConstraintViolation, DegenerateGeometry,
                     InconsistentPairs, NoConvergedRoot, NoRealRoot,
                     NoValidCandidate, Rank1Violation, SingularSystem)
from .lorentz import (ComplexParameter, RealParameter, TOL_K,
                      apply, mueller_from_k)
from .stokes import MeasurementPair, PairGeometry, pair_geometry

TOL_CONS = 1e-8
TOL_DEG = 1e-12
TOL_R1 = 1e-6
COND_MAX = 1e10


@dataclass(frozen=True)
class ExpansionCoeffs:
    """Expansion scalars (x, y, z, w); the eliminated coefficients are
    derived: N_minus = -A w, M_plus = -B y."""

    x: float
    y: float
    z: float
    w: float

    def as_array(self):
        return np.array([self.x, self.y, self.z, self.w])

    def n_minus(self, g: PairGeometry):
        return -g.A * self.w

    def m_plus(self, g: PairGeometry):
        return -g.B * self.y


@dataclass(frozen=True)
class QuadCoeffs:
    """Coefficients of a x^2 + 2b xy + c y^2 - alpha z^2 - 2 beta zw
    - sigma w^2 = 1."""

    a: float
    b: float
    c: float
    alpha: float
    beta: float
    sigma: float

    def as_row(self):
        return np.array([self.a, self.b, self.c, self.alpha, self.beta,
                         self.sigma])


def quad_coeffs(p: MeasurementPair) -> QuadCoeffs:
    g = pair_geometry(p)
    return quad_coeffs_from_geometry(g)


def quad_coeffs_from_geometry(g: PairGeometry) -> QuadCoeffs:
    A, B, A2, B2 = g.A, g.B, g.Avec2, g.Bvec2
    return QuadCoeffs(
        a=A * A - B2,
        b=A * (B * B - A2),
        c=(A2 + B2 - B * B) * A2 - A * A * B * B,
        alpha=B * B - A2,
        beta=B * (A * A - B2),
        sigma=(A2 + B2 - A * A) * B2 - A * A * B * B,
    )


def quad_coeffs_polarized(p: MeasurementPair) -> QuadCoeffs:
    """Specialized coefficients for fully polarized light (invariant = 0).

    Every coefficient reduces to a multiple of S0 S0' + S.S'; used as a
    cross-check of the general formulas in tests.
    """
    vin, vout = p.input, p.output
    t = vin.s0 * vout.s0 + float(vin.s @ vout.s)
    A = vin.s0 + vout.s0
    B = vin.s0 - vout.s0
    return QuadCoeffs(
        a=2.0 * t,
        b=-2.0 * t * A,
        c=2.0 * t * A * A,
        alpha=-2.0 * t,
        beta=2.0 * t * B,
        sigma=-2.0 * t * B * B,
    )


def expansion_to_params(g: PairGeometry, e: ExpansionCoeffs,
                        tol=TOL_K, require_normalized=False) -> RealParameter:
    """Real-split parameters of the family member at e.

    Orthogonality n0 m0 + n.m = 0 is an identity of the expansion and is
    asserted; the normalization constraint holds iff e lies on the
    quadratic 3-surface (checked only when ``require_normalized``).
    """
    x, y, z, w = e.x, e.y, e.z, e.w
    Av, Bv, cr = g.Avec, g.Bvec, g.cross
    n0 = g.A * x - g.Avec2 * y
    n = z * Av - w * g.A * Bv + y * cr
    m0 = -g.B * z + g.Bvec2 * w
    m = x * Bv - y * g.B * Av + w * cr
    r = RealParameter(n0=n0, n=n, m0=m0, m=m)
    scale = max(1.0, abs(n0 * m0), abs(float(n @ m)))
    if r.ortho_defect() > 1e-11 * scale:
        raise ConstraintViolation(
            f"orthogonality identity violated by {r.ortho_defect():.3e}")
    if require_normalized and r.norm_defect() > tol * scale:
        raise ConstraintViolation(
            f"normalization violated by {r.norm_defect():.3e}: "
            "e is off the constraint surface")
    return r


def params_to_expansion(g: PairGeometry, r: RealParameter,
                        tol_deg=TOL_DEG, tol_cons=TOL_CONS) -> ExpansionCoeffs:
    """Invert the expansion by projecting n and m on the pair basis.

    The shared denominator is Avec^2 Bvec^2 - (A B)^2 = |Avec x Bvec|^2
    (using the invariant identity A B = Avec.Bvec); pairs with a collinear
    basis, including all Bvec = 0 rotation-only pairs, are rejected.
    y and w are each computable from both vectors; the duplicates are
    checked for agreement wherever their own denominators are healthy.
    """
    Av, Bv, cr = g.Avec, g.Bvec, g.cross
    A, B = g.A, g.B
    D = g.Avec2 * g.Bvec2 - (A * B) ** 2
    scale = max(g.Avec2 * g.Bvec2, 1.0)
    if D <= tol_deg * scale:
        raise DegenerateGeometry(
            "pair basis is collinear (|Avec x Bvec|^2 ~ 0); "
            "rotation-only pairs belong to the 3D solver")

    An, Bn = float(Av @ r.n), float(Bv @ r.n)
    Am, Bm = float(Av @ r.m), float(Bv @ r.m)
    y = float(cr @ r.n) / D
    z = -(Bn * A * B - An * g.Bvec2) / D
    w_n = -(Bn * g.Avec2 - An * A * B) / (A * D)
    w = float(cr @ r.m) / D
    x = (-Am * A * B + Bm * g.Avec2) / D

    amp = max(1.0, abs(y), abs(w))
    if abs(w - w_n) > tol_cons * amp:
        raise InconsistentPairs(
            f"duplicate w computations disagree: {w} vs {w_n} "
            "(parameter does not map this pair)")
    if abs(B) > tol_deg * max(1.0, A):
        y_m = (Bm * A * B - Am * g.Bvec2) / (B * D)
        if abs(y - y_m) > tol_cons * amp:
            raise InconsistentPairs(
                f"duplicate y computations disagree: {y} vs {y_m}")
    return ExpansionCoeffs(x=float(x), y=float(y), z=float(z), w=float(w))


def constraint_residual(q: QuadCoeffs, e: ExpansionCoeffs) -> float:
    x, y, z, w = e.x, e.y, e.z, e.w
    return (q.a * x * x + 2.0 * q.b * x * y + q.c * y * y
            - q.alpha * z * z - 2.0 * q.beta * z * w - q.sigma * w * w - 1.0)


def k_from_expansion(g: PairGeometry, e: ExpansionCoeffs,
                     tol=TOL_K, check=True, normalize=False) -> ComplexParameter:
    """Complex parameter assembled directly from the expansion scalars.

    With ``normalize`` the result is projected exactly onto the unit
    surface by dividing out sqrt(k0^2 - k.k); the defect being divided
    out must already be small relative to |k|^2, so this only absorbs
    round-off, never an off-surface e.
    """
    x, y, z, w = e.x, e.y, e.z, e.w
    Av, Bv, cr = g.Avec, g.Bvec, g.cross
    k = np.empty(4, complex)
    k[0] = (x * g.A - 1j * z * g.B) - (y * g.Avec2 - 1j * w * g.Bvec2)
    k[1:] = (-(y * g.B + 1j * z) * Av + (x + 1j * w * g.A) * Bv
             + (w - 1j * y) * cr)
    kp = ComplexParameter(k)
    scale = max(1.0, float(np.sum(np.abs(k) ** 2)))
    if check and kp.unit_defect() > max(tol, 1e-8) * scale:
        kp.require_unit(max(tol, 1e-8) * scale)
    if normalize:
        q = k[0] ** 2 - np.sum(k[1:] ** 2)
        if abs(q) < 1e-12:
            raise ConstraintViolation("k0^2 - k.k ~ 0: not normalizable")
        kp = ComplexParameter(k / np.sqrt(q))
    return kp


def family_4d(p: MeasurementPair, y: float, z: float, w: float,
              tol_l=1e-8):
    """Solve the pair's quadratic for x at fixed (y, z, w).

    Returns the 0/1/2 real solutions as (ExpansionCoeffs, ComplexParameter,
    transitivity residual) triples, sorted by residual.
    """
    g = pair_geometry(p)
    q = quad_coeffs_from_geometry(g)
    # a x^2 + (2 b y) x + (c y^2 - alpha z^2 - 2 beta zw - sigma w^2 - 1) = 0
    ca = q.a
    cb = 2.0 * q.b * y
    cc = (q.c * y * y - q.alpha * z * z - 2.0 * q.beta * z * w
          - q.sigma * w * w - 1.0)
    coeff_scale = max(abs(ca), abs(cb), abs(cc), 1.0)
    if abs(ca) <= 1e-14 * coeff_scale:
        if abs(cb) <= 1e-14 * coeff_scale:
            raise NoRealRoot("degenerate linear slice: no x solves the "
                             "constraint at this (y, z, w)")
        xs = [-cc / cb]
    else:
        disc = cb * cb - 4.0 * ca * cc
        if disc < 0.0:
            raise NoRealRoot(f"discriminant {disc:.3e} < 0: "
                             "(y, z, w) off the surface projection")
        sq = np.sqrt(disc)
        xs = [(-cb + sq) / (2.0 * ca), (-cb - sq) / (2.0 * ca)]
        if disc == 0.0:
            xs = xs[:1]

    out = []
    for x in xs:
        e = ExpansionCoeffs(x=float(x), y=float(y), z=float(z), w=float(w))
        k = k_from_expansion(g, e, normalize=True)
        L = mueller_from_k(k)
        res = float(np.linalg.norm(
            apply(L, p.input).as_array() - p.output.as_array()))
        out.append((e, k, res))
    out.sort(key=lambda t: t[2])
    return out


def _transitivity_residual(L, pair):
    return float(np.linalg.norm(
        apply(L, pair.input).as_array() - pair.output.as_array()))


@dataclass
class Candidate:
    e: ExpansionCoeffs
    per_pair_residuals: list
    k_spread: float
    k_list: list = field(default_factory=list)

    @property
    def worst(self):
        return max(self.per_pair_residuals)


@dataclass
class SixReport:
    u: np.ndarray
    candidates: list
    cramer: dict
    rank1_defects: tuple
    condition: float
    shared_solution: bool


def lift(e: ExpansionCoeffs) -> np.ndarray:
    return np.array([e.x ** 2, e.x * e.y, e.y ** 2,
                     e.z ** 2, e.z * e.w, e.w ** 2])


def _k_spread(ks):
    """Max over pairs of min(||ki - kj||, ||ki + kj||)."""
    worst = 0.0
    for i in range(len(ks)):
        for j in range(i + 1, len(ks)):
            d = min(np.linalg.norm(ks[i].k - ks[j].k),
                    np.linalg.norm(ks[i].k + ks[j].k))
            worst = max(worst, float(d))
    return worst


def _enumerate_candidates(u, thresh_scale=1e-8):
    """Sign assignments of (x, y, z, w) consistent with the lifted vector.

    x >= 0 fixes the harmless global sign; the relative sign of the
    (z, w) block against the (x, y) block is genuinely free and is
    enumerated. Near-zero x or z switch to the sqrt fallback, where the
    in-block relative sign must also be enumerated.
    """
    u_xx, u_xy, u_yy, u_zz, u_zw, u_ww = u
    unorm = np.sqrt(max(np.linalg.norm(u), 0.0))
    thresh = thresh_scale * max(unorm, 1.0)

    x = np.sqrt(max(u_xx, 0.0))
    if x > thresh:
        xy_list = [(x, u_xy / x)]
    else:
        y = np.sqrt(max(u_yy, 0.0))
        xy_list = [(0.0, y), (0.0, -y)] if y > 0 else [(0.0, 0.0)]

    z = np.sqrt(max(u_zz, 0.0))
    if z > thresh:
        zw_list = [(z, u_zw / z)]
    else:
        w = np.sqrt(max(u_ww, 0.0))
        zw_list = [(0.0, w), (0.0, -w)] if w > 0 else [(0.0, 0.0)]

    out = []
    for xv, yv in xy_list:
        for zv, wv in zw_list:
            for s in (1.0, -1.0):
                e = ExpansionCoeffs(x=xv, y=yv, z=s * zv, w=s * wv)
                if not any(np.allclose(e.as_array(), o.as_array())
                           for o in out):
                    out.append(e)
    return out


def solve_six(pairs, tol_l=1e-6, tol_r1=TOL_R1, cond_max=COND_MAX) -> SixReport:
    """Reconstruct from six measurements through the lifted linear system.

    The six per-pair quadratics are linear in the monomials
    u = (x^2, xy, y^2, z^2, zw, w^2); the 6x6 system (rows
    (a, 2b, c, -alpha, -2beta, -sigma), right side 1) is solved by dense
    LU, with the Cramer determinants reported for reference. u must be
    rank-1 consistent in each block; the surviving sign assignments are
    validated pair by pair through the transitivity residual. Whether all
    six per-pair parameters agree (a genuinely shared device parameter)
    is reported, not assumed.
    """
    if len(pairs) != 6:
        raise ValueError("exactly six pairs required")
    geoms = [pair_geometry(p) for p in pairs]
    qs = [quad_coeffs_from_geometry(g) for g in geoms]
    M = np.array([[q.a, 2.0 * q.b, q.c, -q.alpha, -2.0 * q.beta, -q.sigma]
                  for q in qs])
    rhs = np.ones(6)

    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > cond_max:
        raise SingularSystem(f"lifted 6x6 system condition {cond:.3e} "
                             f"exceeds {cond_max:.0e}")
    u = np.linalg.solve(M, rhs)

    det = float(np.linalg.det(M))
    cramer = {"det": det}
    for j, name in enumerate(("x2", "xy", "y2", "z2", "zw", "w2")):
        Mj = M.copy()
        Mj[:, j] = rhs
        cramer[name] = float(np.linalg.det(Mj))

    scale = max(1.0, float(np.linalg.norm(u)))
    d1 = abs(u[1] ** 2 - u[0] * u[2])
    d2 = abs(u[4] ** 2 - u[3] * u[5])
    if d1 > tol_r1 * scale ** 2 or d2 > tol_r1 * scale ** 2:
        raise Rank1Violation(
            f"lifted vector is not rank-1 consistent: "
            f"|u_xy^2 - u_xx u_yy| = {d1:.3e}, "
            f"|u_zw^2 - u_zz u_ww| = {d2:.3e} "
            "(no single (x,y,z,w) generates it)")

    candidates = []
    for e in _enumerate_candidates(u):
        residuals = []
        ks = []
        ok = True
        for g, p in zip(geoms, pairs):
            try:
                k = k_from_expansion(g, e, check=True, normalize=True)
                L = mueller_from_k(k)
            except Exception:
                ok = False
                break
            ks.append(k)
            residuals.append(_transitivity_residual(L, p))
        if not ok:
            continue
        candidates.append(Candidate(
            e=e, per_pair_residuals=residuals,
            k_spread=_k_spread(ks), k_list=ks))
    candidates.sort(key=lambda cnd: cnd.worst)

    valid = [cnd for cnd in candidates if cnd.worst <= tol_l]
    report = SixReport(
        u=u, candidates=candidates, cramer=cramer,
        rank1_defects=(float(d1), float(d2)), condition=cond,
        shared_solution=bool(valid),
    )
    if not valid:
        raise NoValidCandidate(
            "no sign assignment passes the transitivity tolerance "
            f"(best worst-pair residual: "
            f"{candidates[0].worst if candidates else np.inf:.3e})",
            report=report)
    return report


@dataclass
class FourReport:
    roots: list           # list of (ExpansionCoeffs, residual norm)
    per_pair_residuals: list
    rank_deficient: list  # Jacobian-degenerate flags aligned with roots
    n_starts: int


def _quad_rows(pairs):
    return np.array([quad_coeffs(p).as_row() for p in pairs])


def solve_four(pairs, seed=0, starts=64, tol=1e-10, max_iter=80,
               tol_l=1e-6) -> FourReport:
    """Reconstruct from four measurements by multistart damped Newton.

    The four simultaneous quadratics are solved from `starts` random
    initial points in a box scaled from the coefficient magnitudes;
    converged roots are deduplicated modulo global sign and validated by
    transitivity on every pair. Deterministic for a fixed seed.
    """
    if len(pairs) != 4:
        raise ValueError("exactly four pairs required")
    rows = _quad_rows(pairs)
    geoms = [pair_geometry(p) for p in pairs]
    for g in geoms:
        if g.collinear:
            raise DegenerateGeometry("collinear pair basis among the four")

    coeff_mag = float(np.median(np.abs(rows[np.abs(rows) > 0]))) if np.any(rows) else 1.0
    box = 3.0 / np.sqrt(max(coeff_mag, 1e-12))
    rng = np.random.default_rng(seed)
    start_pts = rng.uniform(-box, box, size=(starts, 4))

    roots_arr, norms, flags = kernels.newton_multistart(
        np.ascontiguousarray(rows[:, :6]), np.ascontiguousarray(start_pts),
        tol, max_iter)

    roots = []
    rank_flags = []
    pair_res = []
    for i in np.argsort(norms):
        if not flags[i]:
            continue
        e_arr = roots_arr[i]
        # canonical global sign: first component of largest magnitude >= 0
        lead = np.argmax(np.abs(e_arr))
        if e_arr[lead] < 0:
            e_arr = -e_arr
        if any(np.linalg.norm(e_arr - r[0].as_array()) < 1e-6
               for r in roots):
            continue
        e = ExpansionCoeffs(*[float(v) for v in e_arr])
        J = kernels.quad_jacobian(rows[:, :6], e_arr)
        sv = np.linalg.svd(J, compute_uv=False)
        rank_flags.append(bool(sv[-1] <= 1e-8 * max(sv[0], 1.0)))
        res = []
        for g, p in zip(geoms, pairs):
            try:
                L = mueller_from_k(
                    k_from_expansion(g, e, check=True, normalize=True))
                res.append(_transitivity_residual(L, p))
            except Exception:
                res.append(np.inf)
        roots.append((e, float(norms[i])))
        pair_res.append(res)

    if not roots:
        raise NoConvergedRoot(
            f"no start out of {starts} converged below {tol:.0e}")
    return FourReport(roots=roots, per_pair_residuals=pair_res,
                      rank_deficient=rank_flags, n_starts=starts)
