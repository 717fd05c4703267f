"""Independent re-evaluation of the explicit numerical bounds that back the
crystallization argument.

Every claim evaluates its left-hand side from the closed forms in
:mod:`crystalquant.energy_model` (never from a transcribed decimal) and
compares against the recorded bound. The compensated mode re-runs the same
checks with correctly rounded term sums (math.fsum); both modes must agree
on the pass set. Margins are compared against a conservative forward-error
estimate and flagged "thin" when within 10x of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .energy_model import ALPHA_BAR, C6, C_INF, KAPPA, c_n, dn_c_n
from .errors import VerificationFailure

__all__ = [
    "Claim",
    "VerificationReport",
    "check_alpha_one",
    "check_convexity_brackets",
    "check_corollary_convexity",
    "check_mass_lower_bound_chain",
    "check_shape_and_tail",
    "compute_xi",
    "run_all",
]

# Recorded floor for the interior cell area, and ball-radius cap, reused
# across the chain exactly as printed.
MASS_FLOOR = 2.0620e-4
RADIUS_CAP = 3.3644
EQUALITY_TOL = 1e-15

_EPS = 2.0**-52
_DEPTH = 64  # conservative op-count for the forward-error estimate


@dataclass(frozen=True)
class Claim:
    id: str
    description: str
    claimed_bound: float
    direction: str  # one of <=, >=, <, >
    computed: float
    margin: float
    passed: bool
    thin: bool

    def as_dict(self):
        return {
            "id": self.id,
            "description": self.description,
            "claimed_bound": self.claimed_bound,
            "direction": self.direction,
            "computed": self.computed,
            "margin": self.margin,
            "passed": self.passed,
            "thin": self.thin,
        }


@dataclass(frozen=True)
class VerificationReport:
    claims: tuple[Claim, ...]
    all_pass: bool
    precision_mode: str

    def as_dict(self):
        return {
            "schema": "crystalquant/verification-report/v1",
            "precision_mode": self.precision_mode,
            "all_pass": self.all_pass,
            "claim_count": len(self.claims),
            "claims": [c.as_dict() for c in self.claims],
        }


def _sum_for(mode):
    if mode == "compensated":
        return math.fsum
    if mode == "double":
        return sum
    raise ValueError(f"unknown precision mode {mode!r}")


_CMP = {
    "<=": lambda x, b: x <= b,
    ">=": lambda x, b: x >= b,
    "<": lambda x, b: x < b,
    ">": lambda x, b: x > b,
}


def _claim(cid, desc, computed, direction, bound):
    computed = float(computed)
    bound = float(bound)
    margin = abs(computed - bound)
    err_est = _DEPTH * _EPS * max(1.0, abs(computed), abs(bound))
    return Claim(
        id=cid,
        description=desc,
        claimed_bound=bound,
        direction=direction,
        computed=computed,
        margin=margin,
        passed=_CMP[direction](computed, bound),
        thin=margin < 10.0 * err_est,
    )


# Term-list forms of the tangent-gap functions, so the compensated mode can
# re-sum them exactly.

def _h_ab(s, m, n):
    a = ALPHA_BAR
    return s([
        C6 / (1.0 - a) * m**a if m > 0.0 else 0.0,
        c_n(n) * m * m,
        -C6 * (2.0 - a) / (1.0 - a) * m,
        -KAPPA * (n - 6.0),
    ])


def _dm_h_ab(s, m, n):
    a = ALPHA_BAR
    cn = C_INF if n == math.inf else c_n(n)
    return s([
        a / (1.0 - a) * C6 * m ** (a - 1.0),
        2.0 * cn * m,
        -C6 * (2.0 - a) / (1.0 - a),
    ])


def _h1(s, m, n):
    return s([c_n(n) * m * m, -C6 * m, -C6 * m * math.log(m), -KAPPA * (n - 6.0)])


def _dm_h1(s, m, n):
    return s([2.0 * c_n(n) * m, -2.0 * C6, -C6 * math.log(m)])


def check_convexity_brackets(mode="double"):
    """Sign brackets around the largest critical point of the tangent gap at
    the threshold exponent, for 3-, 4-, 5- and 7-gons, plus the floor on the
    gap value between the brackets."""
    s = _sum_for(mode)
    a = ALPHA_BAR
    m1 = {3: 0.764, 4: 0.946, 5: 0.98705, 7: 1.00516}
    m2 = {3: 0.765, 4: 0.947, 5: 0.9871, 7: 1.00518}
    slope_lo = {3: -8e-6, 4: -2e-5, 5: -1e-6, 7: -4e-7}
    slope_hi = {3: 3e-5, 4: 8e-6, 5: 4e-7, 7: 1e-7}
    gap_floor = {3: 2e-2, 4: 3e-3, 5: 5e-4, 7: 2e-4}
    claims = []
    for n in (3, 4, 5, 7):
        claims.append(_claim(
            f"brackets.slope_lo.n{n}",
            f"gap slope at m={m1[n]}, n={n} stays below {slope_lo[n]:g}",
            _dm_h_ab(s, m1[n], n), "<=", slope_lo[n],
        ))
        claims.append(_claim(
            f"brackets.slope_hi.n{n}",
            f"gap slope at m={m2[n]}, n={n} stays above {slope_hi[n]:g}",
            _dm_h_ab(s, m2[n], n), ">=", slope_hi[n],
        ))
        sandwich = s([
            C6 / (1.0 - a) * m1[n] ** a,
            c_n(n) * m1[n] ** 2,
            -C6 * (2.0 - a) / (1.0 - a) * m2[n],
            -KAPPA * (n - 6.0),
        ])
        claims.append(_claim(
            f"brackets.gap_floor.n{n}",
            f"gap value at its local minimum for n={n} exceeds {gap_floor[n]:g}",
            sandwich, ">=", gap_floor[n],
        ))
    claims.append(_claim(
        "brackets.tangency",
        "gap vanishes at the reference cell (m, n) = (1, 6)",
        abs(_h_ab(s, 1.0, 6)), "<", EQUALITY_TOL,
    ))
    claims.append(_claim(
        "brackets.critical_slope",
        "gap slope vanishes at the reference cell (m, n) = (1, 6)",
        abs(_dm_h_ab(s, 1.0, 6)), "<", EQUALITY_TOL,
    ))
    return claims


def check_shape_and_tail(mode="double"):
    """One-local-minimum shape of the gap (slope cap at m = 1/2) and the
    large-n growth of the gap minimum."""
    s = _sum_for(mode)
    claims = [
        _claim(
            "shape.half_slope_cap",
            "limit slope cap at m = 1/2: (ln 2 - 2) c6 + c3 < -0.017",
            s([(math.log(2.0) - 2.0) * C6, c_n(3)]), "<", -0.017,
        ),
        _claim(
            "shape.kappa_negative",
            "edge-count sensitivity of the minimal moment is negative at n = 6",
            dn_c_n(6), "<", 0.0,
        ),
        _claim(
            "tail.slope_at_1_limit",
            "many-sided-limit gap slope at m = 1 is below -0.0024",
            _dm_h_ab(s, 1.0, math.inf), "<", -0.0024,
        ),
        _claim(
            "tail.slope_at_3half_limit",
            "many-sided-limit gap slope at m = 3/2 is above 0.12",
            _dm_h_ab(s, 1.5, math.inf), ">", 0.12,
        ),
        _claim(
            "tail.growth_beyond_7",
            "(3/2)^2 dn_c_n(7) - kappa exceeds 1.5e-5",
            s([1.5 * 1.5 * dn_c_n(7), -KAPPA]), ">", 1.5e-5,
        ),
        _claim(
            "shape.critical_slope_at_6",
            "gap slope vanishes at m = 1 for hexagons",
            abs(_dm_h_ab(s, 1.0, 6)), "<", EQUALITY_TOL,
        ),
    ]
    return claims


def _hex_diameter(area_):
    return 2.0**1.5 * 3.0**-0.75 * math.sqrt(area_)


def _r_tilde(s, area_):
    a = ALPHA_BAR
    q = 12.0 * C6 * s([area_ ** (a - 1.0) / (1.0 - a), area_])
    return 0.5 * math.sqrt(q) + 0.5 * math.sqrt(q + 4.0 * math.sqrt(q) * _hex_diameter(area_))


def _theta(s, lam):
    a = ALPHA_BAR
    return (1.0 + lam) * s([1.0, lam**a, -((1.0 + lam) ** a)]) / lam**a


def _theta_slope(s, lam):
    a = ALPHA_BAR
    return lam ** (-1.0 - a) * s([
        (1.0 - a) * lam,
        lam ** (1.0 + a),
        (1.0 + lam) ** a * (a - lam),
        -a,
    ])


def check_mass_lower_bound_chain(mode="double"):
    """Chain yielding the floor on the area of optimal cells: empty-ball
    radius cap, merging-penalty minimum, interior floor, boundary floor,
    and the resulting cell-diameter cap."""
    s = _sum_for(mode)
    a = ALPHA_BAR
    claims = [
        _claim(
            "mass_chain.ball_radius",
            "empty-ball radius bound evaluated at hexagon area 0.52 stays below 3.3644",
            _r_tilde(s, 0.52), "<", RADIUS_CAP,
        ),
    ]
    grid = [0.1 + k * (1.9 / 4000.0) for k in range(4001)]
    best = min(grid, key=lambda x: _r_tilde(s, x))
    claims.append(_claim(
        "mass_chain.ball_radius_argmin",
        "radius bound is minimized near hexagon area 0.52 (informational)",
        abs(best - 0.52), "<=", 0.13,
    ))
    lam1, lam2 = 0.160764, 0.160767
    claims.append(_claim(
        "mass_chain.theta_slope_lo",
        f"merging-penalty slope at {lam1} is below -2e-6",
        _theta_slope(s, lam1), "<", -2e-6,
    ))
    claims.append(_claim(
        "mass_chain.theta_slope_hi",
        f"merging-penalty slope at {lam2} is above 2e-6",
        _theta_slope(s, lam2), ">", 2e-6,
    ))
    band_hi = lam1 ** (-1.0 - a) * s([
        (1.0 - a) * lam2,
        lam2 ** (1.0 + a),
        (1.0 + lam2) ** a * (a - lam1),
        -a,
    ])
    band_lo = lam1 ** (-1.0 - a) * s([
        (1.0 - a) * lam1,
        lam1 ** (1.0 + a),
        (1.0 + lam1) ** a * (a - lam2),
        -a,
    ])
    claims.append(_claim(
        "mass_chain.theta_band_hi",
        "two-sided slope estimate over the bracket stays below 6.2e-5",
        band_hi, "<", 6.2e-5,
    ))
    claims.append(_claim(
        "mass_chain.theta_band_lo",
        "two-sided slope estimate over the bracket stays above -6.3e-5",
        band_lo, ">", -6.3e-5,
    ))
    theta_floor = s([_theta(s, lam1), -(lam2 - lam1) * 6.3e-5])
    claims.append(_claim(
        "mass_chain.theta_min_floor",
        "merging penalty at its minimum is at least 0.85482",
        theta_floor, ">=", 0.85482,
    ))
    mbar = ((1.0 / RADIUS_CAP**2) * (C6 / (1.0 - a)) * 0.85482) ** (1.0 / (1.0 - a))
    claims.append(_claim(
        "mass_chain.interior_floor",
        "interior cell-area floor exceeds 2.0620e-4",
        mbar, ">", MASS_FLOOR,
    ))
    mb = (
        (1.0 - a) / (C6 * a) * s([
            math.sqrt(32.0),
            math.sqrt(8.0) * RADIUS_CAP,
            a / (1.0 - a) * C6 * MASS_FLOOR ** (a - 1.0),
        ])
    ) ** (1.0 / (a - 1.0))
    claims.append(_claim(
        "mass_chain.boundary_floor",
        "boundary cell-area floor exceeds 1.5212e-5",
        mb, ">", 1.5212e-5,
    ))
    d0 = 2.0 * math.sqrt(s([8.0 * RADIUS_CAP**2, a / (1.0 - a) * C6 * mb ** (a - 1.0)]))
    claims.append(_claim(
        "mass_chain.cell_diameter_cap",
        "cell-diameter cap evaluates finite and positive",
        d0, ">", 0.0,
    ))
    return claims


def check_corollary_convexity(mode="double"):
    """The tangent gap is positive at the interior area floor for 3-, 4- and
    5-gons, which upgrades the floor into the convexity inequality."""
    s = _sum_for(mode)
    floors = {3: 7e-7, 4: 8e-4, 5: 1e-3}
    claims = [
        _claim(
            f"corollary.gap_at_floor.n{n}",
            f"tangent gap at the area floor for n={n} exceeds {floors[n]:g}",
            _h_ab(s, MASS_FLOOR, n), ">", floors[n],
        )
        for n in (3, 4, 5)
    ]
    claims.append(_claim(
        "corollary.tangency_origin",
        "tangent gap vanishes at zero mass for hexagons",
        abs(_h_ab(s, 0.0, 6)), "<", EQUALITY_TOL,
    ))
    return claims


def check_alpha_one(mode="double"):
    """Exponent-one variant: critical-slope cap, slope floor above m = 1,
    growth in n, sign brackets, gap floors, and the merging chain under the
    bounded-neighbour ansatz."""
    s = _sum_for(mode)
    claims = [
        _claim(
            "alpha1.critical_slope_cap",
            "slope at the critical mass is below -0.019",
            s([-C6, -C6 * math.log(C6 / (2.0 * c_n(3)))]), "<", -0.019,
        ),
        _claim(
            "alpha1.slope_above_one",
            "slope at m = 1.05 stays above 0.005 for every order",
            s([2.0 * C_INF * 1.05, -2.0 * C6, -C6 * math.log(1.05)]), ">", 0.005,
        ),
        _claim(
            "alpha1.growth_beyond_7",
            "1.05^2 dn_c_n(7) - kappa exceeds 4e-4",
            s([1.05**2 * dn_c_n(7), -KAPPA]), ">", 4e-4,
        ),
    ]
    m1 = {3: 0.66, 4: 0.92, 5: 0.981, 7: 1.007}
    m2 = {3: 0.661, 4: 0.93, 5: 0.982, 7: 1.0075}
    slope_lo = {3: -7e-5, 4: -7e-4, 5: -1e-4, 7: -5e-5}
    slope_hi = {3: 6e-5, 4: 8e-4, 5: 4e-5, 7: 2e-5}
    gap_floor = {3: 0.01, 4: 9e-4, 5: 2e-4, 7: 1e-4}
    for n in (3, 4, 5, 7):
        claims.append(_claim(
            f"alpha1.slope_lo.n{n}",
            f"limit-gap slope at m={m1[n]}, n={n} stays below {slope_lo[n]:g}",
            _dm_h1(s, m1[n], n), "<=", slope_lo[n],
        ))
        claims.append(_claim(
            f"alpha1.slope_hi.n{n}",
            f"limit-gap slope at m={m2[n]}, n={n} stays above {slope_hi[n]:g}",
            _dm_h1(s, m2[n], n), ">=", slope_hi[n],
        ))
        sandwich = s([
            c_n(n) * m1[n] ** 2,
            -C6 * m2[n],
            -C6 * m2[n] * math.log(m2[n]),
            -KAPPA * (n - 6.0),
        ])
        claims.append(_claim(
            f"alpha1.gap_floor.n{n}",
            f"limit-gap local minimum for n={n} exceeds {gap_floor[n]:g}",
            sandwich, ">=", gap_floor[n],
        ))
    lam = 4.0 / 19.0
    claims.append(_claim(
        "alpha1.merge_psi_cap",
        "lam - (lam+1) ln(lam+1) at lam = 4/19 is below -0.02",
        s([lam, -(lam + 1.0) * math.log(lam + 1.0)]), "<", -0.02,
    ))
    claims.append(_claim(
        "alpha1.merge_phi_cap",
        "ln(lam+1)/lam - 3/2 at lam = 4/19 is below -0.59",
        s([math.log(lam + 1.0) / lam, -1.5]), "<", -0.59,
    ))
    mbar1 = math.pi * C6 / 2.0 * s([
        (1.0 - lam) / 2.0 * math.log(lam),
        (lam + 1.0) ** 2 / (2.0 * lam) * math.log(lam + 1.0),
    ])
    claims.append(_claim(
        "alpha1.mass_floor",
        "ansatz mass floor at lam = 4/19 exceeds 0.0125",
        mbar1, ">", 0.0125,
    ))
    floors = {3: 4.2e-3, 4: 5.0e-3, 5: 5.9e-3}
    for n in (3, 4, 5):
        claims.append(_claim(
            f"alpha1.gap_at_mass_floor.n{n}",
            f"limit gap at the ansatz floor for n={n} exceeds {floors[n]:g}",
            _h1(s, mbar1, n), ">", floors[n],
        ))
    claims.append(_claim(
        "alpha1.tangency",
        "limit gap vanishes at the reference cell (m, n) = (1, 6)",
        abs(_h1(s, 1.0, 6)), "<", EQUALITY_TOL,
    ))
    return claims


def _largest_slope_root(s, n, lo=1e-4, hi=1.7):
    """Largest root of the gap slope in m, by scan plus bisection."""
    grid = 3000
    prev_m = lo
    prev_v = _dm_h_ab(s, lo, n)
    last = None
    for k in range(1, grid + 1):
        m = lo + (hi - lo) * k / grid
        v = _dm_h_ab(s, m, n)
        if prev_v < 0.0 <= v or prev_v <= 0.0 < v:
            last = (prev_m, m)
        prev_m, prev_v = m, v
    if last is None:
        raise VerificationFailure(f"no slope root found for n={n}")
    a, b = last
    for _ in range(200):
        mid = 0.5 * (a + b)
        if _dm_h_ab(s, mid, n) < 0.0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def _xi_parts(mode="double"):
    """The improved quadratic lower-bound constant, by the proof recipe."""
    s = _sum_for(mode)
    a = ALPHA_BAR

    def bracket(m):
        return s([
            C_INF / 2.0 * m * m,
            (C_INF - C6 * (2.0 - a) / (1.0 - a)) * m,
            C6 / (1.0 - a) * m**a,
            3.0 * KAPPA,
            -C_INF / 2.0,
        ])

    # quadratic-plus-power expression goes positive for good beyond its
    # largest root; locate it and back off to a safe M > 2
    lo_m, hi_m = MASS_FLOOR, 50.0
    grid = 5000
    last = None
    prev_m, prev_v = lo_m, bracket(lo_m)
    for k in range(1, grid + 1):
        m = lo_m + (hi_m - lo_m) * k / grid
        v = bracket(m)
        if prev_v < 0.0 <= v:
            last = (prev_m, m)
        prev_m, prev_v = m, v
    if last is None:
        root = lo_m
    else:
        x, y = last
        for _ in range(200):
            mid = 0.5 * (x + y)
            if bracket(mid) < 0.0:
                x = mid
            else:
                y = mid
        root = y
    big_m = max(2.0, root) + 0.5
    audit = min(bracket(big_m + k * (1000.0 - big_m) / 4000.0) for k in range(4001))
    if audit < 0.0:
        raise VerificationFailure("quadratic-plus-power expression dips below zero beyond M")

    orders = [n for n in range(3, 65) if n != 6]
    p1 = math.inf
    for n in orders:
        m_t = _largest_slope_root(s, n)
        p1 = min(p1, _h_ab(s, m_t, n))
    p2 = min(_h_ab(s, MASS_FLOOR, n) for n in orders)
    if p1 <= 0.0 or p2 <= 0.0:
        raise VerificationFailure("gap minima are not positive")

    # quadratic pinch at the hexagon well: l = half the smallest second
    # derivative over [1-r, 1+r], with r shrunk until a dense sample obeys it
    r = 0.25
    ell = None
    for _ in range(20):
        ell_r = 0.5 * s([-a * C6 * (1.0 - r) ** (a - 2.0), 2.0 * C6])
        if ell_r > 0.0:
            ok = True
            for k in range(2001):
                m = 1.0 - r + 2.0 * r * k / 2000.0
                if _h_ab(s, m, 6) < ell_r * (m - 1.0) ** 2 - 1e-15:
                    ok = False
                    break
            if ok:
                ell = ell_r
                break
        r *= 0.5
    if ell is None:
        raise VerificationFailure("no quadratic pinch radius found at the hexagon well")

    p = min(
        _h_ab(s, MASS_FLOOR, 6),
        _h_ab(s, 1.0 - r, 6),
        _h_ab(s, 1.0 + r, 6),
        _h_ab(s, big_m, 6),
    )
    if p <= 0.0:
        raise VerificationFailure("hexagon-row endpoint values are not positive")

    xi = min(C_INF / 2.0, min(p1, p2) / (big_m - 1.0) ** 2, ell, p / (big_m - 1.0) ** 2)
    if xi <= 0.0:
        raise VerificationFailure("quadratic lower-bound constant is not positive")
    return xi, big_m, r, ell, p1, p2


def compute_xi(mode="double") -> float:
    """Constant xi > 0 with tangent gap >= xi (m-1)^2 for m >= the interior
    floor and every integer order n >= 3."""
    return _xi_parts(mode)[0]


def _xi_claims(mode="double"):
    s = _sum_for(mode)
    xi, big_m, _r, _ell, _p1, _p2 = _xi_parts(mode)
    claims = [
        _claim("xi.positive", "quadratic lower-bound constant is positive", xi, ">", 0.0),
        _claim(
            "xi.capped_by_limit",
            "constant never exceeds half the many-sided moment limit",
            xi, "<=", C_INF / 2.0,
        ),
    ]
    worst = math.inf
    samples = 1501
    lo, hi = MASS_FLOOR, 3.0 * big_m
    for n in list(range(3, 65)):
        for k in range(samples):
            m = lo + (hi - lo) * k / (samples - 1)
            gap = _h_ab(s, m, n) - xi * (m - 1.0) ** 2
            if gap < worst:
                worst = gap
    claims.append(_claim(
        "xi.certificate_audit",
        "sampled tangent gap always dominates xi (m-1)^2",
        worst, ">=", 0.0,
    ))
    return claims


def run_all(precision_mode="double") -> VerificationReport:
    """Concatenate every check; deterministic and pure."""
    claims = []
    claims += check_convexity_brackets(precision_mode)
    claims += check_shape_and_tail(precision_mode)
    claims += check_mass_lower_bound_chain(precision_mode)
    claims += check_corollary_convexity(precision_mode)
    claims += check_alpha_one(precision_mode)
    claims += _xi_claims(precision_mode)
    return VerificationReport(
        claims=tuple(claims),
        all_pass=all(c.passed for c in claims),
        precision_mode=precision_mode,
    )
