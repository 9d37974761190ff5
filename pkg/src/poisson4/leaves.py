"""Numeric geometry on symplectic leaves: frames, anchors, coefficients, flow.

A regular point of a rank-2 bivector sits on a two-dimensional leaf whose
tangent plane is the image of the evaluated component matrix B.  The leaf
symplectic form is recovered by solving the anchor equation B(alpha) = u and
pairing: omega(u, v) = <alpha, v> = -<beta, u>.  Any two anchor solutions
differ by a combination of dC1, dC2, which annihilates tangent vectors, so
the pairing is well defined.

Two normalizations of the recovered 2-form are reported:

* ``area_coefficient`` - against the Euclidean area form of the leaf,
  evaluated on an orthonormal oriented tangent frame;
* ``coefficient`` - against a coordinate-plane chart: the tangent lifts of
  the two chart directions (the lexicographically last coordinate pair on
  which B acts nondegenerately), ordered so that the closed-form catalogue
  coefficients are reproduced sign for sign on the coordinate-Casimir models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .expr import Expr, Point4
from .poisson import (
    Bivector,
    CasimirPair,
    Covector4,
    Vector4,
    bivector_matrix_at,
    gradient,
    hamiltonian_field,
    rank_at,
)

__all__ = [
    "SingularPointError",
    "NotInImageError",
    "NonFiniteError",
    "LeafFrame",
    "LeafFormResult",
    "Trajectory",
    "leaf_tangent_frame",
    "solve_anchor",
    "leaf_form_coefficient",
    "flow",
]

ANCHOR_TOLERANCE = 1e-9
PAIR_SELECTION_RTOL = 1e-9

COORD_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class SingularPointError(ValueError):
    """The bivector has rank < 2 at the query point (0-dimensional leaf)."""


class NotInImageError(ValueError):
    """The anchor right-hand side is not tangent to the leaf."""


class NonFiniteError(ArithmeticError):
    """A trajectory coordinate left the double-precision range."""


@dataclass(frozen=True)
class LeafFrame:
    """Orthonormal oriented tangent frame with anchor covectors at a point."""

    base: Point4
    u: Vector4
    v: Vector4
    alpha: Covector4
    beta: Covector4


@dataclass(frozen=True)
class LeafFormResult:
    """Recovered leaf symplectic form at a point, in both normalizations."""

    coefficient: float
    chart: tuple[str, str]
    area_coefficient: float
    pairing_alpha_v: float
    pairing_beta_u: float
    frame: LeafFrame

    @property
    def antisymmetry_defect(self) -> float:
        """|<alpha, v> + <beta, u>|; ~0 when the recovery is consistent."""
        return abs(self.pairing_alpha_v + self.pairing_beta_u)


def _matrix_and_rank(b: Bivector, p: Point4) -> np.ndarray:
    if rank_at(b, p) < 2:
        raise SingularPointError(
            f"bivector is singular at {p}; the leaf through it is a point"
        )
    return bivector_matrix_at(b, p)


def solve_anchor(b: Bivector, p: Point4, u) -> Covector4:
    """A least-squares solution alpha of B_p alpha = u with checked residual.

    Any solution is acceptable: the ambiguity lies in span{dC1, dC2}, which
    pairs to zero with tangent vectors.  Raises :class:`NotInImageError` when
    the residual exceeds 1e-9 (relative to ||u|| once ||u|| > 1).
    """
    m = bivector_matrix_at(b, p)
    rhs = u.as_array() if isinstance(u, Vector4) else np.asarray(u, dtype=float)
    alpha, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    residual = float(np.linalg.norm(m @ alpha - rhs))
    if residual > ANCHOR_TOLERANCE * max(1.0, float(np.linalg.norm(rhs))):
        raise NotInImageError(
            f"residual {residual:.3e} solving B(alpha) = u at {p}; "
            "u is not in the image of B"
        )
    return Covector4(tuple(float(a) for a in alpha))


def leaf_tangent_frame(
    b: Bivector, p: Point4, casimirs: Optional[CasimirPair] = None
) -> LeafFrame:
    """Orthonormal oriented basis of the leaf tangent plane at a regular point.

    The two columns of B_p with the largest Gram determinant are selected and
    orthonormalized; when the generating Casimir pair is known the orientation
    is fixed by det(u, v, grad C1, grad C2) > 0.
    """
    m = _matrix_and_rank(b, p)
    best, best_gram = None, -1.0
    for i, j in COORD_PAIRS:
        a, c = m[:, i], m[:, j]
        gram = float(np.dot(a, a) * np.dot(c, c) - np.dot(a, c) ** 2)
        if gram > best_gram:
            best, best_gram = (i, j), gram
    a, c = m[:, best[0]], m[:, best[1]]
    u = a / np.linalg.norm(a)
    w = c - np.dot(c, u) * u
    v = w / np.linalg.norm(w)

    pair = casimirs if casimirs is not None else b.casimirs
    if pair is not None:
        g1 = np.array([e.evaluate(p) for e in gradient(pair.c1)])
        g2 = np.array([e.evaluate(p) for e in gradient(pair.c2)])
        if np.linalg.det(np.column_stack([u, v, g1, g2])) < 0:
            v = -v

    alpha = solve_anchor(b, p, u)
    beta = solve_anchor(b, p, v)
    return LeafFrame(
        base=p,
        u=Vector4(tuple(map(float, u))),
        v=Vector4(tuple(map(float, v))),
        alpha=alpha,
        beta=beta,
    )


def _select_chart_pair(m: np.ndarray) -> tuple[int, int]:
    """Last coordinate pair (i, j) on which the leaf projects regularly.

    The leaf is a graph over the (x^i, x^j) plane exactly where B[i, j] != 0;
    among the admissible pairs the lexicographically last one is chosen, which
    picks (y, z) for the coordinate-Casimir charts and (z, t) for the
    wrinkling chart.
    """
    scale = float(np.max(np.abs(m)))
    chosen = None
    for i, j in COORD_PAIRS:
        if abs(m[i, j]) > PAIR_SELECTION_RTOL * scale:
            chosen = (i, j)
    if chosen is None:  # cannot happen at rank >= 2
        raise SingularPointError("no nondegenerate coordinate plane found")
    return chosen


def leaf_form_coefficient(b: Bivector, p: Point4) -> LeafFormResult:
    """Recover the leaf symplectic form at a regular point.

    Solves the anchor equation on an orthonormal frame, verifies the
    antisymmetry <alpha, v> = -<beta, u>, and converts the frame value into
    the chart normalization by pairing the tangent lifts of the selected
    coordinate directions.
    """
    frame = leaf_tangent_frame(b, p)
    omega_frame = float(frame.alpha.pair(frame.v))
    cross = float(frame.beta.pair(frame.u))

    m = bivector_matrix_at(b, p)
    i, j = _select_chart_pair(m)
    u = frame.u.as_array()
    v = frame.v.as_array()
    # Tangent lifts of d/dx^i and d/dx^j inside span{u, v}: coefficients of
    # (u, v) such that the (i, j)-projection is the identity.
    proj = np.array([[u[i], v[i]], [u[j], v[j]]])
    lifts = np.linalg.solve(proj, np.eye(2))
    (a1, b1), (a2, b2) = lifts[:, 0], lifts[:, 1]
    # omega(lift_j, lift_i) with omega(u, v) = omega_frame
    coefficient = (a2 * b1 - b2 * a1) * omega_frame

    from .poisson import COORD_NAMES

    return LeafFormResult(
        coefficient=float(coefficient),
        chart=(COORD_NAMES[i], COORD_NAMES[j]),
        area_coefficient=omega_frame,
        pairing_alpha_v=omega_frame,
        pairing_beta_u=cross,
        frame=frame,
    )


@dataclass(frozen=True)
class Trajectory:
    """A fixed-step integral curve with conservation diagnostics."""

    points: tuple[Point4, ...]
    dt: float
    conserved: dict[str, tuple[float, ...]]
    drift: dict[str, float]

    def to_csv(self) -> str:
        """CSV export: step,x,y,z,t,C1,C2,H with 17 significant digits."""
        if "C1" not in self.conserved or "C2" not in self.conserved:
            raise ValueError(
                "CSV export needs Casimir diagnostics; integrate with a "
                "bivector that records its Casimir pair"
            )
        lines = ["step,x,y,z,t,C1,C2,H"]
        for idx, p in enumerate(self.points):
            row = [str(idx)]
            row += [format(c, ".17g") for c in p.coords()]
            row += [
                format(self.conserved[key][idx], ".17g")
                for key in ("C1", "C2", "H")
            ]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def flow(
    b: Bivector,
    h: Expr,
    p0: Point4,
    dt: float,
    steps: int,
    casimirs: Optional[CasimirPair] = None,
) -> Trajectory:
    """Classical fixed-step RK4 integration of the Hamiltonian field of h.

    Records C1, C2 (when the Casimir pair is known) and h at every step,
    plus the maximum drift of each from its initial value.  Raises
    :class:`NonFiniteError` if a coordinate leaves double precision.
    """
    if dt < 0:
        raise ValueError("dt must be non-negative")
    if steps < 1:
        raise ValueError("steps must be at least 1")

    field = [e.compiled() for e in hamiltonian_field(b, h)]
    s = p0.s

    def rhs(state: np.ndarray) -> np.ndarray:
        x, y, z, t = state
        return np.array([f(x, y, z, t, s) for f in field])

    pair = casimirs if casimirs is not None else b.casimirs
    trackers = {}
    if pair is not None:
        trackers["C1"] = pair.c1.compiled()
        trackers["C2"] = pair.c2.compiled()
    trackers["H"] = h.compiled()

    state = np.array(p0.coords(), dtype=float)
    points = [p0]
    values = {key: [fn(*state, s)] for key, fn in trackers.items()}

    for _ in range(steps):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * dt * k1)
        k3 = rhs(state + 0.5 * dt * k2)
        k4 = rhs(state + dt * k3)
        state = state + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if not np.all(np.isfinite(state)):
            raise NonFiniteError(
                f"trajectory left double precision after {len(points)} steps"
            )
        points.append(Point4(*map(float, state), s=s))
        for key, fn in trackers.items():
            values[key].append(float(fn(*state, s)))

    conserved = {key: tuple(vals) for key, vals in values.items()}
    drift = {
        key: max(abs(v - vals[0]) for v in vals)
        for key, vals in conserved.items()
    }
    if not all(math.isfinite(d) for d in drift.values()):
        raise NonFiniteError("conserved quantities left double precision")
    return Trajectory(points=tuple(points), dt=dt, conserved=conserved, drift=drift)
