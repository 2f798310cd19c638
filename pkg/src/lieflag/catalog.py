"""The fifteen left-invariant metrics on simply connected 3-dimensional Lie groups.

Each row carries its brackets, metric template, parameter conditions and
the tabulated Levi-Civita connection. ``verify_table_row`` diffs the
tabulated connection against the Koszul computation, which is treated as
ground truth; ``classify`` finds the rows admitting a parallel
left-invariant field, i.e. a Berwald-type Randers or Matsumoto deformation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import InvalidInputError
from .finsler import DEFAULT_SEED, Kind, admissibility_check
from .lie_core import (
    FRAME,
    IDENTITY_TOL,
    RANK_TOL,
    InnerProduct,
    LieAlgebra,
    koszul_connection,
    metric_compatibility_residual,
    parallel_fields,
    torsion_residual,
    validate_lie_algebra,
)

PARAM_NAMES = ("lambda", "mu", "nu", "c")
SAMPLE_RANGE = (0.1, 10.0)


def _v(x=0.0, y=0.0, z=0.0):
    return (x, y, z)


def _conn(xx=None, xy=None, xz=None, yx=None, yy=None, yz=None, zx=None, zy=None, zz=None) -> np.ndarray:
    rows = (xx, xy, xz, yx, yy, yz, zx, zy, zz)
    return np.array([r if r is not None else _v() for r in rows], dtype=float).reshape(3, 3, 3)


@dataclass(frozen=True)
class Condition:
    text: str
    holds: Callable[[Mapping[str, float]], bool]


@dataclass(frozen=True)
class CatalogCase:
    id: int
    group: str
    brackets_text: tuple[tuple[str, str, str], ...]  # coordinates of [x,y], [x,z], [y,z]
    metric_text: tuple[tuple[str, str, str], ...]
    params: tuple[str, ...]  # free parameters supplied by the caller
    fixed: Mapping[str, float]  # parameters pinned by the row (c = 0, ...)
    conditions: tuple[Condition, ...]
    structure: Callable[[Mapping[str, float]], np.ndarray]
    metric: Callable[[Mapping[str, float]], np.ndarray]
    expected: Callable[[Mapping[str, float]], np.ndarray]
    sampler: Callable[[np.random.Generator], dict]
    derived: Mapping[str, Callable[[Mapping[str, float]], float]] = field(default_factory=dict)
    inert: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def conditions_text(self) -> list[str]:
        return [c.text for c in self.conditions]


def _logu(rng: np.random.Generator) -> float:
    lo, hi = SAMPLE_RANGE
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def _rejection(draw: Callable[[np.random.Generator], dict], ok: Callable[[dict], bool]):
    def sampler(rng: np.random.Generator) -> dict:
        for _ in range(10_000):
            p = draw(rng)
            if ok(p):
                return p
        raise RuntimeError("parameter sampler failed to hit the condition set")

    return sampler


def _draw(*names):
    return lambda rng: {n: _logu(rng) for n in names}


def _gc_structure(c):
    return np.array([[0, 0, 0], [0, -1, 0], [c, -2, 0]], dtype=float)


GC_BRACKETS = (("0", "0", "0"), ("0", "-1", "0"), ("c", "-2", "0"))
GC_NAME = "non-unimodular G_c"


def _diag_text(a, b, c):
    return ((a, "0", "0"), ("0", b, "0"), ("0", "0", c))


def _build() -> dict[int, CatalogCase]:
    cases: list[CatalogCase] = []
    pos = lambda name: Condition(f"{name}>0", lambda q, n=name: q[n] > 0)

    cases.append(CatalogCase(
        id=1, group="R^3",
        brackets_text=(("0", "0", "0"),) * 3,
        metric_text=_diag_text("1", "1", "1"),
        params=(), fixed={}, conditions=(),
        structure=lambda q: np.zeros((3, 3)),
        metric=lambda q: np.eye(3),
        expected=lambda q: _conn(),
        sampler=lambda rng: {},
    ))

    def e2(q):
        lam = q["lambda"]
        return _conn(xy=_v(z=0.5), xz=_v(y=-1 / (2 * lam)), yx=_v(z=-0.5), yz=_v(x=1 / (2 * lam)),
                     zx=_v(y=-1 / (2 * lam)), zy=_v(x=1 / (2 * lam)))

    cases.append(CatalogCase(
        id=2, group="Heisenberg Nil",
        brackets_text=(("0", "0", "1"), ("0", "0", "0"), ("0", "0", "0")),
        metric_text=_diag_text("lambda", "lambda", "1"),
        params=("lambda",), fixed={}, conditions=(pos("lambda"),),
        structure=lambda q: np.array([[0, 0, 1], [0, 0, 0], [0, 0, 0]], dtype=float),
        metric=lambda q: np.diag([q["lambda"], q["lambda"], 1.0]),
        expected=e2, sampler=_draw("lambda"),
    ))

    sol = np.array([[0, 0, 0], [-1, 0, 0], [0, 1, 0]], dtype=float)
    sol_text = (("0", "0", "0"), ("-1", "0", "0"), ("0", "1", "0"))

    def e3(q):
        nu = q["nu"]
        return _conn(xx=_v(z=1 / nu), xz=_v(x=-1), yy=_v(z=-1 / nu), yz=_v(y=1))

    cases.append(CatalogCase(
        id=3, group="solvable Sol", brackets_text=sol_text, metric_text=_diag_text("1", "1", "nu"),
        params=("nu",), fixed={}, conditions=(pos("nu"),),
        structure=lambda q: sol, metric=lambda q: np.diag([1.0, 1.0, q["nu"]]),
        expected=e3, sampler=_draw("nu"),
    ))

    def e4(q):
        mu, nu = q["mu"], q["nu"]
        k = 1 / (1 - mu)
        return _conn(xx=_v(z=1 / nu), xz=_v(x=mu * k, y=-k), yy=_v(z=-mu / nu), yz=_v(x=mu * k, y=-mu * k),
                     zx=_v(x=k, y=-k), zy=_v(x=mu * k, y=-k))

    cases.append(CatalogCase(
        id=4, group="solvable Sol", brackets_text=sol_text,
        metric_text=(("1", "1", "0"), ("1", "mu", "0"), ("0", "0", "nu")),
        params=("mu", "nu"), fixed={},
        conditions=(Condition("mu>1", lambda q: q["mu"] > 1), pos("nu")),
        structure=lambda q: sol,
        metric=lambda q: np.array([[1, 1, 0], [1, q["mu"], 0], [0, 0, q["nu"]]], dtype=float),
        expected=e4, sampler=_rejection(_draw("mu", "nu"), lambda q: q["mu"] > 1),
    ))

    def e5(q):
        mu, nu = q["mu"], q["nu"]
        return _conn(xy=_v(z=(1 - mu) / (2 * nu)), xz=_v(y=(mu - 1) / (2 * mu)), yx=_v(z=(1 - mu) / (2 * nu)),
                     yz=_v(x=(mu - 1) / 2), zx=_v(y=-(1 + mu) / (2 * mu)), zy=_v(x=(1 + mu) / 2))

    cases.append(CatalogCase(
        id=5, group="solvable E~0(2)",
        brackets_text=(("0", "0", "0"), ("0", "1", "0"), ("-1", "0", "0")),
        metric_text=_diag_text("1", "mu", "nu"),
        params=("mu", "nu"), fixed={},
        conditions=(Condition("0<mu<=1", lambda q: 0 < q["mu"] <= 1), pos("nu")),
        structure=lambda q: np.array([[0, 0, 0], [0, 1, 0], [-1, 0, 0]], dtype=float),
        metric=lambda q: np.diag([1.0, q["mu"], q["nu"]]),
        expected=e5, sampler=_rejection(_draw("mu", "nu"), lambda q: q["mu"] <= 1),
    ))

    def e6(q):
        lam, mu, nu = q["lambda"], q["mu"], q["nu"]
        s = lam + mu + nu
        return _conn(xy=_v(z=s / nu), xz=_v(y=-s / mu), yx=_v(z=(lam + mu - nu) / nu),
                     yz=_v(x=(-lam - mu + nu) / lam), zx=_v(y=(-lam + mu - nu) / mu), zy=_v(x=(lam - mu + nu) / lam))

    cases.append(CatalogCase(
        id=6, group="PSL~(2,R)",
        brackets_text=(("0", "0", "2"), ("0", "-2", "0"), ("-2", "0", "0")),
        metric_text=_diag_text("lambda", "mu", "nu"),
        params=("lambda", "mu", "nu"), fixed={},
        conditions=(Condition("mu>=nu>0", lambda q: q["mu"] >= q["nu"] > 0), pos("lambda")),
        structure=lambda q: np.array([[0, 0, 2], [0, -2, 0], [-2, 0, 0]], dtype=float),
        metric=lambda q: np.diag([q["lambda"], q["mu"], q["nu"]]),
        expected=e6, sampler=_rejection(_draw("lambda", "mu", "nu"), lambda q: q["mu"] >= q["nu"]),
    ))

    def e7(q):
        lam, mu, nu = q["lambda"], q["mu"], q["nu"]
        return _conn(xy=_v(z=(-lam + mu + nu) / (2 * nu)), xz=_v(y=(lam - mu - nu) / (2 * mu)),
                     yx=_v(z=(-lam + mu - nu) / (2 * nu)), yz=_v(x=(lam - mu + nu) / (2 * lam)),
                     zx=_v(y=(lam + mu - nu) / (2 * mu)), zy=_v(x=(-lam - mu + nu) / (2 * lam)))

    def s7(rng):
        lam, mu, nu = sorted((_logu(rng) for _ in range(3)), reverse=True)
        return {"lambda": lam, "mu": mu, "nu": nu}

    cases.append(CatalogCase(
        id=7, group="SU(2)",
        brackets_text=(("0", "0", "1"), ("0", "-1", "0"), ("1", "0", "0")),
        metric_text=_diag_text("lambda", "mu", "nu"),
        params=("lambda", "mu", "nu"), fixed={},
        conditions=(Condition("lambda>=mu>=nu>0", lambda q: q["lambda"] >= q["mu"] >= q["nu"] > 0),),
        structure=lambda q: np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]], dtype=float),
        metric=lambda q: np.diag([q["lambda"], q["mu"], q["nu"]]),
        expected=e7, sampler=s7,
    ))

    def e8(q):
        nu = q["nu"]
        return _conn(xx=_v(z=1 / nu), xz=_v(x=-1), yy=_v(z=1 / nu), yz=_v(y=-1))

    cases.append(CatalogCase(
        id=8, group="non-unimodular G_I",
        brackets_text=(("0", "0", "0"), ("-1", "0", "0"), ("0", "-1", "0")),
        metric_text=_diag_text("1", "1", "nu"),
        params=("nu",), fixed={}, conditions=(pos("nu"),),
        structure=lambda q: np.array([[0, 0, 0], [-1, 0, 0], [0, -1, 0]], dtype=float),
        metric=lambda q: np.diag([1.0, 1.0, q["nu"]]),
        expected=e8, sampler=_draw("nu"),
    ))

    def e9(q, c=None):
        c = q["c"] if c is None else c
        mu, nu = q["mu"], q["nu"]
        return _conn(xy=_v(z=(mu - c) / (2 * nu)), xz=_v(y=(c - mu) / (2 * mu)), yx=_v(z=(mu - c) / (2 * nu)),
                     yy=_v(z=2 * mu / nu), yz=_v(x=(c - mu) / 2, y=-2), zx=_v(y=(c + mu) / (2 * mu)),
                     zy=_v(x=-(c + mu) / 2))

    gc = lambda q: _gc_structure(q["c"])
    diag_mu = lambda q: np.diag([1.0, q["mu"], q["nu"]])

    cases.append(CatalogCase(
        id=9, group=GC_NAME, brackets_text=GC_BRACKETS, metric_text=_diag_text("1", "mu", "nu"),
        params=("c", "mu", "nu"), fixed={},
        conditions=(Condition("0<mu<=|c|", lambda q: 0 < q["mu"] <= abs(q["c"])), pos("nu")),
        structure=gc, metric=diag_mu, expected=e9,
        sampler=_rejection(_draw("c", "mu", "nu"), lambda q: q["mu"] <= abs(q["c"])),
    ))

    def e10(q):
        mu, nu = q["mu"], q["nu"]
        return _conn(xy=_v(z=mu / (2 * nu)), xz=_v(y=-0.5), yx=_v(z=mu / (2 * nu)), yy=_v(z=2 * mu / nu),
                     yz=_v(x=-mu / 2, y=-2), zx=_v(y=0.5), zy=_v(x=-mu / 2))

    cases.append(CatalogCase(
        id=10, group=GC_NAME, brackets_text=GC_BRACKETS, metric_text=_diag_text("1", "mu", "nu"),
        params=("mu", "nu"), fixed={"c": 0.0},
        conditions=(pos("mu"), pos("nu"), Condition("c=0", lambda q: q["c"] == 0)),
        structure=gc, metric=diag_mu, expected=e10, sampler=_draw("mu", "nu"),
    ))

    def e11(q):
        nu = q["nu"]
        return _conn(xx=_v(z=1 / (2 * nu)), xy=_v(z=1 / nu), xz=_v(y=-1), yx=_v(z=1 / nu), yy=_v(z=2 / nu),
                     yz=_v(y=-2))

    cases.append(CatalogCase(
        id=11, group=GC_NAME, brackets_text=GC_BRACKETS,
        metric_text=(("1", "1/2", "0"), ("1/2", "1", "0"), ("0", "0", "nu")),
        params=("nu",), fixed={"c": 0.0},
        conditions=(pos("nu"), Condition("c=0", lambda q: q["c"] == 0)),
        structure=gc, metric=lambda q: np.array([[1, 0.5, 0], [0.5, 1, 0], [0, 0, q["nu"]]], dtype=float),
        expected=e11, sampler=_draw("nu"),
    ))

    def e12(q):
        mu, nu = q["mu"], q["nu"]
        return _conn(xy=_v(z=(mu - 1) / (2 * nu)), xz=_v(y=(1 - mu) / (2 * mu)), yx=_v(z=(mu - 1) / (2 * nu)),
                     yy=_v(z=2 * mu / nu), yz=_v(x=(1 - mu) / 2, y=-2), zx=_v(y=(1 + mu) / (2 * mu)),
                     zy=_v(x=-(1 + mu) / 2))

    cases.append(CatalogCase(
        id=12, group=GC_NAME, brackets_text=GC_BRACKETS, metric_text=_diag_text("1", "mu", "nu"),
        params=("mu", "nu"), fixed={"c": 1.0},
        conditions=(pos("nu"), Condition("c=1", lambda q: q["c"] == 1),
                    Condition("0<mu<=1", lambda q: 0 < q["mu"] <= 1)),
        structure=gc, metric=diag_mu, expected=e12,
        sampler=_rejection(_draw("mu", "nu"), lambda q: q["mu"] <= 1),
        notes=("parameter region overlaps case 9 at c=1 (0<mu<=|c|); both rows are kept",),
    ))

    def e13(q):
        lam, nu = q["lambda"], q["nu"]
        k = 1 / (1 + lam)
        return _conn(xx=_v(z=lam / nu), xy=_v(z=lam / nu), xz=_v(x=-lam * k, y=-lam * k), yx=_v(z=lam / nu),
                     yy=_v(z=(2 - lam) / nu), yz=_v(x=lam * k, y=-(2 + lam) * k), zx=_v(x=-lam * k, y=k),
                     zy=_v(x=-k, y=lam * k))

    cases.append(CatalogCase(
        id=13, group=GC_NAME, brackets_text=GC_BRACKETS,
        metric_text=(("1", "lambda", "0"), ("lambda", "1", "0"), ("0", "0", "nu")),
        params=("lambda", "mu", "nu"), fixed={"c": 1.0},
        conditions=(pos("nu"), Condition("c=1", lambda q: q["c"] == 1),
                    Condition("0<mu<=1", lambda q: 0 < q["mu"] <= 1),
                    Condition("0<lambda<1", lambda q: 0 < q["lambda"] < 1)),
        structure=gc,
        metric=lambda q: np.array([[1, q["lambda"], 0], [q["lambda"], 1, 0], [0, 0, q["nu"]]], dtype=float),
        expected=e13,
        sampler=_rejection(_draw("lambda", "mu", "nu"), lambda q: q["lambda"] < 1 and q["mu"] <= 1),
        inert=("mu",),
        notes=("mu appears in the condition column but not in the metric; carried as an inert parameter",),
    ))

    def e14(q):
        c, mu, nu = q["c"], q["mu"], q["nu"]
        k = 1 / (2 * (1 - mu))
        return _conn(
            xx=_v(z=1 / nu), xy=_v(z=(2 + mu - c) / (2 * nu)), xz=_v(x=(-2 + mu + c) * k, y=(mu - c) * k),
            yx=_v(z=(2 + mu - c) / (2 * nu)), yy=_v(z=(2 * mu - c) / nu),
            yz=_v(x=(-mu * (c + 2) + 2 * c + mu * mu) * k, y=(-2 + 3 * mu - c) * k),
            zx=_v(x=(-2 + mu + c) * k, y=(2 - mu - c) * k),
            zy=_v(x=(mu * mu + mu * (c - 2)) * k, y=(2 - c - mu) * k),
        )

    cases.append(CatalogCase(
        id=14, group=GC_NAME, brackets_text=GC_BRACKETS,
        metric_text=(("1", "1", "0"), ("1", "mu", "0"), ("0", "0", "nu")),
        params=("c", "mu", "nu"), fixed={},
        conditions=(pos("nu"), Condition("c>1", lambda q: q["c"] > 1),
                    Condition("1<mu<=c", lambda q: 1 < q["mu"] <= q["c"])),
        structure=gc, metric=lambda q: np.array([[1, 1, 0], [1, q["mu"], 0], [0, 0, q["nu"]]], dtype=float),
        expected=e14, sampler=_rejection(_draw("c", "mu", "nu"), lambda q: 1 < q["mu"] <= q["c"]),
    ))

    def m15(q):
        c, mu, nu = q["c"], q["mu"], q["nu"]
        lam2 = 1 - c
        A = (lam2 * (1 + mu) + 1 - mu) / (2 * c * c * lam2)
        B = (1 - mu) / (2 * c * lam2)
        D = (1 - mu) / (2 * lam2)
        return np.array([[A, B, 0], [B, D, 0], [0, 0, nu]], dtype=float)

    def e15(q):
        c, mu, nu = q["c"], q["mu"], q["nu"]
        return _conn(
            xx=_v(z=(1 - mu) / (2 * c * (1 - c) * nu)), xy=_v(z=(mu - c) / (2 * c * (c - 1) * nu)),
            xz=_v(x=-mu / (1 + mu), y=(c + c * mu - 2 * mu) / (c * (mu * mu - 1))),
            yx=_v(z=(mu - c) / (2 * c * (c - 1) * nu)), yy=_v(z=(mu - 1) / (2 * (c - 1) * nu)),
            yz=_v(x=c / (1 + mu), y=-(2 + mu) / (1 + mu)),
            zx=_v(x=-mu / (1 + mu), y=(-2 + c + c * mu) * mu / (c * (mu * mu - 1))),
            zy=_v(x=-c * mu / (1 + mu), y=mu / (1 + mu)),
        )

    def s15(rng):
        while True:
            q = {"c": float(rng.uniform(0.0, 1.0)), "mu": float(rng.uniform(0.0, 1.0)), "nu": _logu(rng)}
            if 0 < q["c"] < 1 and q["mu"] < 1:
                return q

    cases.append(CatalogCase(
        id=15, group=GC_NAME, brackets_text=GC_BRACKETS,
        metric_text=(("A", "B", "0"), ("B", "D", "0"), ("0", "0", "nu")),
        params=("c", "mu", "nu"), fixed={},
        conditions=(Condition("0<=mu<1", lambda q: 0 <= q["mu"] < 1), pos("nu"),
                    Condition("0<c<1", lambda q: 0 < q["c"] < 1)),
        structure=gc, metric=m15, expected=e15, sampler=s15,
        derived={"lambda": lambda q: math.sqrt(1 - q["c"])},
        notes=("lambda = sqrt(1-c) is derived, not supplied",
               "A=(lambda^2(1+mu)+1-mu)/(2c^2 lambda^2), B=(1-mu)/(2c lambda^2), D=(1-mu)/(2 lambda^2)",
               "c restricted to (0,1) so lambda is real and A, B finite"),
    ))
    return {case.id: case for case in cases}


CASES: dict[int, CatalogCase] = _build()
ADMITTING_CASES = (1, 5, 11)


def get_case(case_id: int) -> CatalogCase:
    try:
        return CASES[int(case_id)]
    except (KeyError, ValueError, TypeError):
        raise InvalidInputError(f"unknown catalog case {case_id!r} (expected 1..15)") from None


def resolve_params(case_id: int, params: Mapping[str, float] | None = None) -> dict[str, float]:
    """Validate caller parameters and fill in pinned and derived ones."""
    case = get_case(case_id)
    params = dict(params or {})
    unknown = set(params) - set(case.params)
    pinned = unknown & set(case.fixed)
    for name in pinned:
        if params[name] != case.fixed[name]:
            raise InvalidInputError(f"case {case.id} pins {name}={case.fixed[name]:g}, got {params[name]!r}")
    unknown -= pinned
    if unknown:
        raise InvalidInputError(f"case {case.id} takes parameters {list(case.params)}, got unexpected {sorted(unknown)}")
    missing = [n for n in case.params if n not in params]
    if missing:
        raise InvalidInputError(f"case {case.id} requires parameters {missing}")
    q = {n: float(params[n]) for n in case.params}
    q.update(case.fixed)
    for cond in case.conditions:
        if not cond.holds(q):
            raise InvalidInputError(f"case {case.id}: parameters {q} violate condition '{cond.text}'")
    for name, fn in case.derived.items():
        q[name] = fn(q)
    return q


def instantiate_case(case_id: int, params: Mapping[str, float] | None = None) -> tuple[LieAlgebra, InnerProduct]:
    case = get_case(case_id)
    q = resolve_params(case_id, params)
    return LieAlgebra(case.structure(q)), InnerProduct(case.metric(q))


def sample_params(case_id: int, rng: np.random.Generator) -> dict[str, float]:
    return get_case(case_id).sampler(rng)


def sample_param_sets(case_id: int, samples: int, seed: int = DEFAULT_SEED) -> list[dict[str, float]]:
    # one stream per case keeps a row's samples independent of the others
    rng = np.random.default_rng([seed, int(case_id)])
    case = get_case(case_id)
    if not case.params:
        return [{}]
    return [sample_params(case_id, rng) for _ in range(samples)]


@dataclass(frozen=True)
class EntryResidual:
    entry: str  # "nabla_x y"
    tabulated: tuple[float, float, float]
    koszul: tuple[float, float, float]
    residual: float


@dataclass(frozen=True)
class RowReport:
    case_id: int
    params: dict
    match: bool
    max_residual: float
    tol: float
    torsion_residual: float
    compatibility_residual: float
    jacobi_residual: float
    entries: tuple[EntryResidual, ...]
    notes: tuple[str, ...] = ()

    @property
    def identities_hold(self) -> bool:
        return max(self.torsion_residual, self.compatibility_residual) <= IDENTITY_TOL

    @property
    def errata(self) -> list[EntryResidual]:
        return [e for e in self.entries if e.residual >= self.tol]


def verify_table_row(case_id: int, params: Mapping[str, float] | None = None, tol: float = 1e-9) -> RowReport:
    case = get_case(case_id)
    q = resolve_params(case_id, params)
    alg, g = LieAlgebra(case.structure(q)), InnerProduct(case.metric(q))
    conn = koszul_connection(alg, g)
    expected = case.expected(q)
    entries = []
    for i in range(3):
        for j in range(3):
            table, ours = expected[i, j], conn.gamma[i, j]
            scale = 1.0 + max(np.max(np.abs(table)), np.max(np.abs(ours)))
            entries.append(EntryResidual(
                entry=f"nabla_{FRAME[i]} {FRAME[j]}",
                tabulated=tuple(float(v) for v in table),
                koszul=tuple(float(v) for v in ours),
                residual=float(np.max(np.abs(table - ours)) / scale),
            ))
    worst = max(e.residual for e in entries)
    return RowReport(
        case_id=case.id, params={k: q[k] for k in sorted(q)}, match=worst < tol, max_residual=worst, tol=tol,
        torsion_residual=torsion_residual(conn), compatibility_residual=metric_compatibility_residual(conn),
        jacobi_residual=validate_lie_algebra(alg).residual, entries=tuple(entries), notes=case.notes,
    )


@dataclass(frozen=True)
class AdmissibleBound:
    case_id: int
    kind: Kind
    expression: str
    limit: float
    direction: tuple[float, float, float]  # X = p * direction

    def admits(self, p: float) -> bool:
        return abs(p) < self.limit

    def deformation(self, p: float) -> np.ndarray:
        return float(p) * np.array(self.direction)


def admissible_bound(case_id: int, kind, nu: float = 1.0) -> AdmissibleBound:
    """Range of p for which X = p * (parallel direction) gives an admissible metric."""
    kind = Kind.parse(kind)
    cid = int(case_id)
    if cid not in ADMITTING_CASES:
        raise InvalidInputError(f"case {case_id} admits no Berwald-type deformation")
    if not nu > 0:
        raise InvalidInputError(f"nu must be positive, got {nu!r}")
    randers = kind is Kind.RANDERS
    if cid == 1:
        return AdmissibleBound(1, kind, "|X|_alpha < 1" if randers else "|X|_alpha < 1/2",
                               kind.bound, (1.0, 0.0, 0.0))
    if cid == 5:
        return AdmissibleBound(5, kind, "|p| < 1/sqrt(nu)" if randers else "|p| < 1/(2 sqrt(nu))",
                               kind.bound / math.sqrt(nu), (0.0, 0.0, 1.0))
    return AdmissibleBound(11, kind, "|p| < sqrt(3)/3" if randers else "|p| < sqrt(3)/6",
                           math.sqrt(3) / 3 if randers else math.sqrt(3) / 6, (-2.0, 1.0, 0.0))


def admitting_metric(case_id: int, nu: float = 1.0) -> InnerProduct:
    """The metric carrying the parallel deformation of an admitting case (case 5 at mu = 1)."""
    cid = int(case_id)
    if cid == 1:
        return instantiate_case(1)[1]
    if cid == 5:
        return instantiate_case(5, {"mu": 1.0, "nu": nu})[1]
    if cid == 11:
        return instantiate_case(11, {"nu": nu})[1]
    raise InvalidInputError(f"case {case_id} admits no Berwald-type deformation")


@dataclass(frozen=True)
class CaseClassification:
    case_id: int
    group: str
    samples: tuple[dict, ...]
    dimensions: tuple[int, ...]
    basis: tuple[tuple[float, ...], ...]  # representative parallel basis (empty if none)
    clause: str | None
    bounds: dict  # kind -> expression
    special: dict = field(default_factory=dict)  # extra sweeps (case 5)


@dataclass(frozen=True)
class ClassificationResult:
    seed: int
    tol: float
    cases: tuple[CaseClassification, ...]
    matches_theorem: bool
    deviations: tuple[str, ...]

    def clauses(self) -> dict[str, int]:
        return {c.clause: c.case_id for c in self.cases if c.clause}


def _parallel(case_id: int, q: Mapping[str, float], tol: float) -> np.ndarray:
    alg, g = instantiate_case(case_id, q)
    return parallel_fields(alg, koszul_connection(alg, g), tol)


def _spans(basis: np.ndarray, direction, tol=1e-8) -> bool:
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return len(basis) == 1 and abs(abs(float(basis[0] @ d)) - 1.0) < tol


def _classify_case(case_id: int, samples: int, seed: int, tol: float) -> tuple[CaseClassification, list[str]]:
    case = get_case(case_id)
    deviations: list[str] = []
    param_sets = sample_param_sets(case_id, samples, seed)
    bases = [_parallel(case_id, q, tol) for q in param_sets]
    dims = [len(b) for b in bases]
    special: dict = {}
    clause = None
    basis = bases[0]
    if case_id == 1:
        clause = "i"
        if any(d != 3 for d in dims):
            deviations.append(f"case 1: parallel dimension {dims}, expected 3")
    elif case_id == 5:
        rng = np.random.default_rng([seed, 5, 1])
        at_one = [{"mu": 1.0, "nu": _logu(rng)} for _ in range(samples)]
        below = [{"mu": float(math.exp(rng.uniform(math.log(0.1), 0.0))), "nu": _logu(rng)} for _ in range(samples)]
        one_bases = [_parallel(5, q, tol) for q in at_one]
        below_dims = [len(_parallel(5, q, tol)) for q in below]
        special = {
            "mu=1": {"samples": at_one, "dimensions": [len(b) for b in one_bases]},
            "0<mu<1": {"samples": below, "dimensions": below_dims},
        }
        basis = one_bases[0]
        clause = "ii"
        if not all(_spans(b, (0, 0, 1)) for b in one_bases):
            deviations.append("case 5 at mu=1: parallel space is not span{z}")
        if any(below_dims) or any(d for d, q in zip(dims, param_sets) if q["mu"] != 1.0):
            deviations.append("case 5 with mu<1 admits a parallel field")
    elif case_id == 11:
        clause = "iii"
        if not all(_spans(b, (-2, 1, 0)) for b in bases):
            deviations.append("case 11: parallel space is not span{-2x+y}")
    elif any(dims):
        deviations.append(f"case {case_id}: unexpected parallel fields (dimensions {dims})")
    bounds = {}
    if case_id in ADMITTING_CASES:
        bounds = {k.value: admissible_bound(case_id, k).expression for k in Kind}
    result = CaseClassification(
        case_id=case_id, group=case.group, samples=tuple(param_sets), dimensions=tuple(dims),
        basis=tuple(tuple(float(c) for c in v) for v in basis), clause=clause, bounds=bounds, special=special,
    )
    return result, deviations


def classify(samples: int = 20, seed: int = DEFAULT_SEED, tol: float = RANK_TOL) -> ClassificationResult:
    if samples < 1:
        raise InvalidInputError("classify needs at least one sample per case")
    per_case, deviations = [], []
    for cid in sorted(CASES):
        res, dev = _classify_case(cid, samples, seed, tol)
        per_case.append(res)
        deviations.extend(dev)
    return ClassificationResult(seed=seed, tol=tol, cases=tuple(per_case), matches_theorem=not deviations,
                                deviations=tuple(deviations))


def admissibility_agrees(case_id: int, kind, p: float, nu: float = 1.0) -> bool:
    """Bound evaluator and direct norm check give the same verdict for X = p * direction."""
    bound = admissible_bound(case_id, kind, nu)
    g = admitting_metric(case_id, nu)
    return bound.admits(p) == admissibility_check(g, bound.deformation(p), kind).admissible


def _example_params(case: CatalogCase) -> dict[str, float]:
    return sample_param_sets(case.id, 1, DEFAULT_SEED)[0]


def export_catalog() -> dict:
    """JSON-ready description of every row, with one concrete instance per row."""
    rows = []
    for cid in sorted(CASES):
        case = CASES[cid]
        q = _example_params(case)
        alg, g = instantiate_case(cid, q)
        rows.append({
            "id": cid,
            "group": case.group,
            "parameters": list(case.params),
            "fixed": dict(case.fixed),
            "conditions": case.conditions_text,
            "brackets_template": {k: list(v) for k, v in zip(("xy", "xz", "yz"), case.brackets_text)},
            "metric_template": [list(r) for r in case.metric_text],
            "notes": list(case.notes),
            "example": {
                "params": q,
                "brackets": {k: alg.structure[n].tolist() for n, k in enumerate(("xy", "xz", "yz"))},
                "metric": g.matrix.tolist(),
            },
        })
    return {"cases": rows}
