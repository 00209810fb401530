"""Closed-form Rademacher and generalization bounds in terms of color classes.

Notation: ``m`` graphs split into ``p`` classes with multiplicities ``mu_j``.
Every bound is returned as computed; values above 1 are vacuous for a
[0, 1]-valued complexity and get a note in the report, never clamping.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .partition import MultiplicityDiff, SamplePartition
from .rademacher import brute_force_rademacher, exact_rademacher

DUDLEY_MESH_POINTS = 256
DUDLEY_GRID_POINTS = 32


def _check_pm(p: int, m: int) -> None:
    if m < 1 or p < 1:
        raise ValueError("p and m must be positive")
    if p > m:
        raise ValueError(f"p={p} exceeds m={m}")


def upper_bound_colors(p: int, m: int) -> float:
    """sqrt(p / m) for outputs in [-1, 1]."""
    _check_pm(p, m)
    return math.sqrt(p / m)


def general_upper_bound(sup_l: float, p: int, m: int) -> float:
    """sup_L * sqrt(p) / m, with sup_L the largest l2-norm of outputs over the sample."""
    _check_pm(p, m)
    if sup_l < 0:
        raise ValueError("sup_l must be non-negative")
    return sup_l * math.sqrt(p) / m


def lower_bound_uniform(p: int, m: int) -> float:
    """sqrt(p / 2m), valid when all p classes have size m / p."""
    _check_pm(p, m)
    if m % p:
        raise ValueError(f"uniform partitioning violated: p={p} does not divide m={m}")
    return math.sqrt(p / (2 * m))


def dudley_first_term(alpha: float, p: int, m: int) -> float:
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return 4.0 * alpha * math.sqrt(p) / m


def classical_dudley_first_term(alpha: float, m: int) -> float:
    return 4.0 * alpha / math.sqrt(m)


def default_covering_log(p: int, m: int) -> Callable[[np.ndarray], np.ndarray]:
    """Volumetric log-covering bound p * ln(1 + 2 sqrt(m) / eps) for a p-dim ball of radius sqrt(m)."""
    r = math.sqrt(m)

    def covering_log(eps):
        return p * np.log1p(2.0 * r / np.asarray(eps, dtype=float))

    return covering_log


def default_alpha_grid(m: int, points: int = DUDLEY_GRID_POINTS) -> np.ndarray:
    r = math.sqrt(m)
    return np.geomspace(1e-3 * r, r, points)


def entropy_integral(covering_log, lo: float, hi: float, points: int = DUDLEY_MESH_POINTS) -> float:
    """Trapezoid rule for the integral of sqrt(covering_log) on a log-spaced mesh over [lo, hi]."""
    if lo >= hi:
        return 0.0
    eps = np.geomspace(lo, hi, max(points, 2))
    vals = np.asarray(covering_log(eps), dtype=float)
    if np.any(vals < 0):
        raise ValueError("covering_log returned a negative value")
    y = np.sqrt(vals)
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(eps)))


def dudley_bound(
    p: int,
    m: int,
    alpha_grid: Sequence[float] | None = None,
    covering_log=None,
    mesh_points: int = DUDLEY_MESH_POINTS,
) -> tuple[float, float]:
    """Best (alpha, value) of 4 alpha sqrt(p)/m + (12/m) * int_alpha^sqrt(m) sqrt(log N(eps)) d eps.

    ``covering_log`` maps an array of radii to log covering numbers; it
    defaults to :func:`default_covering_log`. The integral is numerical,
    so the value approximates the bound rather than certifying it.
    """
    _check_pm(p, m)
    grid = default_alpha_grid(m) if alpha_grid is None else np.asarray(alpha_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("alpha grid is empty")
    if covering_log is None:
        covering_log = default_covering_log(p, m)
    r = math.sqrt(m)
    best = None
    for alpha in grid.tolist():
        val = dudley_first_term(alpha, p, m) + 12.0 / m * entropy_integral(
            covering_log, alpha, r, mesh_points
        )
        if best is None or val < best[1]:
            best = (alpha, val)
    return best


def stability_bound(diff: MultiplicityDiff, m: int | None = None) -> float:
    """sum_j eps_j / m."""
    m = diff.m if m is None else m
    if m < 1:
        raise ValueError("m must be positive")
    return diff.total / m


@dataclass(frozen=True)
class GenBoundInputs:
    empirical_risk: float
    gamma: float
    rademacher: float
    delta: float
    m: int

    def __post_init__(self):
        if self.empirical_risk < 0:
            raise ValueError("empirical_risk must be non-negative")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.rademacher < 0:
            raise ValueError("rademacher must be non-negative")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.m < 1:
            raise ValueError("m must be positive")


def confidence_slack(delta: float, m: int) -> float:
    return 3.0 * math.sqrt(math.log(2.0 / delta) / (2.0 * m))


def generalization_bound(inputs: GenBoundInputs) -> float:
    """L_S + 2 gamma R_S + 3 sqrt(ln(2/delta) / 2m)."""
    return (
        inputs.empirical_risk
        + 2.0 * inputs.gamma * inputs.rademacher
        + confidence_slack(inputs.delta, inputs.m)
    )


# -- Lipschitz constants of cross-entropy losses --------------------------------


def logistic(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def ce_lipschitz_constant(z_bound: float) -> float:
    """max{|psi(z)|, |1 - psi(z)|} at z = b_phi * B_beta, psi the logistic map.

    This is the published form. A fully symmetric analysis over
    [-z, z] would use psi(-z) in the second branch; for z >= 0 the two agree.
    """
    if z_bound < 0:
        raise ValueError("z_bound must be non-negative")
    s = logistic(z_bound)
    return max(abs(s), abs(1.0 - s))


def rescaled_ce_lipschitz(a: float, b: float, c: float, z_bound: float) -> float:
    """(C / (b - a)) * max{1/g, 1/(1 - g)} with g = (psi(z) - a) / (b - a).

    psi is the logistic map affinely rescaled onto (a, b), so g(psi(z)) is
    the standard logistic value at ``z_bound``.
    """
    if a >= b:
        raise ValueError("need a < b")
    if c <= 0:
        raise ValueError("C must be positive")
    if z_bound < 0:
        raise ValueError("z_bound must be non-negative")
    psi = a + (b - a) * logistic(z_bound)
    g = (psi - a) / (b - a)
    if not 0.0 < g < 1.0:
        raise ValueError("z_bound too large: rescaled activation saturates")
    return c / (b - a) * max(1.0 / g, 1.0 / (1.0 - g))


LOSS_KINDS = ("logistic_ce", "rescaled_ce", "margin_tanh")


@dataclass(frozen=True)
class LossSpec:
    """Loss family and the constants its Lipschitz bound needs.

    ``margin_tanh`` is a ramp loss with the given margin on tanh outputs;
    its Lipschitz constant is ``1 / margin``.
    """

    kind: str
    b_phi: float = 1.0
    b_beta: float = 1.0
    a: float = -1.0
    b: float = 1.0
    c: float = 1.0
    margin: float = 1.0

    def __post_init__(self):
        if self.kind not in LOSS_KINDS:
            raise ValueError(f"unknown loss {self.kind!r}; expected one of {LOSS_KINDS}")
        if self.b_phi < 0 or self.b_beta < 0:
            raise ValueError("b_phi and B_beta must be non-negative")
        if self.kind == "rescaled_ce" and (self.a >= self.b or self.c <= 0):
            raise ValueError("rescaled_ce needs a < b and C > 0")
        if self.kind == "margin_tanh" and self.margin <= 0:
            raise ValueError("margin must be positive")

    @property
    def z_bound(self) -> float:
        return self.b_phi * self.b_beta

    def lipschitz(self) -> float:
        if self.kind == "logistic_ce":
            return ce_lipschitz_constant(self.z_bound)
        if self.kind == "rescaled_ce":
            return rescaled_ce_lipschitz(self.a, self.b, self.c, self.z_bound)
        return 1.0 / self.margin


# -- report -------------------------------------------------------------------


@dataclass
class BoundReport:
    m: int
    p: int
    multiplicities: tuple[int, ...]
    upper_colors: float
    exact: float
    general_upper: float | None = None
    sup_l: float | None = None
    lower_uniform: float | None = None
    uniform_partitioning: bool = False
    brute_force: float | None = None
    dudley: tuple[float, float] | None = None
    notes: list[str] = field(default_factory=list)

    def rows(self) -> list[dict]:
        pm = f"p={self.p};m={self.m}"
        out = [{"name": "exact", "value": self.exact, "inputs": pm, "note": "closed form"}]
        if self.brute_force is not None:
            out.append({"name": "brute_force", "value": self.brute_force, "inputs": pm, "note": "enumeration"})
        out.append({"name": "upper_colors", "value": self.upper_colors, "inputs": pm, "note": ""})
        if self.general_upper is not None:
            out.append(
                {"name": "general_upper", "value": self.general_upper, "inputs": f"{pm};sup_l={self.sup_l}", "note": ""}
            )
        if self.lower_uniform is not None:
            out.append(
                {"name": "lower_uniform", "value": self.lower_uniform, "inputs": pm, "note": "uniform partitioning"}
            )
        if self.dudley is not None:
            alpha, val = self.dudley
            out.append(
                {"name": "dudley", "value": val, "inputs": f"{pm};alpha={alpha!r}", "note": "numerical integral"}
            )
        for row in out:
            if row["value"] > 1.0 and row["name"] not in ("exact", "brute_force"):
                row["note"] = (row["note"] + "; vacuous (>1)").lstrip("; ")
        return out

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "p": self.p,
            "multiplicities": list(self.multiplicities),
            "exact": self.exact,
            "brute_force": self.brute_force,
            "upper_colors": self.upper_colors,
            "general_upper": self.general_upper,
            "sup_l": self.sup_l,
            "lower_uniform": self.lower_uniform,
            "uniform_partitioning": self.uniform_partitioning,
            "dudley": None if self.dudley is None else {"alpha": self.dudley[0], "value": self.dudley[1]},
            "notes": list(self.notes),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["name", "value", "inputs", "note"], lineterminator="\n")
        w.writeheader()
        for row in self.rows():
            w.writerow({**row, "value": repr(row["value"])})
        return buf.getvalue()


def build_report(
    partition: SamplePartition,
    *,
    sup_l: float | None = None,
    brute_force_max_m: int = 16,
    alpha_grid: Sequence[float] | None = None,
) -> BoundReport:
    """Assemble every applicable bound for one partition."""
    m, p = partition.m, partition.p
    report = BoundReport(
        m=m,
        p=p,
        multiplicities=partition.multiplicities,
        upper_colors=upper_bound_colors(p, m),
        exact=exact_rademacher(partition).value,
    )
    if m <= brute_force_max_m:
        report.brute_force = brute_force_rademacher(partition).value
    if sup_l is not None:
        report.sup_l = sup_l
        report.general_upper = general_upper_bound(sup_l, p, m)
    if partition.is_uniform:
        report.uniform_partitioning = True
        report.lower_uniform = lower_bound_uniform(p, m)
    else:
        report.notes.append("lower bound omitted: class sizes are not uniform")
    report.dudley = dudley_bound(p, m, alpha_grid)
    report.notes.append(
        "dudley: trapezoid integral over a log-spaced mesh with the default volumetric "
        "covering bound; an approximation of an upper bound"
    )
    report.notes.append(
        "dudley: the classical entropy-integral theorem assumes values in [0, 1] while the "
        "color-aware version is stated for [-1, 1]; evaluated as stated"
    )
    if any(r["value"] > 1.0 for r in report.rows() if r["name"] not in ("exact", "brute_force")):
        report.notes.append("some bounds exceed 1 and are vacuous for this sample")
    return report
