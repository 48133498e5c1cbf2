"""Brute-force safety oracle for small configurations.

Checks the four safety conditions on a :class:`Configuration` by enumerating
every total assignment over the session vocabulary.  The first two hold for
any configuration reachable by the rules (the weak form); the last two
additionally hold in checked mode.
"""

from __future__ import annotations

import itertools
from typing import Iterable

import numpy as np

from .core import Constraint, Objective
from .state import Configuration, Mode

MAX_VARS = 8


def assignment_matrix(n: int) -> np.ndarray:
    """All ``2**n`` assignments as rows; column 0 is padding so column v is variable v."""
    rows = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64).reshape(-1, n)
    return np.hstack([np.zeros((rows.shape[0], 1), dtype=np.int64), rows])


def _dtype(c_terms: Iterable[tuple[int, int]], degree: int) -> type:
    big = sum(abs(a) for a, _ in c_terms) + abs(degree)
    return np.int64 if big < 2 ** 62 else object


def linear_values(points: np.ndarray, terms: Iterable[tuple[int, int]]) -> np.ndarray:
    terms = list(terms)
    dtype = _dtype(terms, 0)
    total = np.zeros(points.shape[0], dtype=dtype)
    for a, lit in terms:
        col = points[:, abs(lit)].astype(dtype)
        total = total + (a * col if lit > 0 else a * (1 - col))
    return total


def satisfied(points: np.ndarray, c: Constraint) -> np.ndarray:
    return linear_values(points, c.terms) >= c.degree


def objective_values(points: np.ndarray, f: Objective) -> np.ndarray:
    return linear_values(points, f.terms) + f.constant


def all_satisfied(points: np.ndarray, cs: Iterable[Constraint]) -> np.ndarray:
    mask = np.ones(points.shape[0], dtype=bool)
    for c in cs:
        mask &= satisfied(points, c)
    return mask


def order_matrix(points: np.ndarray, cfg: Configuration) -> np.ndarray:
    """``R[i, j]`` is true iff ``O(z|points[i], z|points[j])`` holds."""
    definition = cfg.order.definition
    n = definition.arity
    z = cfg.order.variables
    size = points.shape[0]
    rel = np.ones((size, size), dtype=bool)
    for c in definition.constraints:
        left = [(a, z[abs(l) - 1] if l > 0 else -z[abs(l) - 1]) for a, l in c.terms if abs(l) <= n]
        right = [(a, z[abs(l) - n - 1] if l > 0 else -z[abs(l) - n - 1])
                 for a, l in c.terms if abs(l) > n]
        lv = linear_values(points, left)
        rv = linear_values(points, right)
        rel &= (lv[:, None] + rv[None, :]) >= c.degree
    return rel


def _min(values: np.ndarray, mask: np.ndarray):
    return values[mask].min() if mask.any() else None


def check_safety(cfg: Configuration, checked: bool | None = None,
                 max_vars: int = MAX_VARS) -> list[str]:
    """Return a description of every violated safety condition (empty if safe)."""
    n = len(cfg.vocab)
    if n > max_vars:
        raise ValueError(f"safety oracle limited to {max_vars} variables, instance has {n}")
    if checked is None:
        checked = cfg.mode is Mode.CHECKED
    points = assignment_matrix(n)
    f = objective_values(points, cfg.objective)
    sat_f = all_satisfied(points, cfg.input.values())
    sat_c = all_satisfied(points, cfg.core.values())
    sat_d = all_satisfied(points, cfg.derived.values())
    v = cfg.best
    better = np.ones_like(sat_c) if v is None else (f <= v - 1)
    problems = []

    min_f = _min(f, sat_f)
    if min_f is not None and (v is None or min_f < v):
        if not (sat_c & (f <= min_f)).any():
            problems.append(f"item 1: input reaches {min_f} but the core does not")

    if not cfg.relaxed_deletion:
        rho = sat_c & better
        if rho.any():
            target = sat_c & sat_d & better
            rel = order_matrix(points, cfg)
            good = rel & target[:, None] & (f[:, None] <= f[None, :])
            ok = good.any(axis=0)
            bad = np.flatnonzero(rho & ~ok)
            if bad.size:
                row = points[bad[0], 1:]
                problems.append(f"item 2: assignment {row.tolist()} has no dominating "
                                "assignment satisfying C and D")

    if checked:
        if v is not None and not (sat_f & (f <= v)).any():
            problems.append(f"item 3: no input solution with objective <= {v}")
        min_c = _min(f, sat_c)
        if min_c is not None and (v is None or min_c < v):
            if not (sat_f & (f <= min_c)).any():
                problems.append(f"item 4: core reaches {min_c} but the input does not")
    return problems
