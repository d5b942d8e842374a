#!/usr/bin/env python3
"""
Two-Phase Tableau Simplex
Minimizes c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0 using
Bland's smallest-index rule, and the min-cost split LP built on top of it.
"""

import logging
import math
from typing import List, Optional

import numpy as np

from .types import LpResult, LpStatus, SplitProblem, SplitSolution

logger = logging.getLogger(__name__)

EPS = 1e-12
FEASIBILITY_TOL = 1e-9
MAX_PIVOTS = 10_000


def _pivot(T: np.ndarray, basis: List[int], row: int, col: int):
    T[row] /= T[row, col]
    column = T[:, col].copy()
    column[row] = 0.0
    T -= np.outer(column, T[row])
    basis[row] = col


def _entering(T: np.ndarray, allowed: int) -> Optional[int]:
    """Smallest-index column with a negative reduced cost"""
    negative = np.nonzero(T[-1, :allowed] < -EPS)[0]
    return int(negative[0]) if negative.size else None


def _leaving(T: np.ndarray, basis: List[int], col: int) -> Optional[int]:
    """Minimum ratio row, ties broken by the smallest basic variable index"""
    best_row, best_ratio = None, math.inf
    for i in range(T.shape[0] - 1):
        coef = T[i, col]
        if coef <= EPS:
            continue
        ratio = T[i, -1] / coef
        if best_row is None or ratio < best_ratio - EPS or (
                abs(ratio - best_ratio) <= EPS and basis[i] < basis[best_row]):
            best_row, best_ratio = i, ratio
    return best_row


def _run(T: np.ndarray, basis: List[int], allowed: int) -> LpStatus:
    for _ in range(MAX_PIVOTS):
        col = _entering(T, allowed)
        if col is None:
            return LpStatus.OPTIMAL
        row = _leaving(T, basis, col)
        if row is None:
            return LpStatus.UNBOUNDED
        _pivot(T, basis, row, col)
    raise RuntimeError(f"Simplex did not terminate within {MAX_PIVOTS} pivots")


def linprog_bland(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None) -> LpResult:
    """
    Solve a small LP in nonnegative variables

    Args:
        c: Cost vector (n,)
        A_ub, b_ub: Inequality rows A_ub x <= b_ub
        A_eq, b_eq: Equality rows A_eq x = b_eq

    Returns:
        LpResult with status, optimal x (n,) and objective c.x
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq

    # [x | slacks | artificials | rhs], rows flipped so every rhs >= 0
    A = np.zeros((m, n + m_ub))
    A[:m_ub, :n] = A_ub
    A[:m_ub, n:] = np.eye(m_ub)
    A[m_ub:, :n] = A_eq
    b = np.concatenate([b_ub, b_eq])
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    basis: List[int] = [-1] * m
    needs_artificial = []
    for i in range(m):
        if i < m_ub and not flip[i]:
            basis[i] = n + i
        else:
            needs_artificial.append(i)
    n_struct = n + m_ub
    n_art = len(needs_artificial)

    T = np.zeros((m + 1, n_struct + n_art + 1))
    T[:m, :n_struct] = A
    T[:m, -1] = b
    for k, i in enumerate(needs_artificial):
        T[i, n_struct + k] = 1.0
        basis[i] = n_struct + k

    if n_art:
        # phase 1: minimize the sum of artificials
        T[-1, n_struct:n_struct + n_art] = 1.0
        for i in needs_artificial:
            T[-1] -= T[i]
        status = _run(T, basis, n_struct + n_art)
        if status != LpStatus.OPTIMAL or -T[-1, -1] > FEASIBILITY_TOL * max(1.0, float(b.max(initial=0.0))):
            return LpResult(status=LpStatus.INFEASIBLE)

        # drive remaining artificials out of the basis, dropping redundant rows
        for i in reversed(range(m)):
            if basis[i] < n_struct:
                continue
            candidates = np.nonzero(np.abs(T[i, :n_struct]) > EPS)[0]
            if candidates.size:
                _pivot(T, basis, i, int(candidates[0]))
            else:
                T = np.delete(T, i, axis=0)
                del basis[i]
        T = np.delete(T, np.s_[n_struct:n_struct + n_art], axis=1)

    # phase 2 with the true costs
    T[-1] = 0.0
    T[-1, :n] = c
    for i, var in enumerate(basis):
        if T[-1, var] != 0.0:
            T[-1] -= T[-1, var] * T[i]
    status = _run(T, basis, n_struct)
    if status != LpStatus.OPTIMAL:
        return LpResult(status=status)

    x = np.zeros(n_struct)
    for i, var in enumerate(basis):
        x[var] = T[i, -1]
    x = np.maximum(x[:n], 0.0)
    return LpResult(status=LpStatus.OPTIMAL, x=x, objective=float(c @ x))


def simplex_min_cost(p: SplitProblem) -> SplitSolution:
    """
    Cheapest split of the demand

    Minimizes sum_j xi_j * unit_cost_j subject to sum xi = 1,
    xi_j * demand <= min(link_cap_j, capacity_j - load_j) and every shared
    cap. Unbounded headroom contributes no row.
    """
    n = len(p.candidates)
    costs = np.array([cand.unit_cost for cand in p.candidates], dtype=float)

    rows, rhs = [], []
    for j, cand in enumerate(p.candidates):
        headroom = cand.headroom
        if math.isinf(headroom):
            continue
        row = np.zeros(n)
        row[j] = 1.0
        rows.append(row)
        rhs.append(max(0.0, headroom) / p.demand)
    for cap in p.shared_caps:
        if math.isinf(cap.limit):
            continue
        row = np.zeros(n)
        row[list(cap.members)] = 1.0
        rows.append(row)
        rhs.append(cap.limit / p.demand)

    result = linprog_bland(
        costs,
        A_ub=np.array(rows) if rows else None,
        b_ub=np.array(rhs) if rhs else None,
        A_eq=np.ones((1, n)),
        b_eq=np.array([1.0]),
    )
    if not result.optimal:
        logger.debug(f"Min-cost split LP over {n} candidate(s) is {result.status.value}")
        return SplitSolution.infeasible(n, f"LP {result.status.value}")
    ratios = [float(v) for v in result.x]
    return SplitSolution(ratios=ratios, objective_value=result.objective)
