"""Feedback on isometries U (+) K -> U (+) L.

Three semantics for closing the U loop of an isometric block operator:

* ``schur_feedback``: the closed form D + B (I - A)^+ C, with the
  Moore-Penrose inverse supplying the Schur-style complement of (I - A).
  This is the reference implementation; it sends isometries to isometries.
* ``kleene_feedback``: the limit of D + B (I + A + ... + A^n) C, reported
  with an explicit convergence witness.  Divergence is reported, never
  silently averaged; Cesaro averaging of the partial sums is opt-in.
* ``kernel_image_trace``: factor B and C through (I - A) and combine the
  factors; always defined on isometric inputs and equal to the closed form.

Block layout of a BlockMap op (conventional orientation, rows = codomain):

    [[A, C],
     [B, D]]     A: U -> U,  C: K -> U,  B: U -> L,  D: K -> L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    ISOMETRY_TOL,
    IsometryError,
    Operator,
    RANK_TOL,
    ShapeError,
    isometry_defect,
    mp_inverse,
)

# Residual allowance for the internal factorization checks, relative to the
# isometry tolerance of the input.
FACTOR_SLACK = 100.0


class FactorizationError(ValueError):
    """B or C does not factor through (I - A) within tolerance.

    Signals a non-isometric or ill-conditioned input.
    """


@dataclass(frozen=True)
class BlockMap:
    """An operator U (+) K -> U (+) L with its split recorded."""

    op: Operator
    u: int
    k: int
    l: int

    def __post_init__(self):
        if min(self.u, self.k, self.l) < 0:
            raise ValueError(f"split dims must be nonnegative: {self.u}, {self.k}, {self.l}")
        if self.op.cols != self.u + self.k or self.op.rows != self.u + self.l:
            raise ShapeError(
                f"operator is {self.op.rows}x{self.op.cols}, expected "
                f"{self.u + self.l}x{self.u + self.k} for split u={self.u}, k={self.k}, l={self.l}")


@dataclass(frozen=True)
class ConvergenceReport:
    """Numerical witness for the limit of the partial-sum feedback."""

    steps: int
    residual: float
    converged: bool
    mode: str


def split_blocks(m: BlockMap):
    """The four blocks (a, b, c, d) of the recorded split."""
    u = m.u
    mat = m.op.mat
    a = Operator(mat[:u, :u])
    c = Operator(mat[:u, u:])
    b = Operator(mat[u:, :u])
    d = Operator(mat[u:, u:])
    return a, b, c, d


def _require_isometry(m: BlockMap, tol: float):
    defect = isometry_defect(m.op)
    if defect > tol:
        raise IsometryError("feedback input must be an isometry", defect)


def schur_feedback(m: BlockMap, tol: float = ISOMETRY_TOL) -> Operator:
    """Close the U loop: D + B (I - A)^+ C.

    The input must be an isometry within tol; the output is then an
    isometry K -> L with defect at most about 100 * tol.
    """
    _require_isometry(m, tol)
    a, b, c, d = split_blocks(m)
    n = np.eye(m.u) - a.mat
    pinv = mp_inverse(Operator(n), RANK_TOL)
    return Operator(d.mat + b.mat @ pinv.mat @ c.mat)


def kleene_feedback(m: BlockMap, max_n: int = 100_000, tol: float = 1e-10,
                    mode: str = "partial-sums"):
    """Feedback as the limit of D + B (I + A + ... + A^n) C.

    Iterates the partial sums (or their Cesaro averages when
    mode="cesaro"), stopping once the increment from one iterate to the
    next falls to tol or max_n is reached.  Returns (operator, report);
    non-convergence is reported, not raised.
    """
    if mode not in ("partial-sums", "cesaro"):
        raise ValueError(f"unknown mode {mode!r}")
    _require_isometry(m, tol)
    a, b, c, d = split_blocks(m)
    if m.u == 0:
        return d, ConvergenceReport(steps=0, residual=0.0, converged=True, mode=mode)

    # partial sums: S_n = I + A + ... + A^n, iterate f_n = D + B S_n C,
    # increment f_n - f_{n-1} = B A^n C with f_{-1} = D.
    # cesaro: average the partial sums instead of taking the last.
    power = np.eye(m.u, dtype=complex)          # A^n
    partial = np.zeros((m.u, m.u), dtype=complex)  # S_{n-1}
    cesaro_acc = np.zeros((m.u, m.u), dtype=complex)  # S_0 + ... + S_{n-1}
    prev_mid = np.zeros((m.u, m.u), dtype=complex)
    residual = float("inf")
    steps = 0
    for n in range(max_n + 1):
        partial = partial + power
        if mode == "cesaro":
            cesaro_acc = cesaro_acc + partial
            mid = cesaro_acc / (n + 1)
        else:
            mid = partial
        increment = b.mat @ (mid - prev_mid) @ c.mat
        residual = float(np.max(np.abs(increment))) if increment.size else 0.0
        prev_mid = mid
        steps = n
        if residual <= tol:
            break
        power = a.mat @ power
    out = Operator(d.mat + b.mat @ prev_mid @ c.mat)
    return out, ConvergenceReport(steps=steps, residual=residual,
                                  converged=residual <= tol, mode=mode)


def kernel_image_trace(m: BlockMap, tol: float = ISOMETRY_TOL) -> Operator:
    """Feedback through factorizations of B and C across (I - A).

    Solves B = k-factor after (I - A) and C = (I - A) after i-factor in
    minimal norm via the pseudoinverse, verifies both residuals, and
    returns the average of the two equivalent combinations D + (C then
    k-factor) and D + (i-factor then B).
    """
    _require_isometry(m, tol)
    a, b, c, d = split_blocks(m)
    n = np.eye(m.u) - a.mat
    pinv = mp_inverse(Operator(n), RANK_TOL).mat
    k_factor = b.mat @ pinv          # minimal-norm solution of B = k (I - A)
    i_factor = pinv @ c.mat          # minimal-norm solution of C = (I - A) i
    bound = FACTOR_SLACK * tol
    res_b = float(np.max(np.abs(k_factor @ n - b.mat))) if b.mat.size else 0.0
    res_c = float(np.max(np.abs(n @ i_factor - c.mat))) if c.mat.size else 0.0
    if res_b > bound or res_c > bound:
        raise FactorizationError(
            f"blocks do not factor through (I - A): residuals {res_b:.3e}, {res_c:.3e} "
            f"exceed {bound:.3e}; input is non-isometric or ill-conditioned")
    via_k = d.mat + k_factor @ c.mat
    via_i = d.mat + b.mat @ i_factor
    if via_k.size and float(np.max(np.abs(via_k - via_i))) > bound:
        raise FactorizationError("the two factor combinations disagree")
    return Operator((via_k + via_i) / 2.0)


def scalar_star(c: complex) -> complex:
    """Scalar feedback (1 - c)^+ with the convention that 1^* = 0."""
    w = 1.0 - complex(c)
    if abs(w) <= 1e-12:
        return 0.0 + 0.0j
    return 1.0 / w
