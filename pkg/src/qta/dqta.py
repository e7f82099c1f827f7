"""Quantum automata with directed tape interfaces.

An automaton carries an h-dimensional internal state space H and moves a
control particle between interface spaces: the transition operator maps
H (x) K to H (x) L and must be an isometry.  Interfaces combine by direct
sum, state spaces by tensor product.  Three composition styles:

  cascade        feed one automaton's output interface into the next
                 one's input interface; state spaces tensor.
  turing_tensor  run two automata side by side; interfaces concatenate,
                 each transition acts on its own state factor.
  feedback_dqta  wire the leading output summand back into the leading
                 input summand and eliminate the loop with the closed
                 form feedback from the trace module, taken over H (x) U.

Matrix conventions follow linalg: the state factor H is always the outer
(slow) tensor factor, and interface summands concatenate in declaration
order.  Equality of automata is only ever checked against an explicit
state-space witness (iso_witness_check); no isomorphism search happens
anywhere.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import (
    IsometryError,
    Operator,
    ShapeError,
    adjoint,
    distribute,
    dsum,
    identity,
    isometry_defect,
    kron,
    op_distance,
    sum_swap,
    tensor_swap,
    unitary_defect,
)
from .trace import BlockMap, schur_feedback

# isometry gate at construction / after composite operations
DQTA_TOL = 1e-9
COMPOSITE_TOL = 1e-8


@dataclass(frozen=True)
class Dqta:
    """Automaton (h, k, l, tau) with isometric tau: H (x) K -> H (x) L."""

    h: int
    k: int
    l: int
    tau: Operator

    def __post_init__(self):
        if self.h <= 0 or self.k < 0 or self.l < 0:
            raise ShapeError(
                f"state dim must be positive and interfaces nonnegative, "
                f"got h={self.h}, k={self.k}, l={self.l}")
        if self.tau.cols != self.h * self.k or self.tau.rows != self.h * self.l:
            raise ShapeError(
                f"transition is {self.tau.rows}x{self.tau.cols}, expected "
                f"{self.h * self.l}x{self.h * self.k}")


@dataclass(frozen=True)
class UnitaryDqta(Dqta):
    """Automaton whose square transition is unitary (so k = l)."""

    def __post_init__(self):
        super().__post_init__()
        if self.k != self.l:
            raise ShapeError(f"unitary automaton needs k = l, got {self.k}, {self.l}")


def make_dqta(h: int, k: int, l: int, tau: Operator, tol: float = DQTA_TOL) -> Dqta:
    """Validated construction; rejects non-isometric transitions."""
    t = Dqta(h, k, l, tau)
    defect = isometry_defect(tau)
    if defect > tol:
        raise IsometryError("transition must be an isometry", defect)
    return t


def make_unitary_dqta(h: int, k: int, tau: Operator,
                      tol: float = DQTA_TOL) -> UnitaryDqta:
    """Validated construction of an automaton with unitary transition."""
    t = UnitaryDqta(h, k, k, tau)
    defect = unitary_defect(tau)
    if defect > tol:
        raise IsometryError("transition must be unitary", defect)
    return t


def cascade(t1: Dqta, t2: Dqta) -> Dqta:
    """Sequential product: t1's output interface becomes t2's input.

    The composite lives on H1 (x) H2.  Each transition acts on its own
    state factor; explicit swaps bring that factor to the front, so the
    whole composite reads: swap H1 up, run t1, swap H2 up, run t2.
    """
    if t1.l != t2.k:
        raise ShapeError(f"cascade interface mismatch: {t1.l} != {t2.k}")
    h1, h2, mid = t1.h, t2.h, t1.l
    step_in = kron(tensor_swap(h1, h2), identity(t1.k))
    act1 = kron(identity(h2), t1.tau)
    step_mid = kron(tensor_swap(h2, h1), identity(mid))
    act2 = kron(identity(h1), t2.tau)
    tau = Operator(act2.mat @ step_mid.mat @ act1.mat @ step_in.mat)
    return make_dqta(h1 * h2, t1.k, t2.l, tau, tol=COMPOSITE_TOL)


def turing_tensor(t1: Dqta, t2: Dqta) -> Dqta:
    """Parallel product: states tensor, interfaces concatenate.

    On the summand coming from t1 the particle only sees t1 (acting on
    the H1 factor through swaps), and likewise for t2; the two summand
    actions are glued by the distributivity permutation on each side.
    """
    h1, h2 = t1.h, t2.h
    h = h1 * h2
    act1 = (kron(tensor_swap(h2, h1), identity(t1.l)).mat
            @ kron(identity(h2), t1.tau).mat
            @ kron(tensor_swap(h1, h2), identity(t1.k)).mat)
    act2 = kron(identity(h1), t2.tau).mat
    joint = dsum(Operator(act1), Operator(act2))
    d_in = distribute(h, [t1.k, t2.k])
    d_out = distribute(h, [t1.l, t2.l])
    tau = Operator(adjoint(d_out).mat @ joint.mat @ d_in.mat)
    return make_dqta(h, t1.k + t2.k, t1.l + t2.l, tau, tol=COMPOSITE_TOL)


def feedback_dqta(t: Dqta, u: int) -> Dqta:
    """Close the loop over the leading u-dimensional interface summand.

    Reorders the transition so the loop block H (x) U leads on both
    sides, then applies the closed-form feedback.  Other summands can be
    routed into leading position with symmetry automata first.
    """
    if u < 0 or u > t.k or u > t.l:
        raise ShapeError(f"feedback dim {u} exceeds interfaces ({t.k}, {t.l})")
    d_in = distribute(t.h, [u, t.k - u])
    d_out = distribute(t.h, [u, t.l - u])
    looped = Operator(d_out.mat @ t.tau.mat @ adjoint(d_in).mat)
    m = BlockMap(looped, t.h * u, t.h * (t.k - u), t.h * (t.l - u))
    closed = schur_feedback(m, tol=COMPOSITE_TOL)
    return make_dqta(t.h, t.k - u, t.l - u, closed, tol=COMPOSITE_TOL)


def unit_automata(k: int, l: int):
    """The stateless automata: identity on K and the K/L interface swap.

    Returns (identity, symmetry); both have a one-dimensional state
    space, so cascading with them never changes matrix entries.
    """
    ident = make_unitary_dqta(1, k, identity(k))
    sym = make_unitary_dqta(1, k + l, sum_swap(k, l))
    return ident, sym


def iso_witness_check(t1: Dqta, t2: Dqta, sigma: Operator,
                      tol: float = COMPOSITE_TOL) -> bool:
    """Does sigma: H1 -> H2 witness that t1 and t2 are the same machine?

    True iff sigma is unitary and conjugating t1's transition by sigma
    on the state factor reproduces t2's transition within tol.  The
    witness is always supplied, never searched for.
    """
    if t1.k != t2.k or t1.l != t2.l:
        raise ShapeError("witness check needs matching interfaces")
    if sigma.cols != t1.h or sigma.rows != t2.h:
        raise ShapeError(
            f"witness is {sigma.rows}x{sigma.cols}, expected {t2.h}x{t1.h}")
    if sigma.rows != sigma.cols or unitary_defect(sigma) > tol:
        return False
    moved = (kron(sigma, identity(t1.l)).mat
             @ t1.tau.mat
             @ kron(adjoint(sigma), identity(t1.k)).mat)
    return op_distance(Operator(moved), t2.tau) <= tol


def dagger_dqta(t: Dqta, tol: float = DQTA_TOL) -> UnitaryDqta:
    """Run a unitary automaton backwards: adjoint transition, L -> K.

    Involutive on the nose: dagger(dagger(t)) has exactly t's matrix.
    """
    if t.k != t.l:
        raise ShapeError(f"dagger needs k = l, got {t.k}, {t.l}")
    defect = unitary_defect(t.tau)
    if defect > tol:
        raise IsometryError("dagger needs a unitary transition", defect)
    return make_unitary_dqta(t.h, t.l, adjoint(t.tau), tol=tol)
