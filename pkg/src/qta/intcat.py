"""Bidirectional automata built from directed ones.

A morphism from rank k to rank l is carried by a unitary automaton whose
input interface is K (+) L and whose output interface is L (+) K: the K
summand flows forward while the L summand travels backward.  Composition
wires the middle object's forward and return copies into a loop and
eliminates it with feedback; the dagger just renames interfaces, so it
is involutive on the nose.  Objects are self-dual, with unit and counit
both carried by the interface swap.

name_of flattens a morphism into an undirected automaton (Qta) on the
combined rank K (+) L, and unname inverts it exactly; as_int0 views any
square automaton whose interfaces split as [forward, backward] on both
sides as a morphism.  bidirectionalize sends a directed automaton t to
the name of the forward/backward pair t (+) dagger(t).

Every operation reduces to dqta-module algebra plus explicit permutation
routing; no isomorphism search, no symbolic structure.
"""

from dataclasses import dataclass

from .linalg import (
    Operator,
    ShapeError,
    block_perm,
    dsum,
    identity,
    kron,
    sum_swap,
    unitary_defect,
)
from .linalg import IsometryError
from .dqta import (
    COMPOSITE_TOL,
    DQTA_TOL,
    Dqta,
    UnitaryDqta,
    cascade,
    dagger_dqta,
    feedback_dqta,
    make_unitary_dqta,
    turing_tensor,
)


@dataclass(frozen=True)
class Qta:
    """Undirected automaton: unitary transition on H (x) N."""

    h: int
    n: int
    tau: Operator

    def __post_init__(self):
        if self.h <= 0 or self.n < 0:
            raise ShapeError(f"bad dims h={self.h}, n={self.n}")
        if self.tau.rows != self.h * self.n or self.tau.cols != self.h * self.n:
            raise ShapeError(
                f"transition is {self.tau.rows}x{self.tau.cols}, expected "
                f"square of size {self.h * self.n}")


def make_qta(h: int, n: int, tau: Operator, tol: float = DQTA_TOL) -> Qta:
    """Validated construction; rejects non-unitary transitions."""
    q = Qta(h, n, tau)
    defect = unitary_defect(tau)
    if defect > tol:
        raise IsometryError("transition must be unitary", defect)
    return q


@dataclass(frozen=True)
class Int0Morphism:
    """Rank-k to rank-l morphism carried by a unitary automaton.

    The carrier's input interface is K (+) L and its output is L (+) K.
    """

    src: int
    dst: int
    carrier: UnitaryDqta

    def __post_init__(self):
        if self.src < 0 or self.dst < 0:
            raise ShapeError(f"bad ranks {self.src}, {self.dst}")
        if self.carrier.k != self.src + self.dst:
            raise ShapeError(
                f"carrier interface {self.carrier.k} != {self.src} + {self.dst}")


def _route(dims, perm) -> UnitaryDqta:
    """Stateless automaton permuting interface summands."""
    op = block_perm(dims, perm)
    return make_unitary_dqta(1, op.cols, op)


def int_identity(k: int) -> Int0Morphism:
    return Int0Morphism(k, k, make_unitary_dqta(1, 2 * k, identity(2 * k)))


def int_symmetry(k: int, l: int) -> Int0Morphism:
    """The braiding (K,L) -> (L,K): swap forward copies, swap return copies."""
    tau = dsum(sum_swap(k, l), sum_swap(l, k))
    return Int0Morphism(k + l, l + k, make_unitary_dqta(1, 2 * (k + l), tau))


def int_compose(f: Int0Morphism, g: Int0Morphism) -> Int0Morphism:
    """Loop composition: f's forward middle copy feeds g, g's return feeds f.

    Both middle copies are routed to the leading interface position of
    the tensored carrier and closed with one feedback over 2 * middle.
    """
    if f.dst != g.src:
        raise ShapeError(f"middle rank mismatch: {f.dst} != {g.src}")
    k, l, m = f.src, f.dst, g.dst
    x = turing_tensor(f.carrier, g.carrier)
    # x input summands  [K, Lret_f, Lin_g, Mret], output [Lfwd_f, Kret, Mfwd, Lret_g]
    route_in = _route([l, l, k, m], [1, 2, 0, 3])    # loop copies first
    route_out = _route([l, k, m, l], [1, 3, 2, 0])   # -> [Lret_g, Lfwd_f, Mfwd, Kret]
    y = cascade(cascade(route_in, x), route_out)
    closed = feedback_dqta(y, 2 * l)
    carrier = make_unitary_dqta(closed.h, k + m, closed.tau, tol=COMPOSITE_TOL)
    return Int0Morphism(k, m, carrier)


def int_tensor(f: Int0Morphism, g: Int0Morphism) -> Int0Morphism:
    """Monoidal product: ranks add, with the middle summands interleaved.

    The tensored carrier orders summands machine-by-machine; two block
    swaps regroup them as forward-parts-first, return-parts-last.
    """
    k, l, kp, lp = f.src, f.dst, g.src, g.dst
    x = turing_tensor(f.carrier, g.carrier)
    pre = make_unitary_dqta(
        1, k + kp + l + lp,
        dsum(identity(k), dsum(sum_swap(kp, l), identity(lp))))
    post = make_unitary_dqta(
        1, l + lp + k + kp,
        dsum(identity(l), dsum(sum_swap(k, lp), identity(kp))))
    y = cascade(cascade(pre, x), post)
    carrier = make_unitary_dqta(y.h, k + kp + l + lp, y.tau, tol=COMPOSITE_TOL)
    return Int0Morphism(k + kp, l + lp, carrier)


def int_dagger(f: Int0Morphism) -> Int0Morphism:
    """Reverse a morphism by conjugating its carrier with interface swaps.

    Purely a renaming of summands, so dagger(dagger(f)) is exactly f and
    the operation is contravariant over int_compose.
    """
    k, l = f.src, f.dst
    swap = kron(identity(f.carrier.h), sum_swap(l, k))
    tau = Operator(swap.mat @ f.carrier.tau.mat @ swap.mat)
    carrier = make_unitary_dqta(f.carrier.h, l + k, tau, tol=COMPOSITE_TOL)
    return Int0Morphism(l, k, carrier)


def int_units(x: int):
    """Unit (rank 0 -> 2x) and counit (rank 2x -> 0), both carried by the
    interface swap; returns (d, e)."""
    c = make_unitary_dqta(1, 2 * x, sum_swap(x, x))
    return Int0Morphism(0, 2 * x, c), Int0Morphism(2 * x, 0, c)


def canonical_trace(f: Int0Morphism, u: int) -> Int0Morphism:
    """Close a loop over the leading rank-u summand using unit and counit.

    Evaluates bend-up, run f beside an identity, bend-down; equals the
    automaton-level feedback on images of bidirectionalize.
    """
    if u < 0 or u > f.src or u > f.dst:
        raise ShapeError(f"trace rank {u} exceeds ({f.src}, {f.dst})")
    k, l = f.src - u, f.dst - u
    d, e = int_units(u)
    bend_up = int_tensor(d, int_identity(k))
    run = int_tensor(int_identity(u), f)
    bend_down = int_tensor(e, int_identity(l))
    return int_compose(int_compose(bend_up, run), bend_down)


def name_of(f: Int0Morphism) -> Qta:
    """Flatten a morphism to an undirected automaton on rank src + dst.

    Post-composes the carrier with the interface swap, turning the map
    K (+) L -> L (+) K into a square operator on K (+) L.
    """
    h = f.carrier.h
    swap = kron(identity(h), sum_swap(f.dst, f.src))
    tau = Operator(swap.mat @ f.carrier.tau.mat)
    return make_qta(h, f.src + f.dst, tau, tol=COMPOSITE_TOL)


def unname(q: Qta, src: int, dst: int) -> Int0Morphism:
    """Exact inverse of name_of for the given rank split."""
    if src < 0 or dst < 0 or src + dst != q.n:
        raise ShapeError(f"rank split {src} + {dst} != {q.n}")
    swap = kron(identity(q.h), sum_swap(src, dst))
    tau = Operator(swap.mat @ q.tau.mat)
    carrier = make_unitary_dqta(q.h, src + dst, tau, tol=COMPOSITE_TOL)
    return Int0Morphism(src, dst, carrier)


def as_int0(t: Dqta, src: int) -> Int0Morphism:
    """View a square automaton with [forward, backward] interface layout
    on both sides as a morphism from rank src to rank k - src."""
    if t.k != t.l:
        raise ShapeError(f"need a square automaton, got {t.k} -> {t.l}")
    if src < 0 or src > t.k:
        raise ShapeError(f"forward rank {src} exceeds interface {t.k}")
    dst = t.k - src
    swap = kron(identity(t.h), sum_swap(src, dst))
    carrier = make_unitary_dqta(t.h, t.k, Operator(swap.mat @ t.tau.mat),
                                tol=COMPOSITE_TOL)
    return Int0Morphism(src, dst, carrier)


def functor_image(t: Dqta, tol: float = DQTA_TOL) -> Int0Morphism:
    """The forward/backward pair t (+) dagger(t) as a rank k -> l morphism."""
    x = turing_tensor(t, dagger_dqta(t, tol=tol))
    carrier = make_unitary_dqta(x.h, t.k + t.l, x.tau, tol=COMPOSITE_TOL)
    return Int0Morphism(t.k, t.l, carrier)


def bidirectionalize(t: Dqta, tol: float = DQTA_TOL) -> Qta:
    """Undirected automaton of a directed one: name of t (+) dagger(t).

    The rank is t.k + t.l and the state space squares; distinct inputs
    stay distinct.
    """
    return name_of(functor_image(t, tol=tol))
