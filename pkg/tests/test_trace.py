import numpy as np
import pytest

from qta.linalg import (
    IsometryError,
    Operator,
    ShapeError,
    adjoint,
    compose_then,
    identity,
    isometry_defect,
    op_distance,
    random_isometry,
    sum_swap,
    zeros,
)
from qta.trace import (
    BlockMap,
    ConvergenceReport,
    FactorizationError,
    kernel_image_trace,
    kleene_feedback,
    scalar_star,
    schur_feedback,
    split_blocks,
)

SWAP = Operator([[0, 1], [1, 0]])
ROTATION = Operator([[0, -1], [1, 0]])


def random_blockmap(u, k, l, seed):
    return BlockMap(random_isometry(u + l, u + k, seed), u, k, l)


def psd_sqrt(m):
    vals, vecs = np.linalg.eigh(m)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def dilation_blockmap(a):
    """Unitary with prescribed top-left block a (any contraction)."""
    u = a.shape[0]
    top = np.hstack([a, psd_sqrt(np.eye(u) - a @ a.conj().T)])
    bot = np.hstack([psd_sqrt(np.eye(u) - a.conj().T @ a), -a.conj().T])
    op = Operator(np.vstack([top, bot]))
    assert isometry_defect(op) <= 1e-12
    return BlockMap(op, u, u, u)


# ------------------------------------------------------------ split_blocks

def test_split_blocks_swap():
    a, b, c, d = split_blocks(BlockMap(SWAP, 1, 1, 1))
    assert a.mat[0, 0] == 0 and d.mat[0, 0] == 0
    assert b.mat[0, 0] == 1 and c.mat[0, 0] == 1


def test_split_blocks_degenerate_splits():
    op = random_isometry(3, 2, 0)
    a, b, c, d = split_blocks(BlockMap(op, 0, 2, 3))
    assert a.mat.shape == (0, 0) and b.mat.shape == (3, 0) and c.mat.shape == (0, 2)
    assert op_distance(d, op) == 0.0
    sq = random_isometry(3, 3, 1)
    a, b, c, d = split_blocks(BlockMap(sq, 3, 0, 0))
    assert d.mat.shape == (0, 0)
    assert op_distance(a, sq) == 0.0


def test_blockmap_shape_validation():
    with pytest.raises(ShapeError):
        BlockMap(SWAP, 1, 1, 2)
    with pytest.raises(ValueError):
        BlockMap(SWAP, -1, 2, 2)


# ---------------------------------------------------------- schur_feedback

def test_schur_yanking_on_swap():
    out = schur_feedback(BlockMap(SWAP, 1, 1, 1))
    assert np.allclose(out.mat, [[1.0]])


def test_schur_rotation():
    out = schur_feedback(BlockMap(ROTATION, 1, 1, 1))
    assert np.allclose(out.mat, [[-1.0]])


def test_schur_kernel_case():
    phi = 0.7
    op = Operator(np.diag([1.0, np.exp(1j * phi)]))
    out = schur_feedback(BlockMap(op, 1, 1, 1))
    assert np.allclose(out.mat, [[np.exp(1j * phi)]])


def test_schur_rejects_non_isometry():
    bad = Operator([[1, 0], [1, 0]])
    with pytest.raises(IsometryError) as err:
        schur_feedback(BlockMap(bad, 1, 1, 1))
    assert err.value.defect == pytest.approx(1.0)


def test_schur_preserves_isometry():
    rng = np.random.default_rng(20)
    for i in range(100):
        u = int(rng.integers(0, 7))
        k = int(rng.integers(0, 7))
        l = k + int(rng.integers(0, 3))
        m = random_blockmap(u, k, l, int(rng.integers(0, 2**31)))
        out = schur_feedback(m)
        assert out.rows == l and out.cols == k
        assert isometry_defect(out) <= 1e-8


def test_schur_core_identity_when_invertible():
    # with (I - A) square invertible the closed form reduces to a plain
    # inverse and the result composed with its adjoint gives the identity
    rng = np.random.default_rng(21)
    checked = 0
    for i in range(60):
        u = int(rng.integers(1, 6))
        k = int(rng.integers(1, 6))
        m = random_blockmap(u, k, k, int(rng.integers(0, 2**31)))
        a, b, c, d = split_blocks(m)
        n = np.eye(u) - a.mat
        if np.linalg.cond(n) > 1e6:
            continue
        checked += 1
        s = Operator(d.mat + b.mat @ np.linalg.inv(n) @ c.mat)
        assert op_distance(compose_then(s, adjoint(s)), identity(k)) <= 1e-8
        assert op_distance(s, schur_feedback(m)) <= 1e-8
    assert checked >= 40


def test_degenerate_witness_nested_and_joint():
    op = Operator([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    inner = schur_feedback(BlockMap(op, 1, 2, 2))
    # the inner feedback leaves an automaton whose loop block is exactly 1
    assert np.allclose(inner.mat, np.eye(2))
    nested = schur_feedback(BlockMap(inner, 1, 1, 1))
    joint = schur_feedback(BlockMap(op, 2, 1, 1))
    assert np.allclose(nested.mat, [[1.0]])
    assert np.allclose(joint.mat, [[1.0]])


def test_schur_u_zero_returns_op():
    op = random_isometry(3, 2, 3)
    out = schur_feedback(BlockMap(op, 0, 2, 3))
    assert op_distance(out, op) == 0.0


# --------------------------------------------------------- kleene_feedback

def test_kleene_swap():
    out, report = kleene_feedback(BlockMap(SWAP, 1, 1, 1))
    assert np.allclose(out.mat, [[1.0]])
    assert report.converged and report.steps == 1


def test_kleene_kernel_case_converges_immediately():
    op = Operator(np.diag([1.0, np.exp(0.3j)]))
    out, report = kleene_feedback(BlockMap(op, 1, 1, 1))
    assert np.allclose(out.mat, [[np.exp(0.3j)]])
    assert report.converged and report.steps == 0


def test_kleene_u_zero():
    op = random_isometry(2, 2, 4)
    out, report = kleene_feedback(BlockMap(op, 0, 2, 2))
    assert report.steps == 0 and report.converged
    assert op_distance(out, op) == 0.0


def test_kleene_agrees_with_schur_at_radius_half():
    rng = np.random.default_rng(22)
    for i in range(20):
        u = int(rng.integers(1, 5))
        a = (rng.standard_normal((u, u)) + 1j * rng.standard_normal((u, u)))
        radius = max(np.abs(np.linalg.eigvals(a)))
        a = 0.5 * a / radius  # spectral radius exactly 0.5
        m = dilation_blockmap(a)
        out, report = kleene_feedback(m, max_n=10_000, tol=1e-12)
        assert report.converged
        assert op_distance(out, schur_feedback(m)) <= 1e-8


def test_kleene_reports_nonconvergence_when_budget_too_small():
    # loop eigenvalue 0.999: increments decay like 0.999^n, far above the
    # tolerance after 50 steps, and the report must say so rather than
    # pretend the last iterate is the limit
    m = dilation_blockmap(np.array([[0.999]]))
    out, report = kleene_feedback(m, max_n=50, tol=1e-12)
    assert not report.converged
    assert report.residual > 1e-12
    assert report.mode == "partial-sums"


def test_kleene_cesaro_agrees_on_converging_instance():
    # cesaro averaging of a convergent sequence keeps the same limit; the
    # averages trail the partial sums, so the agreement bound is loose
    m = dilation_blockmap(np.array([[0.5]]))
    out, report = kleene_feedback(m, max_n=100_000, tol=1e-8, mode="cesaro")
    assert report.converged
    assert report.mode == "cesaro"
    assert op_distance(out, schur_feedback(m)) <= 1e-3


def test_kleene_rejects_unknown_mode():
    with pytest.raises(ValueError):
        kleene_feedback(BlockMap(SWAP, 1, 1, 1), mode="abel")


# ------------------------------------------------------ kernel_image_trace

def test_kit_swap():
    out = kernel_image_trace(BlockMap(SWAP, 1, 1, 1))
    assert np.allclose(out.mat, [[1.0]])


def test_kit_kernel_case():
    phi = 1.1
    op = Operator(np.diag([1.0, np.exp(1j * phi)]))
    out = kernel_image_trace(BlockMap(op, 1, 1, 1))
    assert np.allclose(out.mat, [[np.exp(1j * phi)]])


def test_kit_matches_schur_on_random_isometries():
    rng = np.random.default_rng(23)
    for i in range(200):
        u = int(rng.integers(0, 7))
        k = int(rng.integers(0, 7))
        l = k + int(rng.integers(0, 3))
        m = random_blockmap(u, k, l, int(rng.integers(0, 2**31)))
        kit = kernel_image_trace(m)
        assert op_distance(kit, schur_feedback(m)) <= 1e-8


def test_kit_rejects_non_factoring_input():
    # near-isometry with an exact kernel: A = 1 so (I - A) = 0, but B = eps
    # does not vanish.  The defect is eps^2 = 1e-12 (inside the gate) while
    # the factorization residual is eps = 1e-6, far above 100 * tol.
    eps = 1e-6
    s = np.sqrt(1.0 + eps * eps)
    op = Operator([[1.0, -eps / s], [eps, 1.0 / s]])
    assert isometry_defect(op) <= 1e-9
    with pytest.raises(FactorizationError):
        kernel_image_trace(BlockMap(op, 1, 1, 1))


# -------------------------------------------------------------- scalar_star

def test_scalar_star_values():
    assert scalar_star(1.0) == 0.0
    assert scalar_star(0.5) == pytest.approx(2.0)
    assert scalar_star(0.0) == pytest.approx(1.0)


def test_scalar_star_conway_identities():
    # product identity (ab)* = a (ba)* b + 1 holds away from the 1 case
    for a, b in [(0.5, 0.5), (0.2, -0.7), (0.3j, 0.4)]:
        lhs = scalar_star(a * b)
        rhs = a * scalar_star(b * a) * b + 1.0
        assert abs(lhs - rhs) <= 1e-12
    # both identities collapse at a = b = 1 because 1* = 0
    assert scalar_star(1 * 1) == 0.0
    assert 1 * scalar_star(1 * 1) * 1 + 1 == 1.0
    assert scalar_star(1.0 + 1.0) == pytest.approx(-1.0)
    assert scalar_star(scalar_star(1.0) * 1.0) * scalar_star(1.0) == 0.0
