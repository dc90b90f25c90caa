"""The Hilbertian tensor norm, its dual, and theorem-verification routines.

``gamma2`` of a behavior is the minimal product of the two sign-form
operator norms over factorizations of the behavior through a Hilbert
space; ``gamma2_star`` is its dual, an upper bound on the entangled
value of a game (tight for XOR games).  Both reduce to small dense SDPs:

* a behavior factors through a Hilbert space iff there is a PSD Gram
  matrix over the (question, answer) labels of both sides whose cross
  block equals the behavior;
* the relevant operator norms equal the maximum over questions and
  sign patterns ``s`` of ``||sum_a s(a) * vector(question, a)||_2``, so
  each norm bound becomes ``2^(answers-1)`` quadratic-form constraints
  per question (signs are fixed to +1 on the first answer since
  quadratic forms cannot see a global flip).

The SDP uses a single common bound ``t`` on both sides' sign forms:
factors rescale freely (``R -> c R``, ``S -> S / c``), so at the
optimum both sides saturate and ``t`` equals the product of the two
operator norms, i.e. the norm itself (``t``, not ``t**2``).  The Gram
side length is fixed at ``nx*na + ny*nb``: any factorization induces a
Gram matrix of exactly this side.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Iterator, NamedTuple, Optional

import numpy as np

from . import sdp
from .classical import ClassicalCertificate, injective_norm
from .errors import CapExceeded, SchemaError, SolverFailure
from .games import (
    BehaviorTensor,
    BellFunctional,
    Game,
    MarginalTensor,
    compose,
    game_to_functional,
    is_xor_game,
    one_infty_norm,
)

#: Krivine's transform constant: sinh of it is exactly 1.
KRIVINE_C = math.log(1.0 + math.sqrt(2.0))
#: Best known upper bound on the Grothendieck constant, pi / (2 * KRIVINE_C).
GROTHENDIECK_K = math.pi / (2.0 * KRIVINE_C)

#: Hard cap on answers per side for sign-pattern enumeration.
SIGN_ENUMERATION_CAP = 24
DEFAULT_TOL = 1e-7
_PATTERN_CHUNK = 1 << 14


def sign_patterns(n_answers: int) -> Iterator[np.ndarray]:
    """Chunks of all sign patterns with the first answer pinned to +1.

    Yields float arrays of shape (chunk, n_answers) with entries +-1.
    Bit ``i`` of the pattern code gives the sign of answer ``i + 1``
    (0 meaning +1), so enumeration order is deterministic.
    """
    if n_answers < 1:
        raise SchemaError("sign patterns need at least one answer")
    if n_answers > SIGN_ENUMERATION_CAP:
        raise CapExceeded(
            f"{n_answers} answers exceed the sign enumeration cap "
            f"{SIGN_ENUMERATION_CAP}"
        )
    total = 1 << (n_answers - 1)
    for start in range(0, total, _PATTERN_CHUNK):
        codes = np.arange(start, min(start + _PATTERN_CHUNK, total), dtype=np.uint32)
        block = np.ones((codes.size, n_answers))
        for i in range(n_answers - 1):
            block[:, i + 1] = np.where((codes >> i) & 1, -1.0, 1.0)
        yield block


@dataclasses.dataclass(frozen=True)
class VectorSystem:
    """Real vectors indexed by (question, answer) for one side.

    The array layout is ``vectors[question, answer, coordinate]``.
    """

    side: str
    vectors: np.ndarray

    def __post_init__(self) -> None:
        if self.side not in ("A", "B"):
            raise SchemaError(f"side must be 'A' or 'B', got {self.side!r}")
        vec = np.array(self.vectors, dtype=float)
        if vec.ndim != 3:
            raise SchemaError("vectors must have shape (questions, answers, dim)")
        if not np.all(np.isfinite(vec)):
            raise SchemaError("vector system has non-finite entries")
        vec.flags.writeable = False
        object.__setattr__(self, "vectors", vec)

    @property
    def n_questions(self) -> int:
        return self.vectors.shape[0]

    @property
    def n_answers(self) -> int:
        return self.vectors.shape[1]

    @property
    def dim(self) -> int:
        return self.vectors.shape[2]


class SignOpNorm(NamedTuple):
    """An operator-norm value with the sign pattern attaining it."""

    value: float
    question: int
    signs: tuple[int, ...]


def _sign_form_max(vs: VectorSystem) -> SignOpNorm:
    best = -1.0
    best_q = 0
    best_signs: tuple[int, ...] = ()
    for q in range(vs.n_questions):
        mats = vs.vectors[q]  # (answers, dim)
        gram = mats @ mats.T
        for block in sign_patterns(vs.n_answers):
            # ||sum_a s(a) v_a||^2 = s^T Gram s, batched over patterns.
            vals = np.einsum("pa,ab,pb->p", block, gram, block)
            k = int(np.argmax(vals))
            if vals[k] > best:
                best = float(vals[k])
                best_q = q
                best_signs = tuple(int(t) for t in block[k])
    return SignOpNorm(math.sqrt(max(best, 0.0)), best_q, best_signs)


def opnorm_1inf_to_2(vs: VectorSystem) -> SignOpNorm:
    """Operator norm of the column matrix of an A-side vector system.

    Equals the max over questions and sign patterns of the 2-norm of the
    signed answer sum; with one answer it is just the largest column
    2-norm.
    """
    return _sign_form_max(vs)


def opnorm_2_to_inf1(vs: VectorSystem) -> SignOpNorm:
    """Operator norm of the row matrix of a B-side vector system.

    By operator-norm duality this is the same sign-form maximum as
    :func:`opnorm_1inf_to_2` evaluated on the transposed system, so both
    functions share one kernel and agree bit-for-bit on equal data.
    """
    return _sign_form_max(vs)


# ---------------------------------------------------------------------------
# Gram witnesses
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class GramWitness:
    """PSD Gram matrix certifying a factorization through Hilbert space.

    Rows/columns are A-side labels ``(x, a)`` (row ``x * na + a``)
    followed by B-side labels ``(y, b)`` (row ``nx * na + y * nb + b``).
    ``bound`` is the common sign-form bound ``t`` achieved on both
    diagonal blocks.
    """

    z: np.ndarray
    nx: int
    na: int
    ny: int
    nb: int
    bound: float

    def __post_init__(self) -> None:
        z = np.array(self.z, dtype=float)
        side = self.nx * self.na + self.ny * self.nb
        if z.shape != (side, side):
            raise SchemaError(
                f"witness side {z.shape} does not match labels ({side})"
            )
        z = 0.5 * (z + z.T)
        trace = float(np.trace(z))
        low = float(np.linalg.eigvalsh(z)[0])
        if low < -1e-8 * max(trace, 1.0):
            raise SchemaError(
                f"witness is indefinite: min eigenvalue {low!r} at trace {trace!r}"
            )
        z.flags.writeable = False
        object.__setattr__(self, "z", z)

    def index(self, side: str, question: int, answer: int) -> int:
        if side == "A":
            return question * self.na + answer
        if side == "B":
            return self.nx * self.na + question * self.nb + answer
        raise SchemaError(f"side must be 'A' or 'B', got {side!r}")

    def cross_block(self) -> np.ndarray:
        """The (x, a, y, b) tensor held in the A-by-B block."""
        na_rows = self.nx * self.na
        return np.array(self.z[:na_rows, na_rows:]).reshape(
            self.nx, self.na, self.ny, self.nb
        )


def witness_vectors(w: GramWitness) -> tuple[VectorSystem, VectorSystem]:
    """Eigen-factorize a witness into explicit A- and B-side vectors.

    Negative eigenvalues down to -1e-8 (relative to the trace) are
    floored to zero; anything lower is rejected as too indefinite.  The
    returned Gram products reproduce the witness to 1e-6.
    """
    vals, vecs = np.linalg.eigh(w.z)
    trace = max(float(np.trace(w.z)), 1.0)
    if float(vals[0]) < -1e-8 * trace:
        raise SchemaError(
            f"witness too indefinite to factor: min eigenvalue {float(vals[0])!r}"
        )
    coords = vecs * np.sqrt(np.clip(vals, 0.0, None))
    na_rows = w.nx * w.na
    side_a = coords[:na_rows].reshape(w.nx, w.na, coords.shape[1])
    side_b = coords[na_rows:].reshape(w.ny, w.nb, coords.shape[1])
    return VectorSystem("A", side_a), VectorSystem("B", side_b)


# ---------------------------------------------------------------------------
# The two norms as SDPs
# ---------------------------------------------------------------------------


def _label_indices(nx: int, na: int, ny: int, nb: int):
    def ia(x: int, a: int) -> int:
        return x * na + a

    def ib(y: int, b: int) -> int:
        return nx * na + y * nb + b

    return ia, ib


def _sign_form_constraints(
    dim: int, nx: int, na: int, ny: int, nb: int, t_slot: Optional[int]
) -> list[tuple[np.ndarray, float]]:
    """One quadratic-form constraint per (question, sign pattern), both sides.

    With a ``t_slot`` the form is bounded by the slot's diagonal entry
    (rhs 0); without, by the constant 1.
    """
    ia, ib = _label_indices(nx, na, ny, nb)
    out: list[tuple[np.ndarray, float]] = []

    def add(indices: list[int], n_answers: int) -> None:
        for block in sign_patterns(n_answers):
            for pattern in block:
                mat = np.zeros((dim, dim))
                mat[np.ix_(indices, indices)] = np.outer(pattern, pattern)
                if t_slot is None:
                    out.append((mat, 1.0))
                else:
                    mat[t_slot, t_slot] = -1.0
                    out.append((mat, 0.0))

    for x in range(nx):
        add([ia(x, a) for a in range(na)], na)
    for y in range(ny):
        add([ib(y, b) for b in range(nb)], nb)
    return out


def _check_sign_cap(na: int, nb: int) -> None:
    for k in (na, nb):
        if k > SIGN_ENUMERATION_CAP:
            raise CapExceeded(
                f"{k} answers exceed the sign enumeration cap "
                f"{SIGN_ENUMERATION_CAP}"
            )


@dataclasses.dataclass(frozen=True)
class Gamma2Result:
    """gamma2 value with its PSD witness and the solver's certification."""

    value: float
    gap: float
    witness: GramWitness
    solution: sdp.SdpSolution


@dataclasses.dataclass(frozen=True)
class Gamma2StarResult:
    """gamma2* value, the behavior attaining it, witness and certification."""

    value: float
    gap: float
    optimizer: BehaviorTensor
    witness: GramWitness
    solution: sdp.SdpSolution


def _solved(problem: sdp.SdpProblem, tol: float, what: str) -> sdp.SdpSolution:
    # Solve tighter than asked (witnesses carry 1e-7 invariants of their
    # own); fall back to the caller's tolerance when the extra digits are
    # out of numerical reach.
    strict = min(tol, 1e-8)
    solution = sdp.solve(problem, tol=strict, mehrotra=True)
    if solution.status == "infeasible":
        # The Gram embedding always admits a feasible point, so this can
        # only be a numerical breakdown.
        raise SolverFailure(f"{what}: solver declared an infeasible embedding")
    if solution.status != "optimal":
        primal_res, dual_res, _ = solution.kkt_residuals
        within_contract = (
            solution.gap <= tol
            and primal_res <= 10.0 * tol
            and dual_res <= 10.0 * tol
        )
        if not within_contract:
            raise SolverFailure(
                f"{what}: no certified optimum within iteration budget "
                f"(gap {solution.gap!r})"
            )
    return solution


def gamma2(p: BehaviorTensor, tol: float = DEFAULT_TOL) -> Gamma2Result:
    """Hilbertian tensor norm of a behavior, with a Gram witness.

    Minimizes the common sign-form bound ``t`` over PSD Gram matrices
    whose cross block equals ``p``; the minimum equals the norm (see the
    module docstring for why the balanced bound is exact).
    """
    nx, ny, na, nb = p.nx, p.ny, p.na, p.nb
    _check_sign_cap(na, nb)
    side = nx * na + ny * nb
    dim = side + 1
    t_slot = side
    ia, ib = _label_indices(nx, na, ny, nb)

    objective = np.zeros((dim, dim))
    objective[t_slot, t_slot] = 1.0
    eqs = []
    for x in range(nx):
        for a in range(na):
            for y in range(ny):
                for b in range(nb):
                    mat = np.zeros((dim, dim))
                    mat[ia(x, a), ib(y, b)] = 0.5
                    mat[ib(y, b), ia(x, a)] = 0.5
                    eqs.append((mat, float(p.p[x, a, y, b])))
    ineqs = _sign_form_constraints(dim, nx, na, ny, nb, t_slot)
    problem = sdp.SdpProblem(
        dim=dim,
        sense="minimize",
        objective=objective,
        eq_constraints=tuple(eqs),
        ineq_constraints=tuple(ineqs),
    )
    solution = _solved(problem, tol, "gamma2")
    value = float(solution.primal_value)
    witness = GramWitness(
        z=solution.z[:side, :side], nx=nx, na=na, ny=ny, nb=nb, bound=value
    )
    mismatch = float(np.abs(witness.cross_block() - p.p).max())
    if mismatch > 1e-7:
        raise SolverFailure(
            f"gamma2 witness drifts from its behavior by {mismatch!r}"
        )
    return Gamma2Result(value=value, gap=float(solution.gap), witness=witness,
                        solution=solution)


def gamma2_star(g: BellFunctional, tol: float = DEFAULT_TOL) -> Gamma2StarResult:
    """Dual Hilbertian norm: the pairing maximized over the gamma2 unit ball.

    The ball is exactly the set of cross blocks of PSD Gram matrices
    with all sign forms at most 1 on both sides; the ball's symmetry
    under negating one side absorbs the absolute value.
    """
    nx, ny, na, nb = g.nx, g.ny, g.na, g.nb
    _check_sign_cap(na, nb)
    side = nx * na + ny * nb
    ia, ib = _label_indices(nx, na, ny, nb)
    objective = np.zeros((side, side))
    for x in range(nx):
        for a in range(na):
            for y in range(ny):
                for b in range(nb):
                    objective[ia(x, a), ib(y, b)] += 0.5 * g.g[x, a, y, b]
                    objective[ib(y, b), ia(x, a)] += 0.5 * g.g[x, a, y, b]
    ineqs = _sign_form_constraints(side, nx, na, ny, nb, None)
    problem = sdp.SdpProblem(
        dim=side,
        sense="maximize",
        objective=objective,
        ineq_constraints=tuple(ineqs),
    )
    solution = _solved(problem, tol, "gamma2_star")
    witness = GramWitness(
        z=solution.z, nx=nx, na=na, ny=ny, nb=nb, bound=1.0
    )
    optimizer = BehaviorTensor(witness.cross_block())
    return Gamma2StarResult(
        value=float(solution.primal_value),
        gap=float(solution.gap),
        optimizer=optimizer,
        witness=witness,
        solution=solution,
    )


@dataclasses.dataclass(frozen=True)
class XorValue:
    """Entangled value of an XOR game and its internal cross-check.

    ``value`` comes from the dual-norm SDP on the full game tensor;
    ``bias_value`` re-derives it from the correlation-form SDP on the
    signed predicate via value = base + quantum bias, where ``base`` is
    the question-averaged half-sum of the two predicate branches.
    """

    value: float
    gap: float
    bias_value: float
    agreement: float


def xor_entangled_value(game: Game, tol: float = DEFAULT_TOL) -> XorValue:
    """Entangled value of an XOR game (the dual norm is tight for these).

    Raises SchemaError if the game is not an XOR game, and SolverFailure
    if the two independent SDP routes disagree beyond ``10 * tol``.
    """
    if not is_xor_game(game):
        raise SchemaError("xor_entangled_value requires an XOR game")
    main = gamma2_star(game_to_functional(game), tol=tol)

    # Correlation route: value = base + max_corr sum pi * (v_eq - v_neq)/2 * corr.
    v_eq = game.v[:, :, 0, 0]
    v_neq = game.v[:, :, 0, 1]
    base = float((game.pi * (v_eq + v_neq)).sum()) / 2.0
    weights = game.pi * (v_eq - v_neq) / 2.0
    corr_functional = BellFunctional(
        weights[:, None, :, None]
    )
    bias = gamma2_star(corr_functional, tol=tol)
    bias_value = base + bias.value
    agreement = abs(main.value - bias_value)
    if agreement > 10.0 * tol * (1.0 + abs(main.value)):
        raise SolverFailure(
            f"XOR value routes disagree by {agreement!r} "
            f"({main.value!r} vs {bias_value!r})"
        )
    return XorValue(
        value=main.value,
        gap=main.gap,
        bias_value=bias_value,
        agreement=agreement,
    )


# ---------------------------------------------------------------------------
# Decomposition-based bounds
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Decomposition:
    """A weighted decomposition ``sum_ij mu[i,j] left_i (x) right_j``."""

    mu: np.ndarray
    lefts: tuple[MarginalTensor, ...]
    rights: tuple[MarginalTensor, ...]

    def __post_init__(self) -> None:
        mu = np.array(self.mu, dtype=float)
        lefts = tuple(self.lefts)
        rights = tuple(self.rights)
        if mu.ndim != 2 or mu.shape != (len(lefts), len(rights)):
            raise SchemaError(
                f"mu shape {mu.shape} does not match term counts "
                f"({len(lefts)}, {len(rights)})"
            )
        if not lefts or not rights:
            raise SchemaError("decomposition needs at least one term per side")
        for seq, side in ((lefts, "A"), (rights, "B")):
            shapes = {m.entries.shape for m in seq}
            spaces = {m.space for m in seq}
            if len(shapes) != 1 or len(spaces) != 1:
                raise SchemaError(f"{side}-side terms must share shape and space")
            if any(m.side != side for m in seq):
                raise SchemaError(f"{side}-side terms carry the wrong side tag")
        mu.flags.writeable = False
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "lefts", lefts)
        object.__setattr__(self, "rights", rights)

    @property
    def space(self) -> str:
        return self.lefts[0].space

    def reconstruct(self) -> np.ndarray:
        """The (x, a, y, b) tensor the decomposition sums to."""
        left_stack = np.stack([m.entries for m in self.lefts])
        right_stack = np.stack([m.entries for m in self.rights])
        return np.einsum("ij,ixa,jyb->xayb", self.mu, left_stack, right_stack)


def gamma2_star_decomposition_bound(d: Decomposition) -> float:
    """Upper bound on gamma2* of the reconstructed dual tensor.

    Spectral norm of the weight matrix times the l2 aggregates of the
    marginal dual norms; any decomposition witnesses such a bound.
    """
    if d.space != "dual":
        raise SchemaError("gamma2* decomposition bound needs dual-tagged marginals")
    left_l2 = math.sqrt(sum(one_infty_norm(m) ** 2 for m in d.lefts))
    right_l2 = math.sqrt(sum(one_infty_norm(m) ** 2 for m in d.rights))
    return sdp.spectral_norm(d.mu) * left_l2 * right_l2


def _w2(marginals: tuple[MarginalTensor, ...]) -> float:
    """Max over dual-ball extreme points of the l2 profile of the pairings.

    Extreme points of the dual (sum-of-row-max) unit ball concentrate on
    a single question with a +-1 sign row, so the supremum is a finite
    maximum; squares make the pinned first sign harmless.
    """
    stack = np.stack([m.entries for m in marginals])  # (terms, nq, na)
    best = 0.0
    for q in range(stack.shape[1]):
        rows = stack[:, q, :]  # (terms, na)
        for block in sign_patterns(stack.shape[2]):
            vals = (block @ rows.T) ** 2  # (patterns, terms)
            best = max(best, float(vals.sum(axis=1).max()))
    return math.sqrt(best)


def w2_bound(d: Decomposition) -> float:
    """Upper bound on gamma2 of a primal tensor from a plain decomposition.

    Requires an identity weight matrix (terms paired one to one): the
    bound is the product of the two w2 aggregates.
    """
    if d.space != "primal":
        raise SchemaError("w2 bound needs primal-tagged marginals")
    if d.mu.shape[0] != d.mu.shape[1] or not np.array_equal(
        d.mu, np.eye(d.mu.shape[0])
    ):
        raise SchemaError("w2 bound needs a plain (identity-weight) decomposition")
    return _w2(d.lefts) * _w2(d.rights)


# ---------------------------------------------------------------------------
# Theorem verification
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class GrothendieckReport:
    """Ratio check gamma2* <= K * sqrt(na * nb) * epsilon for one tensor."""

    ratio: float
    bound: float
    passed: bool
    epsilon: float
    gamma2_star_value: float
    gap: float
    undefined: bool = False


def verify_grothendieck(
    g: BellFunctional, tol: float = DEFAULT_TOL
) -> GrothendieckReport:
    """Check the norm-ratio bound with constant pi / (2 ln(1 + sqrt 2)).

    A zero functional has no ratio and is reported as undefined rather
    than as a pass or failure.
    """
    eps_cert: ClassicalCertificate = injective_norm(g)
    star = gamma2_star(g, tol=tol)
    bound = GROTHENDIECK_K * math.sqrt(g.na * g.nb)
    if eps_cert.value < 1e-12:
        return GrothendieckReport(
            ratio=math.nan,
            bound=bound,
            passed=False,
            epsilon=eps_cert.value,
            gamma2_star_value=star.value,
            gap=star.gap,
            undefined=True,
        )
    ratio = star.value / eps_cert.value
    return GrothendieckReport(
        ratio=ratio,
        bound=bound,
        passed=ratio <= bound + 1e-6,
        epsilon=eps_cert.value,
        gamma2_star_value=star.value,
        gap=star.gap,
    )


def _is_xor_functional(g: BellFunctional) -> bool:
    if g.na != 2 or g.nb != 2:
        return False
    t = g.g
    return bool(
        np.array_equal(t[:, 0, :, 0], t[:, 1, :, 1])
        and np.array_equal(t[:, 0, :, 1], t[:, 1, :, 0])
        and np.all(t >= 0.0)
    )


@dataclasses.dataclass(frozen=True)
class DirectProductReport:
    """Submultiplicativity check of gamma2* under parallel composition."""

    lhs: float
    rhs: float
    passed: bool
    gap: float
    xor_gap: Optional[float] = None


def verify_direct_product(
    g1: BellFunctional, g2: BellFunctional, tol: float = DEFAULT_TOL
) -> DirectProductReport:
    """Check gamma2*(g1 (x) g2) <= gamma2*(g1) * gamma2*(g2).

    For XOR-game tensors the composition is exactly multiplicative, so
    the absolute difference is additionally reported as ``xor_gap``.
    """
    lhs = gamma2_star(compose(g1, g2), tol=tol)
    r1 = gamma2_star(g1, tol=tol)
    r2 = gamma2_star(g2, tol=tol)
    rhs = r1.value * r2.value
    passed = lhs.value <= rhs + 1e-5 * (1.0 + rhs)
    xor_gap = (
        abs(lhs.value - rhs)
        if _is_xor_functional(g1) and _is_xor_functional(g2)
        else None
    )
    return DirectProductReport(
        lhs=lhs.value, rhs=rhs, passed=passed, gap=lhs.gap, xor_gap=xor_gap
    )
