"""Two-prover games, Bell functionals, behaviors and their local norms.

A game is a question distribution together with a 0/1 winning predicate.
Embedded as a 4-index tensor (entry ``pi[x,y] * v[x,y,a,b]``) it pairs
linearly with behavior tensors, which hold conditional probabilities
``p(a,b|x,y)``.  The two local norms implemented here are the
max-of-row-l1 norm on the behavior side and its dual sum-of-row-max norm
on the functional side; both are multiplicative on product tensors,
which is what makes parallel game composition tractable.

Index conventions, used everywhere in this package:

* ``Game.pi``  has shape ``(nx, ny)``,
* ``Game.v``   has shape ``(nx, ny, na, nb)``,
* ``BellFunctional.g`` and ``BehaviorTensor.p`` have shape
  ``(nx, na, ny, nb)``,
* composed indices are flattened row-major with the round-1 index
  outermost, e.g. ``x = x1 * nx2 + x2``.

All objects are immutable after construction (backing arrays are frozen)
and all operations are pure functions, so everything here is safe to
share across threads.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import CapExceeded, DimensionMismatch, SchemaError, SpaceTagError

#: Tolerance for the normalization of a question distribution.
PI_TOL = 1e-12
#: Tolerance for per-(x,y) normalization of a behavior tensor.
BEHAVIOR_NORM_TOL = 1e-10
#: Slack allowed below zero for entries of a nonneg-tagged behavior.
NONNEG_TOL = 1e-12
#: Default cap on the entry count of composed tensors.
DEFAULT_SIZE_CAP = 10**6

Dims = tuple[int, int, int, int]


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.flags.writeable = False
    return out


def _require_finite(a: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(a)):
        raise SchemaError(f"{what} contains non-finite entries")


@dataclasses.dataclass(frozen=True)
class Game:
    """A one-round two-prover game: question distribution plus predicate.

    ``pi`` must be entrywise nonnegative and sum to one within
    ``PI_TOL`` (pass ``renormalize=True`` to rescale a slightly-off
    distribution); ``v`` must be exactly 0/1 valued.
    """

    pi: np.ndarray
    v: np.ndarray
    renormalize: dataclasses.InitVar[bool] = False

    def __post_init__(self, renormalize: bool) -> None:
        pi = np.array(self.pi, dtype=float)
        v = np.array(self.v, dtype=float)
        if pi.ndim != 2:
            raise SchemaError("pi must be a 2-index array over (x, y)")
        if v.shape[:2] != pi.shape or v.ndim != 4:
            raise SchemaError(
                f"v must have shape (nx, ny, na, nb) matching pi, got {v.shape}"
            )
        _require_finite(pi, "pi")
        if np.any(pi < 0.0):
            raise SchemaError("distribution has a negative entry")
        total = float(pi.sum())
        if abs(total - 1.0) > PI_TOL:
            if renormalize and total > 0.0:
                pi = pi / total
            else:
                raise SchemaError(
                    f"distribution not normalized: sum is {total!r}"
                )
        if not np.all((v == 0.0) | (v == 1.0)):
            raise SchemaError("predicate must be 0/1")
        object.__setattr__(self, "pi", _frozen(pi))
        object.__setattr__(self, "v", _frozen(v))

    @property
    def nx(self) -> int:
        return self.pi.shape[0]

    @property
    def ny(self) -> int:
        return self.pi.shape[1]

    @property
    def na(self) -> int:
        return self.v.shape[2]

    @property
    def nb(self) -> int:
        return self.v.shape[3]

    @property
    def dims(self) -> Dims:
        return (self.nx, self.ny, self.na, self.nb)


@dataclasses.dataclass(frozen=True)
class BellFunctional:
    """A real 4-index tensor pairing linearly with behaviors.

    Games embed here with nonnegative entries; general Bell inequalities
    carry arbitrary signs.
    """

    g: np.ndarray

    def __post_init__(self) -> None:
        g = np.array(self.g, dtype=float)
        if g.ndim != 4:
            raise SchemaError("g must be a 4-index array over (x, a, y, b)")
        _require_finite(g, "g")
        object.__setattr__(self, "g", _frozen(g))

    @property
    def nx(self) -> int:
        return self.g.shape[0]

    @property
    def na(self) -> int:
        return self.g.shape[1]

    @property
    def ny(self) -> int:
        return self.g.shape[2]

    @property
    def nb(self) -> int:
        return self.g.shape[3]

    @property
    def dims(self) -> Dims:
        return (self.nx, self.ny, self.na, self.nb)


@dataclasses.dataclass(frozen=True)
class BehaviorTensor:
    """Conditional-probability-shaped tensor ``p[x,a,y,b]``.

    The ``nonneg`` and ``normalized`` tags record which probability
    axioms the entries are claimed (and then checked) to satisfy; SDP
    optimizers that are not probabilities carry both tags as False.
    """

    p: np.ndarray
    nonneg: bool = False
    normalized: bool = False

    def __post_init__(self) -> None:
        p = np.array(self.p, dtype=float)
        if p.ndim != 4:
            raise SchemaError("p must be a 4-index array over (x, a, y, b)")
        _require_finite(p, "p")
        if self.nonneg and np.any(p < -NONNEG_TOL):
            raise SchemaError(
                f"nonneg behavior has entry {float(p.min())!r} below -{NONNEG_TOL}"
            )
        if self.normalized:
            sums = p.sum(axis=(1, 3))
            if np.any(np.abs(sums - 1.0) > BEHAVIOR_NORM_TOL):
                worst = float(np.abs(sums - 1.0).max())
                raise SchemaError(
                    f"normalized behavior has slice sum off by {worst!r}"
                )
        object.__setattr__(self, "p", _frozen(p))

    @property
    def nx(self) -> int:
        return self.p.shape[0]

    @property
    def na(self) -> int:
        return self.p.shape[1]

    @property
    def ny(self) -> int:
        return self.p.shape[2]

    @property
    def nb(self) -> int:
        return self.p.shape[3]

    @property
    def dims(self) -> Dims:
        return (self.nx, self.ny, self.na, self.nb)


@dataclasses.dataclass(frozen=True)
class MarginalTensor:
    """Single-party tensor over (question, answer) with a space tag.

    ``space='primal'`` lives in the max-of-row-l1 unit ball world
    (strategies, behavior marginals); ``space='dual'`` in the
    sum-of-row-max world (functional marginals).  The tag is enforced by
    the norm functions so that the two dual norms cannot be confused.
    """

    side: str
    entries: np.ndarray
    space: str = "primal"

    def __post_init__(self) -> None:
        if self.side not in ("A", "B"):
            raise SchemaError(f"side must be 'A' or 'B', got {self.side!r}")
        if self.space not in ("primal", "dual"):
            raise SchemaError(
                f"space must be 'primal' or 'dual', got {self.space!r}"
            )
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2:
            raise SchemaError("entries must be a 2-index array")
        _require_finite(entries, "marginal entries")
        object.__setattr__(self, "entries", _frozen(entries))

    @property
    def n_questions(self) -> int:
        return self.entries.shape[0]

    @property
    def n_answers(self) -> int:
        return self.entries.shape[1]


# ---------------------------------------------------------------------------
# Pairings and norms
# ---------------------------------------------------------------------------


def game_to_functional(game: Game) -> BellFunctional:
    """Embed a game as the tensor with entries ``pi[x,y] * v[x,y,a,b]``."""
    g = game.pi[:, None, :, None] * game.v.transpose(0, 2, 1, 3)
    return BellFunctional(g)


def pairing(g: BellFunctional, p: BehaviorTensor) -> float:
    """Linear pairing ``sum_{x,a,y,b} g[x,a,y,b] * p[x,a,y,b]``."""
    if g.dims != p.dims:
        raise DimensionMismatch(
            f"functional dims {g.dims} do not match behavior dims {p.dims}"
        )
    return float(np.einsum("xayb,xayb->", g.g, p.p))


def infty1_norm(m: MarginalTensor) -> float:
    """Max over questions of the l1 norm of the answer row (primal tag)."""
    if m.space != "primal":
        raise SpaceTagError("infty1_norm expects a primal-tagged marginal")
    return float(np.abs(m.entries).sum(axis=1).max())


def one_infty_norm(m: MarginalTensor) -> float:
    """Sum over questions of the max answer magnitude (dual tag)."""
    if m.space != "dual":
        raise SpaceTagError("one_infty_norm expects a dual-tagged marginal")
    return float(np.abs(m.entries).max(axis=1).sum())


def infty1_norm_joint(p: BehaviorTensor) -> float:
    """Max over question pairs of the l1 mass of the answer block."""
    return float(np.abs(p.p).sum(axis=(1, 3)).max())


# ---------------------------------------------------------------------------
# Parallel composition
# ---------------------------------------------------------------------------


def _check_size_cap(entries: int, size_cap: int) -> None:
    if entries > size_cap:
        raise CapExceeded(
            f"composed tensor would have {entries} entries, cap is {size_cap}"
        )


def _compose_4tensor(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    """Kronecker composition of two (x, a, y, b) tensors, round 1 outermost."""
    nx1, na1, ny1, nb1 = t1.shape
    nx2, na2, ny2, nb2 = t2.shape
    out = np.einsum("xayb,ucvd->xuacyvbd", t1, t2)
    return np.ascontiguousarray(
        out.reshape(nx1 * nx2, na1 * na2, ny1 * ny2, nb1 * nb2)
    )


def compose(
    g1: BellFunctional, g2: BellFunctional, size_cap: int = DEFAULT_SIZE_CAP
) -> BellFunctional:
    """Parallel composition of two functionals (entrywise product tensor)."""
    entries = int(np.prod([a * b for a, b in zip(g1.dims, g2.dims)]))
    _check_size_cap(entries, size_cap)
    return BellFunctional(_compose_4tensor(g1.g, g2.g))


def compose_games(g1: Game, g2: Game, size_cap: int = DEFAULT_SIZE_CAP) -> Game:
    """Two-round parallel game: product distribution, win-both predicate."""
    entries = int(
        g1.nx * g2.nx * g1.ny * g2.ny * g1.na * g2.na * g1.nb * g2.nb
    )
    _check_size_cap(entries, size_cap)
    pi = np.einsum("xy,uv->xuyv", g1.pi, g2.pi).reshape(
        g1.nx * g2.nx, g1.ny * g2.ny
    )
    v = np.einsum("xyab,uvcd->xuyvacbd", g1.v, g2.v).reshape(
        g1.nx * g2.nx, g1.ny * g2.ny, g1.na * g2.na, g1.nb * g2.nb
    )
    return Game(pi, v)


def compose_behaviors(
    p1: BehaviorTensor, p2: BehaviorTensor, size_cap: int = DEFAULT_SIZE_CAP
) -> BehaviorTensor:
    """Product behavior for playing two rounds independently."""
    entries = int(np.prod([a * b for a, b in zip(p1.dims, p2.dims)]))
    _check_size_cap(entries, size_cap)
    return BehaviorTensor(
        _compose_4tensor(p1.p, p2.p),
        nonneg=p1.nonneg and p2.nonneg,
        normalized=p1.normalized and p2.normalized,
    )


def tensor_marginals(m1: MarginalTensor, m2: MarginalTensor) -> MarginalTensor:
    """Kronecker product of two same-side, same-space marginals."""
    if m1.side != m2.side or m1.space != m2.space:
        raise SpaceTagError("tensor_marginals requires matching side and space")
    return MarginalTensor(m1.side, np.kron(m1.entries, m2.entries), m1.space)


def power(
    g: BellFunctional, n: int, size_cap: int = DEFAULT_SIZE_CAP
) -> BellFunctional:
    """Left-associated n-fold parallel composition; ``power(g, 1) is g``."""
    if n < 1:
        raise ValueError("power requires n >= 1")
    out = g
    for _ in range(n - 1):
        out = compose(out, g, size_cap=size_cap)
    return out


def power_game(g: Game, n: int, size_cap: int = DEFAULT_SIZE_CAP) -> Game:
    """n-fold parallel repetition of a game."""
    if n < 1:
        raise ValueError("power_game requires n >= 1")
    out = g
    for _ in range(n - 1):
        out = compose_games(out, g, size_cap=size_cap)
    return out


# ---------------------------------------------------------------------------
# Strategies and builders
# ---------------------------------------------------------------------------


def _as_answer_array(
    s: Mapping[int, int] | Sequence[int], n_questions: int, n_answers: int, who: str
) -> np.ndarray:
    if isinstance(s, Mapping):
        try:
            arr = np.array([int(s[x]) for x in range(n_questions)])
        except KeyError as exc:
            raise SchemaError(f"{who} strategy missing question {exc}") from exc
    else:
        arr = np.array([int(a) for a in s])
        if arr.shape != (n_questions,):
            raise SchemaError(
                f"{who} strategy answers {arr.shape[0]} of {n_questions} questions"
            )
    if np.any(arr < 0) or np.any(arr >= n_answers):
        raise SchemaError(f"{who} strategy has an out-of-range answer")
    return arr


def strategy_to_behavior(
    sa: Mapping[int, int] | Sequence[int],
    sb: Mapping[int, int] | Sequence[int],
    dims: Dims,
) -> BehaviorTensor:
    """Deterministic product behavior of a strategy pair."""
    nx, ny, na, nb = dims
    a = _as_answer_array(sa, nx, na, "alice")
    b = _as_answer_array(sb, ny, nb, "bob")
    p = np.zeros((nx, na, ny, nb))
    p[np.arange(nx)[:, None], a[:, None], np.arange(ny)[None, :], b[None, :]] = 1.0
    return BehaviorTensor(p, nonneg=True, normalized=True)


def chsh_game() -> Game:
    """Uniform questions, win iff the answer XOR equals the question AND."""
    pi = np.full((2, 2), 0.25)
    v = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    v[x, y, a, b] = 1.0 if (a ^ b) == (x & y) else 0.0
    return Game(pi, v)


def chsh_bell() -> BellFunctional:
    """The CHSH Bell inequality in probability form: +1 winning, -1 losing."""
    g = np.empty((2, 2, 2, 2))
    for x in range(2):
        for a in range(2):
            for y in range(2):
                for b in range(2):
                    g[x, a, y, b] = 1.0 if (a ^ b) == (x & y) else -1.0
    return BellFunctional(g)


def xor_game(
    pi: np.ndarray, f: Callable[[int, int], int] | np.ndarray
) -> Game:
    """Binary-answer game whose predicate depends only on the answer XOR.

    ``f(x, y)`` gives the parity the provers must produce.
    """
    pi = np.array(pi, dtype=float)
    nx, ny = pi.shape
    if callable(f):
        parities = np.array(
            [[int(f(x, y)) for y in range(ny)] for x in range(nx)]
        )
    else:
        parities = np.array(f, dtype=int)
        if parities.shape != (nx, ny):
            raise SchemaError("parity table shape must match pi")
    if np.any((parities != 0) & (parities != 1)):
        raise SchemaError("parity values must be 0/1")
    v = np.zeros((nx, ny, 2, 2))
    for a in range(2):
        for b in range(2):
            v[:, :, a, b] = (parities == (a ^ b)).astype(float)
    return Game(pi, v)


def is_xor_game(game: Game) -> bool:
    """True when answers are binary and the predicate sees only their XOR."""
    if game.na != 2 or game.nb != 2:
        return False
    v = game.v
    return bool(
        np.array_equal(v[:, :, 0, 0], v[:, :, 1, 1])
        and np.array_equal(v[:, :, 0, 1], v[:, :, 1, 0])
    )


def random_game(seed: int, dims: Dims, density: float = 0.5) -> Game:
    """Seeded random game; identical seeds reproduce identical tensors.

    Randomness comes from numpy's PCG64 generator seeded with the 64-bit
    ``seed``.  ``density`` is the win probability per predicate cell.
    """
    nx, ny, na, nb = dims
    rng = np.random.default_rng(seed)
    pi = rng.random((nx, ny))
    pi /= pi.sum()
    v = (rng.random((nx, ny, na, nb)) < density).astype(float)
    return Game(pi, v)


def random_bell(seed: int, dims: Dims, scale: float = 1.0) -> BellFunctional:
    """Seeded Gaussian Bell functional with entries scaled by ``scale``."""
    nx, ny, na, nb = dims
    rng = np.random.default_rng(seed)
    return BellFunctional(scale * rng.standard_normal((nx, na, ny, nb)))


def uniform_behavior(dims: Dims) -> BehaviorTensor:
    """The behavior answering uniformly at random on both sides."""
    nx, ny, na, nb = dims
    p = np.full((nx, na, ny, nb), 1.0 / (na * nb))
    return BehaviorTensor(p, nonneg=True, normalized=True)
