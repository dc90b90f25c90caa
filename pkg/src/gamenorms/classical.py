"""Exact classical values by strategy enumeration.

The classical value of a game equals the injective tensor norm of its
embedded functional, and both are attained at deterministic strategies:
the unit ball of the max-of-row-l1 norm has one extreme point per
(signed) answer assignment.  Enumeration therefore only needs Alice's
side; once her assignment is fixed the objective separates over Bob's
questions and his best response is a per-question argmax.  That
collapses the naive ``(answers^questions)^2`` search to
``answers^questions`` evaluations, which is what makes composed desk
scale games (e.g. two CHSH rounds) exact and instant.

Signed enumeration (for functionals with negative entries) walks the
extreme points ``question-row = sign * basis vector``; a global sign
flip leaves the value invariant, so Alice's first sign is pinned to +1.
"""

from __future__ import annotations

import dataclasses
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceeded
from .games import BellFunctional, Game

#: Default cap on the number of enumerated Alice assignments.
DEFAULT_ENUMERATION_CAP = 10**7
#: Enumeration block size; bounds peak memory of the vectorized scan.
_BLOCK = 4096


@dataclasses.dataclass(frozen=True)
class ClassicalCertificate:
    """An optimal deterministic (signed) strategy pair and its value.

    Replaying the certificate against the functional it was computed
    from reproduces ``value`` to within 1e-14; see
    :func:`evaluate_certificate`.
    """

    value: float
    alice_answers: dict[int, int]
    alice_signs: dict[int, int]
    bob_answers: dict[int, int]
    bob_signs: dict[int, int]
    sign_flipped: bool = False


def evaluate_certificate(cert: ClassicalCertificate, g: BellFunctional) -> float:
    """Recompute the certified value directly from the strategy maps."""
    total = 0.0
    for x in range(g.nx):
        sx = cert.alice_signs[x]
        ax = cert.alice_answers[x]
        for y in range(g.ny):
            total += sx * cert.bob_signs[y] * g.g[x, ax, y, cert.bob_answers[y]]
    return -total if cert.sign_flipped else total


def _check_cap(count: int, cap: int) -> None:
    if count > cap:
        raise CapExceeded(
            f"enumeration needs {count} Alice assignments, cap is {cap}"
        )


def _assignment_blocks(radices: Sequence[int]) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (offset, block) of lexicographic assignments, question 0 most significant.

    ``radices[q]`` is the option count of question ``q``; mixed radices
    let callers pin question 0 to fewer options than the rest.
    """
    total = 1
    for r in radices:
        total *= int(r)
    place = np.empty(len(radices), dtype=np.int64)
    acc = 1
    for q in range(len(radices) - 1, -1, -1):
        place[q] = acc
        acc *= int(radices[q])
    rad = np.asarray(radices, dtype=np.int64)
    for start in range(0, total, _BLOCK):
        idx = np.arange(start, min(start + _BLOCK, total), dtype=np.int64)
        block = (idx[:, None] // place[None, :]) % rad[None, :]
        yield start, block


def _scan_max(scores_fn, radices: Sequence[int]) -> tuple[float, np.ndarray]:
    """Maximize a per-assignment score, first (lexicographic) winner on ties."""
    best_value = -np.inf
    best_assignment: np.ndarray | None = None
    for _, block in _assignment_blocks(radices):
        values = scores_fn(block)
        k = int(np.argmax(values))
        if values[k] > best_value:
            best_value = float(values[k])
            best_assignment = block[k].copy()
    assert best_assignment is not None
    return best_value, best_assignment


def classical_value(game: Game, cap: int = DEFAULT_ENUMERATION_CAP) -> ClassicalCertificate:
    """Maximum winning probability over deterministic strategy pairs.

    Exact: enumerates all of Alice's assignments and takes Bob's greedy
    per-question best response (valid because the objective separates
    over his questions once Alice is fixed).  Raises
    :class:`~gamenorms.errors.CapExceeded` past ``cap`` assignments; see
    :func:`classical_value_heuristic` for a lower-bound fallback.
    """
    nx, ny, na, nb = game.dims
    _check_cap(na**nx, cap)
    # weighted[x, a, y, b] = pi[x, y] * v[x, y, a, b]
    weighted = (game.pi[:, None, :, None] * game.v.transpose(0, 2, 1, 3))

    def scores(block: np.ndarray) -> np.ndarray:
        acc = np.zeros((block.shape[0], ny, nb))
        for x in range(nx):
            acc += weighted[x, block[:, x], :, :]
        return acc.max(axis=2).sum(axis=1)

    value, sa = _scan_max(scores, [na] * nx)
    table = np.zeros((ny, nb))
    for x in range(nx):
        table += weighted[x, sa[x], :, :]
    sb = table.argmax(axis=1)
    return ClassicalCertificate(
        value=value,
        alice_answers={x: int(sa[x]) for x in range(nx)},
        alice_signs={x: 1 for x in range(nx)},
        bob_answers={y: int(sb[y]) for y in range(ny)},
        bob_signs={y: 1 for y in range(ny)},
    )


def injective_norm(g: BellFunctional, cap: int = DEFAULT_ENUMERATION_CAP) -> ClassicalCertificate:
    """Injective tensor norm of a (possibly signed) functional.

    Equals ``sup |<g, pa x pb>|`` over the product of unit balls, which
    is attained at signed deterministic assignments.  Alice's options
    per question are (sign, answer) pairs; her first question's sign is
    pinned to +1 since the objective is invariant under a global flip.
    Bob's optimal (sign, answer) is the per-question max of ``|.|``.
    """
    nx, ny, na, nb = g.dims
    _check_cap(na * (2 * na) ** (nx - 1), cap)
    # Option d of question x: answer d % na with sign +1 for d < na, -1 after.
    # Question 0 enumerates answers only (sign pinned +1, global-flip symmetry).
    signed = np.concatenate([g.g, -g.g], axis=1)  # (nx, 2*na, ny, nb)

    def scores(block: np.ndarray) -> np.ndarray:
        acc = np.zeros((block.shape[0], ny, nb))
        for x in range(nx):
            acc += signed[x, block[:, x], :, :]
        return np.abs(acc).max(axis=2).sum(axis=1)

    value, best = _scan_max(scores, [na] + [2 * na] * (nx - 1))
    sa = best % na
    sgn = np.where(best < na, 1, -1)
    table = np.zeros((ny, nb))
    for x in range(nx):
        table += sgn[x] * g.g[x, sa[x], :, :]
    flat = np.abs(table).argmax(axis=1)
    tb = np.where(table[np.arange(ny), flat] >= 0.0, 1, -1)
    return ClassicalCertificate(
        value=value,
        alice_answers={x: int(sa[x]) for x in range(nx)},
        alice_signs={x: int(sgn[x]) for x in range(nx)},
        bob_answers={y: int(flat[y]) for y in range(ny)},
        bob_signs={y: int(tb[y]) for y in range(ny)},
    )


def bell_classical_value(
    g: BellFunctional, cap: int = DEFAULT_ENUMERATION_CAP
) -> ClassicalCertificate:
    """Classical bound of a Bell functional over behaviors.

    ``max |sum_{x,y} g[x, sa(x), y, sb(y)]|`` over deterministic answer
    maps: behaviors are probability tensors, so unlike the injective
    norm no per-question signs are available and the absolute value is
    taken globally by also maximizing the negated functional.
    """
    nx, ny, na, nb = g.dims
    _check_cap(na**nx, cap)

    def make_scores(tensor: np.ndarray):
        def scores(block: np.ndarray) -> np.ndarray:
            acc = np.zeros((block.shape[0], ny, nb))
            for x in range(nx):
                acc += tensor[x, block[:, x], :, :]
            return acc.max(axis=2).sum(axis=1)

        return scores

    value_plus, sa_plus = _scan_max(make_scores(g.g), [na] * nx)
    value_minus, sa_minus = _scan_max(make_scores(-g.g), [na] * nx)
    flipped = value_minus > value_plus
    value, sa = (value_minus, sa_minus) if flipped else (value_plus, sa_plus)
    tensor = -g.g if flipped else g.g
    table = np.zeros((ny, nb))
    for x in range(nx):
        table += tensor[x, sa[x], :, :]
    sb = table.argmax(axis=1)
    return ClassicalCertificate(
        value=value,
        alice_answers={x: int(sa[x]) for x in range(nx)},
        alice_signs={x: 1 for x in range(nx)},
        bob_answers={y: int(sb[y]) for y in range(ny)},
        bob_signs={y: 1 for y in range(ny)},
        sign_flipped=bool(flipped),
    )


def classical_value_heuristic(
    game: Game, restarts: int = 20, seed: int = 0
) -> ClassicalCertificate:
    """Randomized-restart local search; a lower bound, never exact.

    Coordinate ascent over Alice's assignment with exact Bob replies,
    restarted from seeded random assignments.  Use when the exact
    enumeration cap is out of reach.
    """
    nx, ny, na, nb = game.dims
    weighted = (game.pi[:, None, :, None] * game.v.transpose(0, 2, 1, 3))
    rng = np.random.default_rng(seed)
    best_value = -np.inf
    best_sa: np.ndarray | None = None
    for _ in range(restarts):
        sa = rng.integers(0, na, size=nx)
        table = np.zeros((ny, nb))
        for x in range(nx):
            table += weighted[x, sa[x], :, :]
        value = float(table.max(axis=1).sum())
        improved = True
        while improved:
            improved = False
            for x in range(nx):
                base = table - weighted[x, sa[x], :, :]
                for a in range(na):
                    if a == sa[x]:
                        continue
                    cand = base + weighted[x, a, :, :]
                    cand_value = float(cand.max(axis=1).sum())
                    if cand_value > value + 1e-15:
                        table, value, improved = cand, cand_value, True
                        sa[x] = a
        if value > best_value:
            best_value, best_sa = value, sa.copy()
    assert best_sa is not None
    table = np.zeros((ny, nb))
    for x in range(nx):
        table += weighted[x, best_sa[x], :, :]
    sb = table.argmax(axis=1)
    return ClassicalCertificate(
        value=best_value,
        alice_answers={x: int(best_sa[x]) for x in range(nx)},
        alice_signs={x: 1 for x in range(nx)},
        bob_answers={y: int(sb[y]) for y in range(ny)},
        bob_signs={y: 1 for y in range(ny)},
    )
