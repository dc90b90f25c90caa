"""Finite-dimensional quantum strategies and their behaviors.

Bridges the norm machinery to actual quantum mechanics three ways:

* ``behavior_of`` evaluates ``<psi| M (x) N |psi>`` tensors for shared
  pure states and projective measurements;
* ``strategy_vector_systems`` builds, for any strategy, real vector
  systems whose cross Gram equals the behavior and whose sign-form
  operator norms are exactly 1 (so the Hilbertian norm of every quantum
  behavior is 1);
* ``tsirelson_strategy`` goes the other way for correlations, turning
  any families of vectors with norms at most 1 into anticommuting
  +-1-observables on a maximally entangled state realizing the inner
  products.

A see-saw heuristic provides certified lower bounds on entangled game
values (never upper bounds).
"""

from __future__ import annotations

import dataclasses
import math
from typing import Sequence

import numpy as np

from .errors import CapExceeded, DimensionMismatch, SchemaError
from .games import BehaviorTensor, Game, game_to_functional, pairing
from .hilbertian import VectorSystem

_HERMITIAN_TOL = 1e-10
_PROJECTOR_TOL = 1e-10
_STATE_TOL = 1e-12
_INVOLUTION_TOL = 1e-8
#: Clifford generator count cap (local dimension 2**ceil(n/2) <= 64).
CLIFFORD_CAP = 12
#: See-saw local dimension cap.
SEESAW_DIM_CAP = 8


def _as_complex(m) -> np.ndarray:
    out = np.array(m, dtype=complex)
    if not np.all(np.isfinite(out.real)) or not np.all(np.isfinite(out.imag)):
        raise SchemaError("matrix has non-finite entries")
    return out


@dataclasses.dataclass(frozen=True)
class PureState:
    """Shared pure state on a (da x db)-dimensional product space."""

    da: int
    db: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amp = _as_complex(self.amplitudes).reshape(-1)
        if amp.shape != (self.da * self.db,):
            raise SchemaError(
                f"state needs {self.da * self.db} amplitudes, got {amp.shape[0]}"
            )
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > _STATE_TOL:
            raise SchemaError(f"state norm is {norm!r}, not 1")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes as a (da, db) matrix psi[i, j] = <ij|psi>."""
        return self.amplitudes.reshape(self.da, self.db)


@dataclasses.dataclass(frozen=True)
class ProjectiveMeasurement:
    """A complete family of mutually orthogonal Hermitian projectors."""

    outcomes: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        outs = tuple(_as_complex(m) for m in self.outcomes)
        if not outs:
            raise SchemaError("measurement needs at least one outcome")
        dim = outs[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for k, m in enumerate(outs):
            if m.shape != (dim, dim):
                raise SchemaError(f"outcome {k} is not {dim}x{dim}")
            if np.abs(m - m.conj().T).max() > _HERMITIAN_TOL:
                raise SchemaError(f"outcome {k} is not Hermitian")
            if np.abs(m @ m - m).max() > _PROJECTOR_TOL:
                raise SchemaError(f"outcome {k} is not idempotent")
            total += m
        for i in range(len(outs)):
            for j in range(i + 1, len(outs)):
                if np.abs(outs[i] @ outs[j]).max() > _PROJECTOR_TOL:
                    raise SchemaError(f"outcomes {i} and {j} are not orthogonal")
        if np.abs(total - np.eye(dim)).max() > _PROJECTOR_TOL:
            raise SchemaError("outcomes do not sum to the identity")
        for m in outs:
            m.flags.writeable = False
        object.__setattr__(self, "outcomes", outs)

    @property
    def dim(self) -> int:
        return self.outcomes[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)


@dataclasses.dataclass(frozen=True)
class QuantumStrategy:
    """State plus one measurement per question on each side."""

    state: PureState
    alice: tuple[ProjectiveMeasurement, ...]
    bob: tuple[ProjectiveMeasurement, ...]

    def __post_init__(self) -> None:
        alice = tuple(self.alice)
        bob = tuple(self.bob)
        if not alice or not bob:
            raise SchemaError("strategy needs measurements on both sides")
        if any(m.dim != self.state.da for m in alice):
            raise DimensionMismatch("alice measurement dimension mismatch")
        if any(m.dim != self.state.db for m in bob):
            raise DimensionMismatch("bob measurement dimension mismatch")
        if len({m.n_outcomes for m in alice}) != 1:
            raise SchemaError("alice outcome counts differ across questions")
        if len({m.n_outcomes for m in bob}) != 1:
            raise SchemaError("bob outcome counts differ across questions")
        object.__setattr__(self, "alice", alice)
        object.__setattr__(self, "bob", bob)

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (
            len(self.alice),
            len(self.bob),
            self.alice[0].n_outcomes,
            self.bob[0].n_outcomes,
        )


@dataclasses.dataclass(frozen=True)
class Observable:
    """A Hermitian observable; the builders here all produce +-1 ones."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _as_complex(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise SchemaError("observable must be a square matrix")
        if np.abs(m - m.conj().T).max() > _HERMITIAN_TOL:
            raise SchemaError("observable is not Hermitian")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_involution(self, tol: float = _INVOLUTION_TOL) -> bool:
        m = self.matrix
        return bool(np.abs(m @ m - np.eye(self.dim)).max() <= tol)


# ---------------------------------------------------------------------------
# Behaviors and vector systems
# ---------------------------------------------------------------------------


def _pair_expectation(psi: np.ndarray, ka: np.ndarray, nb_mat: np.ndarray) -> complex:
    """<psi| M (x) N |psi> with ka = psi^dagger M psi precomputed."""
    return complex(np.sum(ka * nb_mat))


def behavior_of(s: QuantumStrategy) -> BehaviorTensor:
    """Behavior tensor of a strategy; imaginary parts must vanish.

    Each entry is the real part of ``<psi| M_x^a (x) N_y^b |psi>``; an
    imaginary part above 1e-10 indicates invalid inputs and raises.
    """
    nx, ny, na, nb = s.dims
    psi = s.state.matrix
    p = np.empty((nx, na, ny, nb))
    worst_imag = 0.0
    for x in range(nx):
        for a in range(na):
            ka = psi.conj().T @ s.alice[x].outcomes[a] @ psi
            for y in range(ny):
                for b in range(nb):
                    val = _pair_expectation(psi, ka, s.bob[y].outcomes[b])
                    worst_imag = max(worst_imag, abs(val.imag))
                    p[x, a, y, b] = val.real
    if worst_imag > 1e-10:
        raise SchemaError(f"behavior has imaginary part {worst_imag!r}")
    return BehaviorTensor(p, nonneg=True, normalized=True)


def strategy_vector_systems(
    s: QuantumStrategy,
) -> tuple[VectorSystem, VectorSystem]:
    """Real vector systems factorizing the strategy's behavior.

    The complex vectors are the rows ``<psi|(M_x^a (x) I)|i>`` and
    columns ``<i|(I (x) N_y^b)|psi>`` over a product basis; realification
    stacks [Re; Im] on the A side and [Re; -Im] on the B side so that
    real inner products reproduce the real parts of the bilinear complex
    pairings.  Within a question the A vectors (and B vectors) are
    mutually orthogonal and their squared norms sum to 1, which makes
    both sign-form operator norms exactly 1.
    """
    nx, ny, na, nb = s.dims
    psi = s.state.matrix
    d2 = s.state.da * s.state.db
    side_a = np.empty((nx, na, 2 * d2))
    side_b = np.empty((ny, nb, 2 * d2))
    for x in range(nx):
        for a in range(na):
            vec = (s.alice[x].outcomes[a].T @ psi.conj()).reshape(-1)
            side_a[x, a] = np.concatenate([vec.real, vec.imag])
    for y in range(ny):
        for b in range(nb):
            vec = (psi @ s.bob[y].outcomes[b].T).reshape(-1)
            side_b[y, b] = np.concatenate([vec.real, -vec.imag])
    return VectorSystem("A", side_a), VectorSystem("B", side_b)


# ---------------------------------------------------------------------------
# Tsirelson constructions
# ---------------------------------------------------------------------------

_PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def clifford_generators(n: int) -> list[Observable]:
    """n pairwise-anticommuting +-1 observables on dimension 2**ceil(n/2).

    Built as tensor chains Z x ... x Z x {X or Y} x I x ... x I; the
    normalized trace pairing tr(C_i C_j)/dim is the identity matrix on
    the generator indices.
    """
    if n < 1:
        raise SchemaError("need at least one generator")
    if n > CLIFFORD_CAP:
        raise CapExceeded(f"{n} generators exceed cap {CLIFFORD_CAP}")
    pairs = (n + 1) // 2
    out: list[Observable] = []
    for i in range(n):
        k = i // 2
        head = _PAULI_X if i % 2 == 0 else _PAULI_Y
        factors = [_PAULI_Z] * k + [head] + [np.eye(2, dtype=complex)] * (pairs - k - 1)
        mat = factors[0]
        for f in factors[1:]:
            mat = np.kron(mat, f)
        out.append(Observable(mat))
    return out


def maximally_entangled_state(local_dim: int) -> PureState:
    amp = np.eye(local_dim, dtype=complex).reshape(-1) / math.sqrt(local_dim)
    return PureState(local_dim, local_dim, amp)


def correlation(state: PureState, a: Observable, b: Observable) -> float:
    """Real part of <psi| A (x) B |psi>; imaginary part must vanish."""
    if a.dim != state.da or b.dim != state.db:
        raise DimensionMismatch("observable dimensions do not match the state")
    psi = state.matrix
    val = complex(np.sum((psi.conj().T @ a.matrix @ psi) * b.matrix))
    if abs(val.imag) > 1e-10:
        raise SchemaError(f"correlation has imaginary part {val.imag!r}")
    return val.real


@dataclasses.dataclass(frozen=True)
class TsirelsonStrategy:
    """Maximally entangled state with observable families for both sides."""

    state: PureState
    alice: tuple[Observable, ...]
    bob: tuple[Observable, ...]


def tsirelson_strategy(
    ms: Sequence[np.ndarray], ns: Sequence[np.ndarray]
) -> TsirelsonStrategy:
    """Observables realizing ``<m_x, n_y>`` as maximally entangled correlations.

    Vectors must have 2-norm at most 1 (+1e-12 slack); non-unit vectors
    are made unit by two extra padding coordinates, one reserved per
    side, which leaves all cross inner products untouched.  Alice's
    observables combine anticommuting generators with the padded
    coordinates; Bob's use the transposed generators so that the
    maximally-entangled identity ``<psi|A (x) B|psi> = tr(A^T B)/d``
    turns the generator pairing into the Euclidean one.  The resulting
    correlations are verified numerically against the inner products
    before returning.
    """
    m_list = [np.asarray(m, dtype=float).reshape(-1) for m in ms]
    n_list = [np.asarray(v, dtype=float).reshape(-1) for v in ns]
    if not m_list or not n_list:
        raise SchemaError("need at least one vector per side")
    dims = {v.shape[0] for v in m_list} | {v.shape[0] for v in n_list}
    if len(dims) != 1:
        raise DimensionMismatch("all vectors must share one dimension")
    n_dim = dims.pop()
    for v in m_list + n_list:
        if float(np.linalg.norm(v)) > 1.0 + 1e-12:
            raise SchemaError(
                f"vector norm {float(np.linalg.norm(v))!r} exceeds 1"
            )

    def pad(v: np.ndarray, slot: int) -> np.ndarray:
        out = np.zeros(n_dim + 2)
        out[:n_dim] = v
        out[n_dim + slot] = math.sqrt(max(0.0, 1.0 - float(v @ v)))
        return out

    padded_m = [pad(v, 0) for v in m_list]
    padded_n = [pad(v, 1) for v in n_list]
    gens = clifford_generators(n_dim + 2)
    dim = gens[0].dim
    alice = tuple(
        Observable(sum(c * g.matrix for c, g in zip(v, gens)))
        for v in padded_m
    )
    bob = tuple(
        Observable(sum(c * g.matrix.T for c, g in zip(v, gens)))
        for v in padded_n
    )
    state = maximally_entangled_state(dim)
    for obs in alice + bob:
        if not obs.is_involution():
            raise SchemaError("constructed observable is not an involution")
    for i, (mv, av) in enumerate(zip(m_list, alice)):
        for j, (nv, bv) in enumerate(zip(n_list, bob)):
            got = correlation(state, av, bv)
            want = float(mv @ nv)
            if abs(got - want) > 1e-10:
                raise SchemaError(
                    f"correlation ({i},{j}) drifted: {got!r} vs {want!r}"
                )
    return TsirelsonStrategy(state=state, alice=alice, bob=bob)


# ---------------------------------------------------------------------------
# Random strategies and the see-saw lower bound
# ---------------------------------------------------------------------------


def _haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases[None, :]


def random_projective_measurement(
    dim: int, n_outcomes: int, rng: np.random.Generator
) -> ProjectiveMeasurement:
    """Random measurement from a Haar-like unitary's column partition."""
    if n_outcomes > dim:
        raise SchemaError("more outcomes than dimensions")
    u = _haar_unitary(dim, rng)
    # Random occupancies, each outcome at least one column.
    cuts = rng.choice(np.arange(1, dim), size=n_outcomes - 1, replace=False)
    bounds = [0, *sorted(int(c) for c in cuts), dim]
    outs = []
    for k in range(n_outcomes):
        cols = u[:, bounds[k] : bounds[k + 1]]
        outs.append(cols @ cols.conj().T)
    return ProjectiveMeasurement(tuple(outs))


def random_strategy(
    seed: int,
    nx: int = 2,
    ny: int = 2,
    na: int = 2,
    nb: int = 2,
    da: int = 2,
    db: int = 2,
) -> QuantumStrategy:
    """Seeded random pure state and projective measurements."""
    rng = np.random.default_rng(seed)
    amp = rng.standard_normal(da * db) + 1j * rng.standard_normal(da * db)
    amp /= np.linalg.norm(amp)
    alice = tuple(random_projective_measurement(da, na, rng) for _ in range(nx))
    bob = tuple(random_projective_measurement(db, nb, rng) for _ in range(ny))
    return QuantumStrategy(PureState(da, db, amp), alice, bob)


def _best_measurement(
    scores: list[np.ndarray], incumbent: ProjectiveMeasurement
) -> ProjectiveMeasurement:
    """Best response to per-outcome score matrices, never worse than incumbent.

    Two outcomes get the exact optimum (positive eigenspace of the score
    difference); more outcomes use greedy eigenvector assignment and
    fall back to the incumbent when the greedy choice does not improve.
    """
    dim = scores[0].shape[0]
    n_out = len(scores)

    def value_of(meas: ProjectiveMeasurement) -> float:
        return float(
            sum(np.trace(m @ w).real for m, w in zip(meas.outcomes, scores))
        )

    if n_out == 1:
        return incumbent
    if n_out == 2:
        diff = scores[0] - scores[1]
        vals, vecs = np.linalg.eigh(diff)
        pos = vecs[:, vals > 0.0]
        m0 = pos @ pos.conj().T
        candidate = ProjectiveMeasurement((m0, np.eye(dim) - m0))
    else:
        basis = np.eye(dim, dtype=complex)
        buckets: list[list[np.ndarray]] = [[] for _ in range(n_out)]
        remaining = basis
        while remaining.shape[1] > 0:
            best = None
            for k, w in enumerate(scores):
                sub = remaining.conj().T @ w @ remaining
                vals, vecs = np.linalg.eigh(sub)
                if best is None or vals[-1] > best[0]:
                    best = (float(vals[-1]), k, remaining @ vecs[:, -1])
            _, k, vec = best
            vec = vec / np.linalg.norm(vec)
            buckets[k].append(vec)
            # Deflate the chosen direction.
            overlap = remaining - np.outer(vec, vec.conj() @ remaining)
            q, r = np.linalg.qr(overlap)
            keep = np.abs(np.diag(r)) > 1e-9
            remaining = q[:, keep]
        outs = []
        for k in range(n_out):
            if buckets[k]:
                cols = np.stack(buckets[k], axis=1)
                outs.append(cols @ cols.conj().T)
            else:
                outs.append(np.zeros((dim, dim), dtype=complex))
        candidate = ProjectiveMeasurement(tuple(outs))
    return candidate if value_of(candidate) > value_of(incumbent) else incumbent


@dataclasses.dataclass(frozen=True)
class SeesawResult:
    """A certified lower bound on the entangled value, with its strategy."""

    value: float
    strategy: QuantumStrategy


def seesaw_lower_bound(
    game: Game,
    d: int = 2,
    restarts: int = 5,
    iters: int = 60,
    seed: int = 0,
) -> SeesawResult:
    """Alternating best-response lower bound on the entangled game value.

    Each round updates Alice's measurements, Bob's measurements, and the
    shared state (top eigenvector of the game operator); every step is a
    best response or keeps the incumbent, so the value is monotone
    nondecreasing.  Restarts draw seeded random strategies; the reported
    value is re-derived from the returned strategy's behavior, so it is
    always attainable and never an upper bound.
    """
    if d > SEESAW_DIM_CAP:
        raise CapExceeded(f"local dimension {d} exceeds cap {SEESAW_DIM_CAP}")
    nx, ny, na, nb = game.dims
    if na > d or nb > d:
        raise SchemaError("projective measurements need answers <= dimension")
    functional = game_to_functional(game)
    weighted = functional.g  # pi * v in (x, a, y, b) order
    best: tuple[float, QuantumStrategy] | None = None
    for restart in range(restarts):
        rng = np.random.default_rng((seed, restart))
        amp = rng.standard_normal(d * d) + 1j * rng.standard_normal(d * d)
        amp /= np.linalg.norm(amp)
        state = PureState(d, d, amp)
        alice = [random_projective_measurement(d, na, rng) for _ in range(nx)]
        bob = [random_projective_measurement(d, nb, rng) for _ in range(ny)]
        value = -np.inf
        for _ in range(iters):
            psi = state.matrix
            # Alice: score matrix of (x, a) is conj(psi) T psi^T with
            # T = sum_{y,b} weight * N_y^b.
            for x in range(nx):
                scores = []
                for a in range(na):
                    t_mat = np.zeros((d, d), dtype=complex)
                    for y in range(ny):
                        for b in range(nb):
                            t_mat += weighted[x, a, y, b] * bob[y].outcomes[b]
                    scores.append(psi.conj() @ t_mat @ psi.T)
                alice[x] = _best_measurement(scores, alice[x])
            # Bob: score of (y, b) is (psi^dagger S psi)^T.
            for y in range(ny):
                scores = []
                for b in range(nb):
                    s_mat = np.zeros((d, d), dtype=complex)
                    for x in range(nx):
                        for a in range(na):
                            s_mat += weighted[x, a, y, b] * alice[x].outcomes[a]
                    scores.append((psi.conj().T @ s_mat @ psi).T)
                bob[y] = _best_measurement(scores, bob[y])
            # State: top eigenvector of the game operator.
            h_op = np.zeros((d * d, d * d), dtype=complex)
            for x in range(nx):
                for a in range(na):
                    for y in range(ny):
                        for b in range(nb):
                            if weighted[x, a, y, b] != 0.0:
                                h_op += weighted[x, a, y, b] * np.kron(
                                    alice[x].outcomes[a], bob[y].outcomes[b]
                                )
            vals, vecs = np.linalg.eigh(h_op)
            amp = vecs[:, -1]
            state = PureState(d, d, amp / np.linalg.norm(amp))
            new_value = float(vals[-1])
            if new_value <= value + 1e-12:
                value = max(value, new_value)
                break
            value = new_value
        strategy = QuantumStrategy(state, tuple(alice), tuple(bob))
        achieved = pairing(functional, behavior_of(strategy))
        if best is None or achieved > best[0]:
            best = (achieved, strategy)
    assert best is not None
    return SeesawResult(value=best[0], strategy=best[1])
