"""Constructive Gaussian sign rounding with the Krivine transform.

Given unit vectors whose inner products are the entries of interest,
the entrywise transform ``sinh(c * <x,x'>)`` within a side and
``sin(c * <x,y>)`` across sides (with ``c = ln(1 + sqrt 2)``, so the
diagonal stays exactly 1) produces another PSD matrix; sampling joint
Gaussians with that covariance and keeping only signs makes every
cross sign-product expectation exactly ``<x,y> / K`` with
``K = pi / (2c)``:

    E[sign(u) sign(v)] = (2/pi) arcsin(sin(c <x,y>)) = <x,y> / K.

The transform is realized through second moments (only pairwise inner
products matter for joint Gaussian signs), not through explicit tensor
power embeddings; its PSD-ness is inherited from the odd-power
construction and is verified numerically on every build.

Applied to the vector systems of a dual-norm witness this yields, for
every sample, a feasible signed pair whose normalized bilinear value
lower-bounds the injective norm, with expectation ``gamma2* / (K *
sqrt(na * nb))``: the constructive side of the norm-ratio bound.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Optional

import numpy as np

from .errors import CapExceeded, SchemaError
from .games import BellFunctional
from .hilbertian import GROTHENDIECK_K, KRIVINE_C, VectorSystem

#: Eigenvalue floor when factorizing a covariance for sampling.
_COV_EIG_FLOOR = -1e-9
#: Samples drawn per chunk; each chunk has its own derived seed.
_SAMPLE_CHUNK = 1 << 15

Label = tuple[str, int, int]


@dataclasses.dataclass(frozen=True)
class CovarianceModel:
    """Joint second moments of the transformed vectors, by label.

    ``labels`` orders the rows: all A-side (question, answer) labels
    first, then B-side.  Built from unit vectors the diagonal is
    ``sinh(c) = 1`` exactly.
    """

    labels: tuple[Label, ...]
    sigma: np.ndarray
    c: float = KRIVINE_C

    def __post_init__(self) -> None:
        sigma = np.array(self.sigma, dtype=float)
        n = len(self.labels)
        if sigma.shape != (n, n):
            raise SchemaError(
                f"covariance shape {sigma.shape} does not match {n} labels"
            )
        sigma = 0.5 * (sigma + sigma.T)
        if n and np.abs(np.diag(sigma) - 1.0).max() > 1e-10:
            raise SchemaError("covariance diagonal is not 1")
        low = float(np.linalg.eigvalsh(sigma)[0]) if n else 0.0
        if low < _COV_EIG_FLOOR:
            raise SchemaError(
                f"transformed covariance indefinite: min eigenvalue {low!r}"
            )
        sigma.flags.writeable = False
        object.__setattr__(self, "sigma", sigma)

    @property
    def n_a(self) -> int:
        return sum(1 for side, _, _ in self.labels if side == "A")


def krivine_covariance(
    gram_aa: np.ndarray,
    gram_ab: np.ndarray,
    gram_bb: np.ndarray,
    labels_a: Optional[tuple[Label, ...]] = None,
    labels_b: Optional[tuple[Label, ...]] = None,
) -> CovarianceModel:
    """Entrywise sinh/sin transform of a unit-diagonal PSD block Gram.

    ``gram_aa``/``gram_bb`` become ``sinh(c * .)``, the cross block
    ``sin(c * .)``; the result is checked PSD by eigendecomposition.
    """
    gram_aa = np.asarray(gram_aa, dtype=float)
    gram_ab = np.asarray(gram_ab, dtype=float)
    gram_bb = np.asarray(gram_bb, dtype=float)
    na_rows, nb_rows = gram_ab.shape
    if gram_aa.shape != (na_rows, na_rows) or gram_bb.shape != (nb_rows, nb_rows):
        raise SchemaError("gram block shapes are inconsistent")
    block = np.block([[gram_aa, gram_ab], [gram_ab.T, gram_bb]])
    if np.abs(np.diag(block) - 1.0).max() > 1e-9:
        raise SchemaError("gram diagonal is not 1 (vectors must be normalized)")
    low = float(np.linalg.eigvalsh(0.5 * (block + block.T))[0])
    if low < -1e-9:
        raise SchemaError(f"gram block matrix indefinite: min eigenvalue {low!r}")
    c = KRIVINE_C
    sigma = np.block(
        [
            [np.sinh(c * gram_aa), np.sin(c * gram_ab)],
            [np.sin(c * gram_ab).T, np.sinh(c * gram_bb)],
        ]
    )
    if labels_a is None:
        labels_a = tuple(("A", 0, i) for i in range(na_rows))
    if labels_b is None:
        labels_b = tuple(("B", 0, j) for j in range(nb_rows))
    if len(labels_a) != na_rows or len(labels_b) != nb_rows:
        raise SchemaError("label counts do not match gram blocks")
    return CovarianceModel(labels=tuple(labels_a) + tuple(labels_b), sigma=sigma)


@dataclasses.dataclass(frozen=True)
class SignSampleBatch:
    """Seeded batch of entrywise signs of correlated Gaussian draws."""

    count: int
    seed: int
    signs: np.ndarray  # (count, labels) of +-1 as int8

    def __post_init__(self) -> None:
        signs = np.asarray(self.signs, dtype=np.int8)
        if signs.shape[0] != self.count:
            raise SchemaError("sign batch row count mismatch")
        if signs.size and not np.all(np.abs(signs) == 1):
            raise SchemaError("signs must be exactly +-1")
        signs.flags.writeable = False
        object.__setattr__(self, "signs", signs)


def sample_signs(cov: CovarianceModel, count: int, seed: int) -> SignSampleBatch:
    """Draw ``count`` sign vectors; ``sign(0)`` is defined as +1.

    Sampling is chunked with per-chunk seeds derived from the master
    seed, so results are reproducible independently of chunk scheduling.
    """
    if count < 1:
        raise SchemaError("need at least one sample")
    vals, vecs = np.linalg.eigh(cov.sigma)
    if vals.size and float(vals[0]) < _COV_EIG_FLOOR:
        raise SchemaError(
            f"covariance factorization failed: min eigenvalue {float(vals[0])!r}"
        )
    factor = vecs * np.sqrt(np.clip(vals, 0.0, None))
    n_labels = len(cov.labels)
    signs = np.empty((count, n_labels), dtype=np.int8)
    children = np.random.SeedSequence(seed).spawn(
        (count + _SAMPLE_CHUNK - 1) // _SAMPLE_CHUNK
    )
    for k, child in enumerate(children):
        lo = k * _SAMPLE_CHUNK
        hi = min(lo + _SAMPLE_CHUNK, count)
        rng = np.random.default_rng(child)
        z = rng.standard_normal((hi - lo, n_labels)) @ factor.T
        signs[lo:hi] = np.where(z >= 0.0, 1, -1).astype(np.int8)
    return SignSampleBatch(count=count, seed=seed, signs=signs)


@dataclasses.dataclass(frozen=True)
class IdentityReport:
    """Empirical check of the exact sign-product identity.

    ``analytic[i, j]`` is ``gram_ab[i, j] / K``; ``empirical`` the
    sample means of cross sign products; ``stderr`` their standard
    errors.  ``max_abs_deviation`` is the largest |empirical -
    analytic|.
    """

    analytic: np.ndarray
    empirical: np.ndarray
    stderr: np.ndarray
    max_abs_deviation: float


def grothendieck_identity_check(
    gram_ab: np.ndarray, batch: SignSampleBatch
) -> IdentityReport:
    """Compare cross sign-product means against ``gram_ab / K``.

    The batch must have been drawn from the covariance built on the same
    cross Gram (label counts are checked against its shape).
    """
    gram_ab = np.asarray(gram_ab, dtype=float)
    na_rows, nb_rows = gram_ab.shape
    if batch.signs.shape[1] != na_rows + nb_rows:
        raise SchemaError(
            f"batch has {batch.signs.shape[1]} labels, gram wants "
            f"{na_rows + nb_rows}"
        )
    s_a = batch.signs[:, :na_rows].astype(np.float64)
    s_b = batch.signs[:, na_rows:].astype(np.float64)
    empirical = (s_a.T @ s_b) / batch.count
    analytic = gram_ab / GROTHENDIECK_K
    stderr = np.sqrt(np.clip(1.0 - empirical**2, 0.0, None) / batch.count)
    deviation = float(np.abs(empirical - analytic).max()) if gram_ab.size else 0.0
    return IdentityReport(
        analytic=analytic,
        empirical=empirical,
        stderr=stderr,
        max_abs_deviation=deviation,
    )


@dataclasses.dataclass(frozen=True)
class RoundingCertificate:
    """Best rounded pair and the sampling statistics behind it.

    ``value`` is the best sample's |bilinear value| normalized by
    ``sqrt(na * nb)``; it is a valid lower bound on the injective norm
    because every rounded pair is feasible for the product of unit
    balls.  ``mean``/``stderr`` are statistics of the normalized values
    (signed), whose expectation is ``gamma2* / (K * sqrt(na * nb))``.
    ``identity`` audits the same sign batch against the exact
    sign-product law on the witness grams.
    """

    value: float
    alice_weights: np.ndarray
    bob_weights: np.ndarray
    mean: float
    stderr: float
    samples: int
    seed: int
    identity: Optional[IdentityReport] = None


def _weighted_labels(
    vs: VectorSystem, side: str
) -> tuple[list[Label], np.ndarray, np.ndarray]:
    """Labels, norms and normalized vectors; zero-norm labels dropped.

    Zero-norm vectors never contribute to the rounded pair (their weight
    is 0 and their sign fixed +1), so they are excluded from the
    covariance, where they could not be normalized anyway.
    """
    labels: list[Label] = []
    norms: list[float] = []
    rows: list[np.ndarray] = []
    for q in range(vs.n_questions):
        for ans in range(vs.n_answers):
            vec = vs.vectors[q, ans]
            norm = float(np.linalg.norm(vec))
            if norm > 0.0:
                labels.append((side, q, ans))
                norms.append(norm)
                rows.append(vec / norm)
    return labels, np.array(norms), np.stack(rows) if rows else np.zeros((0, vs.dim))


def round_bell(
    g: BellFunctional,
    wa: VectorSystem,
    wb: VectorSystem,
    samples: int = 100_000,
    seed: int = 0,
) -> RoundingCertificate:
    """Round a dual-norm witness into signed feasible pairs.

    For each Gaussian sample the pair is ``s[x,a] = ||m[x,a]|| * sign``
    and ``t[y,b] = ||n[y,b]|| * sign``.  The witness systems are first
    rescaled so every per-question squared-norm sum is at most 1 (solver
    slack removal), after which Cauchy-Schwarz makes each side's
    max-of-row-l1 norm at most ``sqrt(answers)`` -- checked on every
    sample.  The best pair is returned with the sign of its bilinear
    value folded into Bob's weights, so replaying the pairing gives
    ``value * sqrt(na * nb)`` back.
    """
    if (wa.n_questions, wa.n_answers) != (g.nx, g.na) or (
        wb.n_questions,
        wb.n_answers,
    ) != (g.ny, g.nb):
        raise SchemaError("vector systems do not match the functional's dims")
    if samples < 1:
        raise SchemaError("need at least one sample")
    if samples > 10**8:
        raise CapExceeded(f"{samples} samples exceed cap 1e8")

    def rescaled(vs: VectorSystem) -> VectorSystem:
        sq = np.einsum("qad,qad->q", vs.vectors, vs.vectors)
        worst = math.sqrt(float(sq.max())) if sq.size else 0.0
        if worst <= 1.0:
            return vs
        return VectorSystem(vs.side, vs.vectors / worst)

    wa = rescaled(wa)
    wb = rescaled(wb)
    labels_a, norms_a, unit_a = _weighted_labels(wa, "A")
    labels_b, norms_b, unit_b = _weighted_labels(wb, "B")
    if not labels_a or not labels_b:
        # All-zero witness: the zero pair is the (trivial) certificate.
        return RoundingCertificate(
            value=0.0,
            alice_weights=np.zeros((g.nx, g.na)),
            bob_weights=np.zeros((g.ny, g.nb)),
            mean=0.0,
            stderr=0.0,
            samples=samples,
            seed=seed,
        )
    cross_gram = unit_a @ unit_b.T
    cov = krivine_covariance(
        unit_a @ unit_a.T,
        cross_gram,
        unit_b @ unit_b.T,
        labels_a=tuple(labels_a),
        labels_b=tuple(labels_b),
    )
    batch = sample_signs(cov, samples, seed)
    identity = grothendieck_identity_check(cross_gram, batch)
    # Bilinear values: weight the signs, pair through the functional.
    ghat = np.zeros((len(labels_a), len(labels_b)))
    for i, (_, x, a) in enumerate(labels_a):
        for j, (_, y, b) in enumerate(labels_b):
            ghat[i, j] = g.g[x, a, y, b]
    s_weighted = batch.signs[:, : len(labels_a)].astype(float) * norms_a[None, :]
    t_weighted = batch.signs[:, len(labels_a) :].astype(float) * norms_b[None, :]
    # Feasibility audit: per-question l1 mass within sqrt(answers).
    bound_a = math.sqrt(g.na) + 1e-12
    bound_b = math.sqrt(g.nb) + 1e-12
    for labels, weights, bound in (
        (labels_a, norms_a, bound_a),
        (labels_b, norms_b, bound_b),
    ):
        mass: dict[int, float] = {}
        for (_, q, _), norm in zip(labels, weights):
            mass[q] = mass.get(q, 0.0) + norm
        if mass and max(mass.values()) > bound:
            raise SchemaError(
                f"rounded pair infeasible: row mass {max(mass.values())!r}"
            )
    values = np.einsum("ki,ij,kj->k", s_weighted, ghat, t_weighted)
    scale = math.sqrt(g.na * g.nb)
    normalized = values / scale
    k_best = int(np.argmax(np.abs(normalized)))
    best = float(abs(normalized[k_best]))
    flip = 1.0 if values[k_best] >= 0.0 else -1.0
    alice_weights = np.zeros((g.nx, g.na))
    for i, (_, x, a) in enumerate(labels_a):
        alice_weights[x, a] = s_weighted[k_best, i]
    bob_weights = np.zeros((g.ny, g.nb))
    for j, (_, y, b) in enumerate(labels_b):
        bob_weights[y, b] = flip * t_weighted[k_best, j]
    mean = float(normalized.mean())
    stderr = float(normalized.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return RoundingCertificate(
        value=best,
        alice_weights=alice_weights,
        bob_weights=bob_weights,
        mean=mean,
        stderr=stderr,
        samples=samples,
        seed=seed,
        identity=identity,
    )
