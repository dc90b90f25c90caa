"""Seeded verification suites behind the CLI's ``verify`` command.

Each suite runs one family of checks over reproducible instances and
returns per-instance rows plus an aggregate verdict.  Instances may run
in parallel (pure functions over immutable inputs); rows are always
assembled in seed order so reports are deterministic.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

import numpy as np

from . import quantum, rounding
from .errors import SchemaError
from .games import (
    BellFunctional,
    Game,
    chsh_game,
    game_to_functional,
    power,
    random_bell,
    random_game,
)
from .hilbertian import (
    GROTHENDIECK_K,
    gamma2,
    gamma2_star,
    opnorm_1inf_to_2,
    opnorm_2_to_inf1,
    verify_direct_product,
    verify_grothendieck,
    witness_vectors,
)

DEFAULT_TOL = 1e-7


@dataclasses.dataclass(frozen=True)
class SuiteRow:
    """One verified instance: a named value against its bound."""

    name: str
    seed: Optional[int]
    value: float
    bound: Optional[float]
    gap: Optional[float]
    passed: bool
    detail: str = ""


@dataclasses.dataclass(frozen=True)
class SuiteReport:
    suite: str
    label: str
    rows: tuple[SuiteRow, ...]
    passed: bool

    @staticmethod
    def collect(suite: str, label: str, rows: Sequence[SuiteRow]) -> "SuiteReport":
        rows = tuple(rows)
        return SuiteReport(
            suite=suite, label=label, rows=rows, passed=all(r.passed for r in rows)
        )


def _run_indexed(
    worker: Callable[[int], list[SuiteRow]], seeds: Sequence[int], jobs: int
) -> list[SuiteRow]:
    """Run per-seed workers, merging rows in seed order regardless of jobs."""
    if jobs <= 1:
        chunks = [worker(seed) for seed in seeds]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(worker, seeds))
    return [row for chunk in chunks for row in chunk]


def run_grothendieck(
    count: int = 50,
    dims: tuple[int, int, int, int] = (3, 3, 2, 2),
    seed: int = 1,
    tol: float = DEFAULT_TOL,
    jobs: int = 1,
    scale: float = 1.0,
) -> SuiteReport:
    """Norm-ratio and sandwich checks on seeded random functionals.

    Per instance: ``epsilon <= gamma2* + 1e-6`` (every tensor norm
    dominates the injective one) and ``gamma2* <= K sqrt(na nb) epsilon
    + 1e-6``.
    """

    def worker(inst_seed: int) -> list[SuiteRow]:
        bell = random_bell(inst_seed, dims, scale=scale)
        report = verify_grothendieck(bell, tol=tol)
        rows = [
            SuiteRow(
                name="ratio",
                seed=inst_seed,
                value=report.ratio,
                bound=report.bound,
                gap=report.gap,
                passed=report.passed and not report.undefined,
                detail=f"eps={report.epsilon:.9f} gamma2*={report.gamma2_star_value:.9f}",
            ),
            SuiteRow(
                name="sandwich",
                seed=inst_seed,
                value=report.epsilon,
                bound=report.gamma2_star_value + 1e-6,
                gap=report.gap,
                passed=report.epsilon <= report.gamma2_star_value + 1e-6,
            ),
        ]
        return rows

    seeds = [seed + k for k in range(count)]
    label = "gamma2* <= K*sqrt(|A||B|)*epsilon (generalized Grothendieck bound)"
    return SuiteReport.collect(
        "grothendieck", label, _run_indexed(worker, seeds, jobs)
    )


def run_direct_product(
    count: int = 20,
    dims: tuple[int, int, int, int] = (3, 3, 2, 2),
    seed: int = 1,
    tol: float = DEFAULT_TOL,
    jobs: int = 1,
) -> SuiteReport:
    """Submultiplicativity of the dual norm under parallel composition."""

    def worker(inst_seed: int) -> list[SuiteRow]:
        g1 = game_to_functional(random_game(inst_seed, dims))
        g2 = game_to_functional(random_game(inst_seed + 10_000, dims))
        report = verify_direct_product(g1, g2, tol=tol)
        return [
            SuiteRow(
                name="submultiplicative",
                seed=inst_seed,
                value=report.lhs,
                bound=report.rhs + 1e-5 * (1.0 + report.rhs),
                gap=report.gap,
                passed=report.passed,
                detail=f"rhs={report.rhs:.9f}",
            )
        ]

    seeds = [seed + k for k in range(count)]
    label = "gamma2*(G1 (x) G2) <= gamma2*(G1)*gamma2*(G2) (direct product)"
    return SuiteReport.collect(
        "direct-product", label, _run_indexed(worker, seeds, jobs)
    )


def _named_game(name: str) -> Game:
    if name == "chsh":
        return chsh_game()
    raise SchemaError(f"unknown builtin game {name!r} (try 'chsh' or a file)")


def run_parallel(
    game: Game | str = "chsh",
    n: int = 2,
    tol: float = DEFAULT_TOL,
) -> SuiteReport:
    """Perfect parallel repetition of the dual norm for XOR games."""
    g = _named_game(game) if isinstance(game, str) else game
    functional = game_to_functional(g)
    single = gamma2_star(functional, tol=tol)
    repeated = gamma2_star(power(functional, n), tol=tol)
    target = single.value**n
    deviation = abs(repeated.value - target)
    rows = [
        SuiteRow(
            name=f"power-{n}",
            seed=None,
            value=repeated.value,
            bound=target,
            gap=repeated.gap,
            passed=deviation <= 1e-4,
            detail=f"|gamma2*(G^{n}) - gamma2*(G)^{n}| = {deviation:.3e}",
        )
    ]
    label = "gamma2*(G^(x)n) = gamma2*(G)^n for XOR games (perfect repetition)"
    return SuiteReport.collect("parallel", label, rows)


def run_quantum_gamma(
    count: int = 20,
    seed: int = 1,
    tol: float = DEFAULT_TOL,
    jobs: int = 1,
) -> SuiteReport:
    """gamma2 = 1 on quantum behaviors, plus unit witness operator norms."""

    def worker(inst_seed: int) -> list[SuiteRow]:
        rng = np.random.default_rng(inst_seed)
        nx = int(rng.integers(2, 4))
        ny = int(rng.integers(2, 4))
        na = int(rng.integers(2, 4))
        nb = int(rng.integers(2, 4))
        da = int(rng.integers(na, 5))
        db = int(rng.integers(nb, 5))
        strategy = quantum.random_strategy(
            inst_seed, nx=nx, ny=ny, na=na, nb=nb, da=da, db=db
        )
        behavior = quantum.behavior_of(strategy)
        result = gamma2(behavior, tol=tol)
        va, vb = quantum.strategy_vector_systems(strategy)
        product = opnorm_1inf_to_2(va).value * opnorm_2_to_inf1(vb).value
        return [
            SuiteRow(
                name="gamma2-of-quantum",
                seed=inst_seed,
                value=result.value,
                bound=1.0 + 1e-5,
                gap=result.gap,
                passed=abs(result.value - 1.0) <= 1e-5,
                detail=f"dims=({nx},{ny},{na},{nb}) local=({da},{db})",
            ),
            SuiteRow(
                name="witness-opnorm-product",
                seed=inst_seed,
                value=product,
                bound=1.0 + 1e-8,
                gap=None,
                passed=abs(product - 1.0) <= 1e-8,
            ),
        ]

    seeds = [seed + k for k in range(count)]
    label = "gamma2(P) = 1 for behaviors of projective strategies"
    return SuiteReport.collect(
        "quantum-gamma", label, _run_indexed(worker, seeds, jobs)
    )


def run_krivine(
    samples: int = 1_000_000,
    seed: int = 1,
    tol: float = DEFAULT_TOL,
) -> SuiteReport:
    """Sign-product identity at scale plus the CHSH rounding certificate."""
    rows: list[SuiteRow] = []
    # Identity on a spread of inner products including the CHSH angles.
    inner = np.array([0.0, 0.25, 1.0 / math.sqrt(2.0), 0.9, 1.0])
    vecs_a = [np.array([1.0, 0.0])]
    vecs_b = [np.array([t, math.sqrt(max(0.0, 1.0 - t * t))]) for t in inner]
    gram_ab = np.array([[float(a @ b) for b in vecs_b] for a in vecs_a])
    cov = rounding.krivine_covariance(
        np.eye(1),
        gram_ab,
        np.array([[float(b1 @ b2) for b2 in vecs_b] for b1 in vecs_b]),
    )
    batch = rounding.sample_signs(cov, samples, seed)
    report = rounding.grothendieck_identity_check(gram_ab, batch)
    for j, t in enumerate(inner):
        dev = float(abs(report.empirical[0, j] - report.analytic[0, j]))
        rows.append(
            SuiteRow(
                name=f"identity-{t:.4f}",
                seed=seed,
                value=float(report.empirical[0, j]),
                bound=float(report.analytic[0, j]),
                gap=float(report.stderr[0, j]),
                passed=dev <= 4.0 * float(report.stderr[0, j]),
                detail=f"deviation={dev:.2e}",
            )
        )
    # CHSH correlation-form rounding certificate.
    corr = np.zeros((2, 1, 2, 1))
    for x in range(2):
        for y in range(2):
            corr[x, 0, y, 0] = 1.0 if (x & y) == 0 else -1.0
    bell = BellFunctional(corr)
    star = gamma2_star(bell, tol=tol)
    va, vb = witness_vectors(star.witness)
    cert = rounding.round_bell(bell, va, vb, samples=min(samples, 100_000), seed=seed)
    floor = 2.0 * math.sqrt(2.0) / GROTHENDIECK_K - 0.05
    rows.append(
        SuiteRow(
            name="chsh-rounding-certificate",
            seed=seed,
            value=cert.value,
            bound=floor,
            gap=cert.stderr,
            passed=floor <= cert.value <= 2.0 + 1e-9,
            detail=f"mean={cert.mean:.6f} exact-epsilon=2",
        )
    )
    label = "Gaussian sign rounding: exact identity and injective-norm certificate"
    return SuiteReport.collect("krivine", label, rows)
