"""Command-line front end.

Subcommands:

* ``value``   -- compute one value of an input document,
* ``compose`` -- parallel-compose documents (optionally a power),
* ``random``  -- emit a seeded random game or Bell functional,
* ``verify``  -- run a named verification suite over seeded instances,
* ``round``   -- Gaussian sign rounding of a dual-norm witness.

Reports are JSON, written with ``--out``:

``{"command": ..., "inputs": [{"path", "sha256"}], "results":
[{"name", "value", "gap", "bound", "pass"}], "seeds": [...],
"timings_ms": {...}, "version": ...}``

Exit codes: 0 success, 1 verification failure, 2 input/schema error,
3 cap exceeded, 4 solver failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Any, Optional

from . import __version__
from .classical import bell_classical_value, classical_value, injective_norm
from .errors import CapExceeded, GameNormsError, SchemaError, SolverFailure
from .games import (
    BehaviorTensor,
    BellFunctional,
    Game,
    chsh_game,
    compose,
    compose_games,
    game_to_functional,
    power,
    power_game,
    random_bell,
    random_game,
)
from .hilbertian import gamma2, gamma2_star, witness_vectors, xor_entangled_value
from .rounding import round_bell
from .quantum import seesaw_lower_bound
from . import serialize, suites

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_CAP_EXCEEDED = 3
EXIT_SOLVER_FAILURE = 4

_VALUE_LABELS = {
    "classical": "classical value (exact strategy enumeration; equals the injective norm of the game tensor)",
    "epsilon": "injective tensor norm (signed strategy enumeration)",
    "bellclassical": "classical Bell bound B_C (deterministic behaviors)",
    "gamma2": "Hilbertian tensor norm gamma2 (SDP with Gram witness)",
    "gamma2star": "dual Hilbertian norm gamma2* (SDP upper bound on the entangled value)",
    "xorquantum": "entangled value of an XOR game (gamma2* is tight for XOR games)",
}


class _Report:
    def __init__(self, command: str):
        self.command = command
        self.inputs: list[dict[str, str]] = []
        self.results: list[dict[str, Any]] = []
        self.seeds: list[int] = []
        self.timings_ms: dict[str, float] = {}
        self._t0 = time.perf_counter()

    def add_input(self, path: str) -> None:
        digest = hashlib.sha256(open(path, "rb").read()).hexdigest()
        self.inputs.append({"path": path, "sha256": digest})

    def add_result(
        self,
        name: str,
        value: float,
        gap: Optional[float] = None,
        bound: Optional[float] = None,
        passed: Optional[bool] = None,
    ) -> None:
        self.results.append(
            {"name": name, "value": value, "gap": gap, "bound": bound, "pass": passed}
        )

    def finish(self, out_path: Optional[str]) -> None:
        self.timings_ms["total"] = (time.perf_counter() - self._t0) * 1e3
        if out_path:
            doc = {
                "command": self.command,
                "inputs": self.inputs,
                "results": self.results,
                "seeds": self.seeds,
                "timings_ms": self.timings_ms,
                "version": __version__,
            }
            with open(out_path, "w", encoding="utf-8") as handle:
                json.dump(doc, handle, sort_keys=True, indent=1)
                handle.write("\n")


def _parse_dims(text: str) -> tuple[int, int, int, int]:
    parts = text.split(",")
    if len(parts) != 4:
        raise SchemaError(f"--dims wants nx,ny,na,nb, got {text!r}")
    try:
        nx, ny, na, nb = (int(p) for p in parts)
    except ValueError as exc:
        raise SchemaError(f"--dims entries must be integers: {exc}") from exc
    if min(nx, ny, na, nb) < 1:
        raise SchemaError("--dims entries must be positive")
    return nx, ny, na, nb


def _load(path: str):
    if path == "chsh":
        return chsh_game()
    try:
        return serialize.parse_file(path)
    except FileNotFoundError as exc:
        raise SchemaError(f"no such input file: {path}") from exc


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_value(args: argparse.Namespace) -> int:
    report = _Report("value")
    obj = _load(args.input)
    if args.input != "chsh":
        report.add_input(args.input)
    which = args.which
    label = _VALUE_LABELS[which]
    tol = args.tol

    if which == "classical":
        if not isinstance(obj, Game):
            raise SchemaError("--which classical needs a game document")
        cert = classical_value(obj)
        report.add_result("classical-value", cert.value, gap=0.0)
        print(f"{label}: {cert.value!r}  [exact; certificate replay verified]")
    elif which == "epsilon":
        if isinstance(obj, Game):
            obj = game_to_functional(obj)
        if not isinstance(obj, BellFunctional):
            raise SchemaError("--which epsilon needs a game or bell document")
        cert = injective_norm(obj)
        report.add_result("injective-norm", cert.value, gap=0.0)
        print(f"{label}: {cert.value!r}  [exact]")
    elif which == "bellclassical":
        if isinstance(obj, Game):
            obj = game_to_functional(obj)
        if not isinstance(obj, BellFunctional):
            raise SchemaError("--which bellclassical needs a game or bell document")
        cert = bell_classical_value(obj)
        report.add_result("bell-classical-bound", cert.value, gap=0.0)
        print(f"{label}: {cert.value!r}  [exact]")
    elif which == "gamma2":
        if not isinstance(obj, BehaviorTensor):
            raise SchemaError("--which gamma2 needs a behavior document")
        res = gamma2(obj, tol=tol)
        report.add_result("gamma2", res.value, gap=res.gap)
        print(f"{label}: {res.value!r}  [solver gap {res.gap:.2e}]")
    elif which == "gamma2star":
        if isinstance(obj, Game):
            obj = game_to_functional(obj)
        if not isinstance(obj, BellFunctional):
            raise SchemaError("--which gamma2star needs a game or bell document")
        res = gamma2_star(obj, tol=tol)
        report.add_result("gamma2-star", res.value, gap=res.gap)

        print(f"{label}: {res.value!r}  [solver gap {res.gap:.2e}]")
    elif which == "xorquantum":
        if not isinstance(obj, Game):
            raise SchemaError("--which xorquantum needs an XOR game document")
        res = xor_entangled_value(obj, tol=tol)
        report.add_result("xor-entangled-value", res.value, gap=res.gap)
        if args.seesaw:
            low = seesaw_lower_bound(obj, d=args.seesaw_dim, seed=args.seed or 0)
            report.add_result("seesaw-lower-bound", low.value)
            print(f"see-saw lower bound (local dim {args.seesaw_dim}): {low.value!r}")
        print(
            f"{label}: {res.value!r}  [solver gap {res.gap:.2e}; "
            f"bias route agrees to {res.agreement:.2e}]"
        )
    report.finish(args.out)
    return EXIT_OK


def _cmd_compose(args: argparse.Namespace) -> int:
    report = _Report("compose")
    objs = [_load(path) for path in args.inputs]
    for path in args.inputs:
        if path != "chsh":
            report.add_input(path)
    if all(isinstance(o, Game) for o in objs):
        combined = objs[0]
        for other in objs[1:]:
            combined = compose_games(combined, other)
        if args.power > 1:
            combined = power_game(combined, args.power)
    elif all(isinstance(o, BellFunctional) for o in objs):
        combined = objs[0]
        for other in objs[1:]:
            combined = compose(combined, other)
        if args.power > 1:
            combined = power(combined, args.power)
    else:
        raise SchemaError("compose needs inputs of one kind (all games or all bells)")
    text = serialize.emit(combined)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"wrote composed document to {args.out}")
    else:
        sys.stdout.write(text)
    report.finish(None)
    return EXIT_OK


def _cmd_random(args: argparse.Namespace) -> int:
    dims = _parse_dims(args.dims)
    if args.kind == "game":
        obj = random_game(args.seed, dims, density=args.density)
    else:
        obj = random_bell(args.seed, dims, scale=args.scale)
    text = serialize.emit(obj)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"wrote {args.kind} (seed {args.seed}) to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


_SUITES = ("grothendieck", "direct-product", "parallel", "quantum-gamma", "krivine")


def _cmd_verify(args: argparse.Namespace) -> int:
    report = _Report("verify")
    suite = args.suite
    tol = args.tol
    if suite == "grothendieck":
        dims = _parse_dims(args.dims) if args.dims else (3, 3, 2, 2)
        result = suites.run_grothendieck(
            count=args.count or 50, dims=dims, seed=args.seed or 1, tol=tol,
            jobs=args.jobs,
        )
    elif suite == "direct-product":
        dims = _parse_dims(args.dims) if args.dims else (3, 3, 2, 2)
        result = suites.run_direct_product(
            count=args.count or 20, dims=dims, seed=args.seed or 1, tol=tol,
            jobs=args.jobs,
        )
    elif suite == "parallel":
        game = _load(args.game) if args.game else chsh_game()
        if not isinstance(game, Game):
            raise SchemaError("verify parallel needs a game")
        result = suites.run_parallel(game=game, n=args.n, tol=tol)
    elif suite == "quantum-gamma":
        result = suites.run_quantum_gamma(
            count=args.count or 20, seed=args.seed or 1, tol=tol, jobs=args.jobs
        )
    elif suite == "krivine":
        result = suites.run_krivine(
            samples=args.samples or 1_000_000, seed=args.seed or 1, tol=tol
        )
    else:  # pragma: no cover - argparse restricts choices
        raise SchemaError(f"unknown suite {suite!r}")

    print(f"suite {result.suite}: {result.label}")
    failures = 0
    for row in result.rows:
        report.add_result(
            f"{row.name}" + (f"@seed={row.seed}" if row.seed is not None else ""),
            row.value,
            gap=row.gap,
            bound=row.bound,
            passed=row.passed,
        )
        if row.seed is not None and row.seed not in report.seeds:
            report.seeds.append(row.seed)
        mark = "pass" if row.passed else "FAIL"
        bound_txt = f" bound={row.bound:.9g}" if row.bound is not None else ""
        gap_txt = f" gap={row.gap:.2e}" if row.gap is not None else ""
        seed_txt = f" seed={row.seed}" if row.seed is not None else ""
        detail_txt = f"  ({row.detail})" if row.detail else ""
        print(
            f"  [{mark}] {row.name}{seed_txt}: value={row.value:.9g}"
            f"{bound_txt}{gap_txt}{detail_txt}"
        )
        failures += not row.passed
    print(f"suite {result.suite}: {'pass' if result.passed else f'{failures} failures'}")
    report.finish(args.out)
    return EXIT_OK if result.passed else EXIT_VERIFICATION_FAILED


def _cmd_round(args: argparse.Namespace) -> int:
    report = _Report("round")
    obj = _load(args.input)
    if args.input != "chsh":
        report.add_input(args.input)
    if isinstance(obj, Game):
        obj = game_to_functional(obj)
    if not isinstance(obj, BellFunctional):
        raise SchemaError("round needs a bell or game document")
    star = gamma2_star(obj, tol=args.tol)
    va, vb = witness_vectors(star.witness)
    cert = round_bell(obj, va, vb, samples=args.samples, seed=args.seed or 0)
    report.seeds.append(args.seed or 0)
    report.add_result("gamma2-star", star.value, gap=star.gap)
    report.add_result("rounding-certificate", cert.value)
    report.add_result("rounding-mean", cert.mean, gap=cert.stderr)
    print(
        "dual Hilbertian norm gamma2*: "
        f"{star.value!r}  [solver gap {star.gap:.2e}]"
    )
    print(
        f"sign-rounding certificate (lower bound on the injective norm): "
        f"{cert.value!r} from {cert.samples} samples (seed {cert.seed})"
    )
    print(
        f"normalized sample mean {cert.mean!r} (stderr {cert.stderr:.2e}); "
        f"analytic expectation gamma2*/(K*sqrt(|A||B|))"
    )
    if cert.identity is not None:
        worst = cert.identity.max_abs_deviation
        report.add_result(
            "identity-max-deviation",
            worst,
            gap=float(cert.identity.stderr.max()) if cert.identity.stderr.size else None,
        )
        print(
            f"sign-product identity: max |empirical - analytic| = {worst:.3e} "
            f"(largest stderr {float(cert.identity.stderr.max()):.2e})"
        )
    report.finish(args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gamenorms",
        description=(
            "Tensor norms of two-prover games: exact classical values, "
            "Hilbertian-norm SDPs, quantum strategies and Gaussian sign rounding."
        ),
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="write a JSON report/document here")
        p.add_argument("--tol", type=float, default=1e-7, help="SDP tolerance")
        p.add_argument("--seed", type=int, default=None, help="base 64-bit seed")

    p_value = sub.add_parser("value", help="compute one value of a document")
    p_value.add_argument("input", help="input document path (or 'chsh')")
    p_value.add_argument(
        "--which",
        required=True,
        choices=tuple(_VALUE_LABELS),
    )
    p_value.add_argument(
        "--seesaw", action="store_true",
        help="with xorquantum: also report a see-saw lower bound",
    )
    p_value.add_argument("--seesaw-dim", type=int, default=2)
    common(p_value)
    p_value.set_defaults(func=_cmd_value)

    p_compose = sub.add_parser("compose", help="parallel-compose documents")
    p_compose.add_argument("inputs", nargs="+")
    p_compose.add_argument("--power", type=int, default=1)
    common(p_compose)
    p_compose.set_defaults(func=_cmd_compose)

    p_random = sub.add_parser("random", help="emit a seeded random document")
    p_random.add_argument("--kind", required=True, choices=("game", "bell"))
    p_random.add_argument("--dims", required=True, help="nx,ny,na,nb")
    p_random.add_argument("--density", type=float, default=0.5)
    p_random.add_argument("--scale", type=float, default=1.0)
    common(p_random)
    p_random.set_defaults(func=_cmd_random)
    p_random.set_defaults(seed=0)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=_SUITES)
    p_verify.add_argument("--count", type=int, default=None)
    p_verify.add_argument("--samples", type=int, default=None)
    p_verify.add_argument("--dims", default=None, help="nx,ny,na,nb")
    p_verify.add_argument("--jobs", type=int, default=1)
    p_verify.add_argument("--game", default=None, help="builtin name or file")
    p_verify.add_argument("--n", type=int, default=2, help="repetition power")
    common(p_verify)
    p_verify.set_defaults(func=_cmd_verify)

    p_round = sub.add_parser("round", help="Gaussian sign rounding of a witness")
    p_round.add_argument("input")
    p_round.add_argument("--samples", type=int, default=100_000)
    common(p_round)
    p_round.set_defaults(func=_cmd_round)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP_EXCEEDED
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER_FAILURE
    except (SchemaError, GameNormsError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
