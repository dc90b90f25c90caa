"""Dense semidefinite programming for small, certified instances.

Optimizes a linear functional of a symmetric PSD matrix variable under
linear equality and inequality constraints.  The algorithm is a
primal-dual path follower on the homogeneous self-dual embedding with
Nesterov-Todd scaling and dense factorizations; inequalities are
handled internally by a nonnegative diagonal slack block.  Mehrotra's
predictor-corrector is available behind a flag.

Everything is deterministic: identical inputs produce bit-identical
iterate sequences.  Intended scale is matrix side up to a few hundred
and a few thousand constraints; there is no sparse path.
"""

from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np

from .errors import CapExceeded, SchemaError, SolverFailure

DEFAULT_DIM_CAP = 512
DEFAULT_CONSTRAINT_CAP = 20000
DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITERATIONS = 300
#: Fraction of the distance to the cone boundary taken per step.
STEP_FRACTION = 0.98
#: Declare infeasibility when tau/kappa falls below this ratio.
INFEASIBILITY_RATIO = 1e-8
_SYMMETRY_TOL = 1e-12


def _symmetrized(m: np.ndarray, what: str) -> np.ndarray:
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SchemaError(f"{what} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise SchemaError(f"{what} has non-finite entries")
    skew = float(np.abs(m - m.T).max()) if m.size else 0.0
    if skew > _SYMMETRY_TOL * max(1.0, float(np.abs(m).max())):
        raise SchemaError(f"{what} is asymmetric by {skew!r}")
    out = 0.5 * (m + m.T)
    out.flags.writeable = False
    return out


@dataclasses.dataclass(frozen=True)
class SdpProblem:
    """``optimize <objective, Z>`` over symmetric PSD ``Z`` of side ``dim``.

    Equality constraints read ``<A_k, Z> = b_k`` and inequality
    constraints ``<C_k, Z> <= d_k`` (Frobenius pairing).  All matrices
    are symmetrized on construction and must be symmetric to 1e-12.
    """

    dim: int
    sense: str
    objective: np.ndarray
    eq_constraints: tuple[tuple[np.ndarray, float], ...] = ()
    ineq_constraints: tuple[tuple[np.ndarray, float], ...] = ()
    dim_cap: int = DEFAULT_DIM_CAP
    constraint_cap: int = DEFAULT_CONSTRAINT_CAP

    def __post_init__(self) -> None:
        if self.sense not in ("maximize", "minimize"):
            raise SchemaError(f"sense must be maximize|minimize, got {self.sense!r}")
        if self.dim < 1:
            raise SchemaError("dim must be positive")
        if self.dim > self.dim_cap:
            raise CapExceeded(f"matrix side {self.dim} exceeds cap {self.dim_cap}")
        total = len(self.eq_constraints) + len(self.ineq_constraints)
        if total > self.constraint_cap:
            raise CapExceeded(
                f"{total} constraints exceed cap {self.constraint_cap}"
            )
        obj = _symmetrized(self.objective, "objective")
        if obj.shape != (self.dim, self.dim):
            raise SchemaError("objective shape does not match dim")

        def normalize(cons, what):
            out = []
            for k, (mat, rhs) in enumerate(cons):
                sym = _symmetrized(mat, f"{what} constraint {k}")
                if sym.shape != (self.dim, self.dim):
                    raise SchemaError(f"{what} constraint {k} shape mismatch")
                out.append((sym, float(rhs)))
            return tuple(out)

        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "eq_constraints", normalize(self.eq_constraints, "eq"))
        object.__setattr__(
            self, "ineq_constraints", normalize(self.ineq_constraints, "ineq")
        )

    def dump(self) -> str:
        """Plain-text sparse triplet dump for cross-checking other solvers.

        Format, one record per line:
        ``dim N`` / ``sense S`` / ``obj i j v`` /
        ``eq k i j v`` + ``eqrhs k b`` / ``ineq k i j v`` + ``ineqrhs k d``.
        Only upper-triangle (i <= j) nonzeros are listed.
        """
        lines = [f"dim {self.dim}", f"sense {self.sense}"]

        def triplets(tag: str, mat: np.ndarray) -> None:
            for i in range(self.dim):
                for j in range(i, self.dim):
                    if mat[i, j] != 0.0:
                        lines.append(f"{tag} {i} {j} {mat[i, j]!r}")

        triplets("obj", self.objective)
        for k, (mat, rhs) in enumerate(self.eq_constraints):
            triplets(f"eq {k}", mat)
            lines.append(f"eqrhs {k} {rhs!r}")
        for k, (mat, rhs) in enumerate(self.ineq_constraints):
            triplets(f"ineq {k}", mat)
            lines.append(f"ineqrhs {k} {rhs!r}")
        return "\n".join(lines) + "\n"


@dataclasses.dataclass(frozen=True)
class SdpSolution:
    """A solved instance with its certification data.

    ``gap`` is the relative primal-dual gap ``|p - d| / (1 + |p|)``;
    ``kkt_residuals`` holds (primal feasibility, dual feasibility,
    complementarity) as absolute numbers.  ``status`` is one of
    ``optimal``, ``infeasible``, ``max_iterations``.
    """

    z: np.ndarray
    primal_value: float
    dual_value: float
    gap: float
    status: str
    iterations: int
    kkt_residuals: tuple[float, float, float]
    certificate: Optional[np.ndarray] = None
    trace: tuple[tuple[float, ...], ...] = ()


@dataclasses.dataclass(frozen=True)
class ResidualReport:
    """Independent feasibility replay of a solution (see check_solution)."""

    objective_value: float
    equality_residual: float
    inequality_residual: float
    eigenvalue_residual: float


def check_solution(problem: SdpProblem, solution: SdpSolution) -> ResidualReport:
    """Recompute objective and feasibility from scratch, no solver state."""
    z = solution.z
    if z.shape != (problem.dim, problem.dim):
        raise SchemaError("solution matrix shape does not match problem dim")
    obj = float(np.tensordot(problem.objective, z))
    eq = 0.0
    for mat, rhs in problem.eq_constraints:
        eq = max(eq, abs(float(np.tensordot(mat, z)) - rhs))
    ineq = 0.0
    for mat, rhs in problem.ineq_constraints:
        ineq = max(ineq, float(np.tensordot(mat, z)) - rhs)
    ineq = max(ineq, 0.0)
    eigmin = float(np.linalg.eigvalsh(0.5 * (z + z.T))[0])
    return ResidualReport(
        objective_value=obj,
        equality_residual=eq,
        inequality_residual=ineq,
        eigenvalue_residual=max(0.0, -eigmin),
    )


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value (the 2->2 operator norm)."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


# ---------------------------------------------------------------------------
# Interior-point internals
# ---------------------------------------------------------------------------


def _psd_factor(m: np.ndarray) -> np.ndarray:
    """Cholesky factor, with an eigenvalue-floor fallback near the boundary."""
    try:
        return np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(m)
        floor = max(float(vals.max()), 1.0) * 1e-14
        return vecs * np.sqrt(np.clip(vals, floor, None))


def _max_boundary_step(lam: np.ndarray, dbar: np.ndarray) -> float:
    """Largest alpha with diag(lam) + alpha*dbar still PSD (scaled coords)."""
    scale = 1.0 / np.sqrt(lam)
    m = dbar * scale[:, None] * scale[None, :]
    low = float(np.linalg.eigvalsh(0.5 * (m + m.T))[0])
    if low >= 0.0:
        return np.inf
    return -1.0 / low


def _max_positive_step(v: np.ndarray, dv: np.ndarray) -> float:
    neg = dv < 0.0
    if not np.any(neg):
        return np.inf
    return float(np.min(-v[neg] / dv[neg]))


class _Embedding:
    """Homogeneous self-dual model over (PSD block, slack orthant)."""

    def __init__(self, problem: SdpProblem):
        n = problem.dim
        self.n = n
        sign = -1.0 if problem.sense == "maximize" else 1.0
        self.c_sdp = sign * problem.objective
        self.m_eq = len(problem.eq_constraints)
        self.m_lp = len(problem.ineq_constraints)
        self.m = self.m_eq + self.m_lp
        mats = [m for m, _ in problem.eq_constraints] + [
            m for m, _ in problem.ineq_constraints
        ]
        self.a_sdp = (
            np.stack(mats) if mats else np.zeros((0, n, n))
        )  # (m, n, n)
        self.a_flat = self.a_sdp.reshape(self.m, n * n)
        self.b = np.array(
            [rhs for _, rhs in problem.eq_constraints]
            + [rhs for _, rhs in problem.ineq_constraints]
        )
        self.nu = n + self.m_lp + 1.0

    def apply(self, x_sdp: np.ndarray, x_lp: np.ndarray) -> np.ndarray:
        out = self.a_flat @ x_sdp.ravel()
        if self.m_lp:
            out[self.m_eq :] += x_lp
        return out

    def adjoint(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        mat = np.einsum("k,kij->ij", y, self.a_sdp) if self.m else np.zeros((self.n, self.n))
        return mat, y[self.m_eq :].copy()

    def inner_c(self, x_sdp: np.ndarray, x_lp: np.ndarray) -> float:
        # c has no slack component.
        del x_lp
        return float(np.tensordot(self.c_sdp, x_sdp))


def solve(
    problem: SdpProblem,
    tol: float = DEFAULT_TOL,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    mehrotra: bool = False,
    step_fraction: float = STEP_FRACTION,
    keep_trace: bool = False,
) -> SdpSolution:
    """Solve to relative gap ``tol``; feasibility is certified to ``10*tol``.

    Deterministic; raises nothing on unconverged instances (the status
    field reports ``max_iterations`` with the best iterate) but refuses
    tolerances outside [1e-10, 1e-4].
    """
    if not (1e-10 <= tol <= 1e-4):
        raise SchemaError(f"tol must lie in [1e-10, 1e-4], got {tol!r}")
    emb = _Embedding(problem)
    n, m, m_eq, m_lp = emb.n, emb.m, emb.m_eq, emb.m_lp
    feastol = 10.0 * tol

    x = np.eye(n)
    w = np.ones(m_lp)
    y = np.zeros(m)
    s = np.eye(n)
    v = np.ones(m_lp)
    tau = 1.0
    kappa = 1.0

    b_scale = 1.0 + float(np.abs(emb.b).max()) if m else 1.0
    c_scale = 1.0 + float(np.abs(emb.c_sdp).max())
    mu0 = (float(np.tensordot(x, s)) + float(w @ v) + tau * kappa) / emb.nu

    trace: list[tuple[float, ...]] = []
    status = "max_iterations"
    certificate: Optional[np.ndarray] = None
    iterations = 0

    lp_idx = np.arange(m_eq, m)

    # Best-scored iterate so far; the path can degrade numerically once mu
    # bottoms out, so the returned point is the best one visited, not the last.
    best_score = np.inf
    best_state = (x, w, y, s, v, tau, kappa)
    stalled = 0
    last_alpha = 1.0

    for iteration in range(max_iterations):
        iterations = iteration
        # Residuals of the homogeneous model.
        rp = emb.apply(x, w) - emb.b * tau
        adj_mat, adj_lp = emb.adjoint(y)
        rd_sdp = -adj_mat - s + emb.c_sdp * tau
        rd_lp = -adj_lp - v
        rg = float(emb.b @ y) - emb.inner_c(x, w) - kappa
        mu = (float(np.tensordot(x, s)) + float(w @ v) + tau * kappa) / emb.nu

        pval_int = emb.inner_c(x, w) / tau
        dval_int = float(emb.b @ y) / tau
        rel_p = float(np.abs(rp).max()) / tau / b_scale if m else 0.0
        rel_d = (
            max(
                float(np.abs(rd_sdp).max()),
                float(np.abs(rd_lp).max()) if m_lp else 0.0,
            )
            / tau
            / c_scale
        )
        rel_gap = abs(pval_int - dval_int) / (1.0 + abs(pval_int))
        if keep_trace:
            trace.append((pval_int, dval_int, mu, rel_p, rel_d))

        score = max(rel_p / feastol, rel_d / feastol, rel_gap / tol)
        if score < best_score:
            best_score = score
            best_state = (x.copy(), w.copy(), y.copy(), s.copy(), v.copy(), tau, kappa)
            stalled = 0
        else:
            stalled += 1

        if score <= 1.0:
            status = "optimal"
            break
        if tau <= INFEASIBILITY_RATIO * kappa and mu <= 1e-10 * mu0:
            status = "infeasible"
            certificate = y / tau if tau > 0 else y.copy()
            break
        if stalled >= 15 or mu <= 1e-16 * max(1.0, mu0):
            break

        # Nesterov-Todd scaling point of the PSD block.
        lx = _psd_factor(x)
        ls = _psd_factor(s)
        u_svd, lam, vt_svd = np.linalg.svd(ls.T @ lx)
        lam = np.maximum(lam, 1e-300)
        r_mat = lx @ vt_svd.T / np.sqrt(lam)
        r_inv = (u_svd.T @ ls.T) / np.sqrt(lam)[:, None]
        # LP scaling.
        d_lp = np.sqrt(w / v) if m_lp else np.zeros(0)
        lam_lp = np.sqrt(w * v) if m_lp else np.zeros(0)

        def w_conj(mat: np.ndarray) -> np.ndarray:
            """W M W for the PSD block."""
            return r_mat @ (r_mat.T @ mat @ r_mat) @ r_mat.T

        # Schur complement M_ij = <A_i, W A_j W> + LP diagonal.
        if m:
            rar = np.matmul(
                r_mat.T[None, :, :], np.matmul(emb.a_sdp, r_mat[None, :, :])
            )
            waw = np.matmul(r_mat[None, :, :], np.matmul(rar, r_mat.T[None, :, :]))
            schur = emb.a_flat @ waw.reshape(m, n * n).T
            if m_lp:
                schur[lp_idx, lp_idx] += d_lp**2
            schur = 0.5 * (schur + schur.T)
            try:
                schur_f = np.linalg.cholesky(schur)
            except np.linalg.LinAlgError:
                bump = 1e-13 * max(1.0, float(np.trace(schur)) / max(m, 1))
                schur_f = np.linalg.cholesky(schur + bump * np.eye(m))

            def solve_schur(rhs: np.ndarray) -> np.ndarray:
                half = np.linalg.solve(schur_f, rhs)
                return np.linalg.solve(schur_f.T, half)

        else:

            def solve_schur(rhs: np.ndarray) -> np.ndarray:
                return rhs

        wcw = w_conj(emb.c_sdp)
        awc = emb.apply(wcw, np.zeros(m_lp))

        def newton(
            r1: np.ndarray,
            r2_sdp: np.ndarray,
            r2_lp: np.ndarray,
            r3: float,
            d_sdp: np.ndarray,
            d_lp_rhs: np.ndarray,
            r5: float,
        ):
            """One reduced Newton solve of the embedding.

            Unknowns (dx, dw, dy, dtau, ds, dv, dkappa) satisfy
              A dX - b dtau                  = r1
              -A^T dy - dS + c dtau          = r2
              b.dy - <c, dX> - dkappa        = r3
              scaled complementarity rhs     = d_*
              tau dkappa + kappa dtau        = r5.
            """
            rd_mat = r_inv.T @ d_sdp @ r_inv
            rd_lp_vec = d_lp_rhs / d_lp if m_lp else np.zeros(0)
            base_sdp = w_conj(r2_sdp + rd_mat)
            base_lp = (d_lp**2) * (r2_lp + rd_lp_vec) if m_lp else np.zeros(0)
            u1 = r1 - emb.apply(base_sdp, base_lp)
            g1 = solve_schur(u1)
            g2 = solve_schur(emb.b + awc)
            adj1_mat, adj1_lp = emb.adjoint(g1)
            adj2_mat, adj2_lp = emb.adjoint(g2)
            dx1 = base_sdp + w_conj(adj1_mat)
            dw1 = base_lp + (d_lp**2) * adj1_lp if m_lp else np.zeros(0)
            dx2 = w_conj(adj2_mat) - wcw
            dw2 = (d_lp**2) * adj2_lp if m_lp else np.zeros(0)
            denom = (
                float(emb.b @ g2)
                - emb.inner_c(dx2, dw2)
                + kappa / tau
            )
            numer = (
                r3
                + r5 / tau
                - float(emb.b @ g1)
                + emb.inner_c(dx1, dw1)
            )
            dtau = numer / denom
            dx = dx1 + dtau * dx2
            dw = dw1 + dtau * dw2 if m_lp else np.zeros(0)
            dy = g1 + dtau * g2
            ds = rd_mat - r_inv.T @ (r_inv @ dx @ r_inv.T) @ r_inv
            dv = rd_lp_vec - dw / d_lp**2 if m_lp else np.zeros(0)
            dkappa = (r5 - kappa * dtau) / tau
            return dx, dw, dy, dtau, ds, dv, dkappa

        def newton_refined(
            r1: np.ndarray,
            r2_sdp: np.ndarray,
            r2_lp: np.ndarray,
            r3: float,
            d_sdp: np.ndarray,
            d_lp_rhs: np.ndarray,
            r5: float,
        ):
            """Newton solve plus one iterative-refinement pass.

            Refinement repairs the precision the reduced Schur solve
            loses when the scaling becomes ill-conditioned near the end
            of the path; the correction keeps the scaled complementarity
            equation homogeneous so the pairing is untouched.
            """
            direction = newton(r1, r2_sdp, r2_lp, r3, d_sdp, d_lp_rhs, r5)
            for _ in range(2):
                dx, dw, dy, dtau, ds, dv, dkappa = direction
                adj_m, adj_l = emb.adjoint(dy)
                e1 = r1 - (emb.apply(dx, dw) - emb.b * dtau)
                e2_sdp = r2_sdp - (-adj_m - ds + emb.c_sdp * dtau)
                e2_lp = r2_lp - (-adj_l - dv) if m_lp else np.zeros(0)
                e3 = r3 - (float(emb.b @ dy) - emb.inner_c(dx, dw) - dkappa)
                e5 = r5 - (tau * dkappa + kappa * dtau)
                fix = newton(
                    e1, e2_sdp, e2_lp, e3,
                    np.zeros((n, n)), np.zeros(m_lp), e5,
                )
                direction = tuple(a + b for a, b in zip(direction, fix))
            return direction

        def step_limit(dx, dw, ds, dv, dtau, dkappa) -> float:
            dx_bar = r_inv @ dx @ r_inv.T
            ds_bar = r_mat.T @ ds @ r_mat
            alpha = min(
                _max_boundary_step(lam, dx_bar),
                _max_boundary_step(lam, ds_bar),
            )
            if m_lp:
                alpha = min(
                    alpha,
                    _max_positive_step(w, dw),
                    _max_positive_step(v, dv),
                )
            alpha = min(
                alpha,
                _max_positive_step(np.array([tau]), np.array([dtau])),
                _max_positive_step(np.array([kappa]), np.array([dkappa])),
            )
            return alpha

        lam_outer = lam[:, None] + lam[None, :]

        def compl_rhs(sigma: float, corr_sdp, corr_lp, corr_tk):
            target = sigma * mu * np.eye(n) - np.diag(lam**2)
            if corr_sdp is not None:
                target = target + corr_sdp
            d_sdp = 2.0 * target / lam_outer
            if m_lp:
                t_lp = sigma * mu - lam_lp**2
                if corr_lp is not None:
                    t_lp = t_lp + corr_lp
                d_lp_rhs = t_lp / lam_lp
            else:
                d_lp_rhs = np.zeros(0)
            r5 = sigma * mu - tau * kappa + corr_tk
            return d_sdp, d_lp_rhs, r5

        if mehrotra:
            d_sdp0, d_lp0, r50 = compl_rhs(0.0, None, None, 0.0)
            aff = newton_refined(-rp, -rd_sdp, -rd_lp, -rg, d_sdp0, d_lp0, r50)
            dxa, dwa, dya, dtaua, dsa, dva, dkappaa = aff
            alpha_aff = min(1.0, step_limit(dxa, dwa, dsa, dva, dtaua, dkappaa))
            mu_aff = (
                float(np.tensordot(x + alpha_aff * dxa, s + alpha_aff * dsa))
                + float((w + alpha_aff * dwa) @ (v + alpha_aff * dva))
                + (tau + alpha_aff * dtaua) * (kappa + alpha_aff * dkappaa)
            ) / emb.nu
            sigma = float(np.clip((max(mu_aff, 0.0) / mu) ** 3, 1e-8, 1.0 - 1e-8))
            dxa_bar = r_inv @ dxa @ r_inv.T
            dsa_bar = r_mat.T @ dsa @ r_mat
            corr_sdp = -0.5 * (dxa_bar @ dsa_bar + dsa_bar @ dxa_bar)
            corr_lp = -(dwa / d_lp) * (dva * d_lp) if m_lp else None
            corr_tk = -dtaua * dkappaa
        else:
            # Aggressive centering after short steps, mild after long ones.
            if last_alpha >= 0.9:
                sigma = 0.1
            elif last_alpha >= 0.5:
                sigma = 0.3
            else:
                sigma = 0.8
            corr_sdp = None
            corr_lp = None
            corr_tk = 0.0

        damp = 1.0 - sigma
        d_sdp_rhs, d_lp_rhs, r5 = compl_rhs(sigma, corr_sdp, corr_lp, corr_tk)
        dx, dw, dy, dtau, ds, dv, dkappa = newton_refined(
            -damp * rp, -damp * rd_sdp, -damp * rd_lp, -damp * rg,
            d_sdp_rhs, d_lp_rhs, r5,
        )
        alpha = min(1.0, step_fraction * step_limit(dx, dw, ds, dv, dtau, dkappa))
        if not np.isfinite(alpha) or alpha <= 0.0:
            raise SolverFailure("interior-point step collapsed")
        last_alpha = alpha

        x = 0.5 * ((x + alpha * dx) + (x + alpha * dx).T)
        s = 0.5 * ((s + alpha * ds) + (s + alpha * ds).T)
        if m_lp:
            w = w + alpha * dw
            v = v + alpha * dv
        y = y + alpha * dy
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa
    else:
        iterations = max_iterations

    if status != "infeasible":
        x, w, y, s, v, tau, kappa = best_state
        if best_score <= 1.0:
            status = "optimal"
        z = 0.5 * (x + x.T) / tau
        primal_int = emb.inner_c(x, w) / tau
        dual_int = float(emb.b @ y) / tau
        sign = -1.0 if problem.sense == "maximize" else 1.0
        primal_value = sign * primal_int
        dual_value = sign * dual_int
        gap = abs(primal_value - dual_value) / (1.0 + abs(primal_value))
        report = check_solution(
            problem,
            SdpSolution(
                z=z,
                primal_value=primal_value,
                dual_value=dual_value,
                gap=gap,
                status=status,
                iterations=iterations,
                kkt_residuals=(0.0, 0.0, 0.0),
            ),
        )
        primal_res = max(
            report.equality_residual,
            report.inequality_residual,
            report.eigenvalue_residual,
        )
        adj_mat, adj_lp = emb.adjoint(y)
        dual_res = (
            max(
                float(np.abs(emb.c_sdp * tau - adj_mat - s).max()),
                float(np.abs(-adj_lp - v).max()) if m_lp else 0.0,
            )
            / tau
        )
        compl = (float(np.tensordot(x, s)) + float(w @ v)) / (tau * tau)
        solution = SdpSolution(
            z=z,
            primal_value=primal_value,
            dual_value=dual_value,
            gap=gap,
            status=status,
            iterations=iterations,
            kkt_residuals=(primal_res, dual_res, compl),
            certificate=None,
            trace=tuple(trace),
        )
    else:
        solution = SdpSolution(
            z=np.zeros((n, n)),
            primal_value=np.nan,
            dual_value=np.nan,
            gap=np.inf,
            status="infeasible",
            iterations=iterations,
            kkt_residuals=(np.inf, np.inf, np.inf),
            certificate=certificate,
            trace=tuple(trace),
        )
    _notify_recorders(problem, solution)
    return solution


# ---------------------------------------------------------------------------
# Instrumentation (used by the acceptance suite to audit every solve)
# ---------------------------------------------------------------------------

_RECORDERS: list[list[tuple[SdpProblem, SdpSolution]]] = []


class recording:
    """Context manager collecting every (problem, solution) pair solved inside."""

    def __init__(self) -> None:
        self.records: list[tuple[SdpProblem, SdpSolution]] = []

    def __enter__(self) -> list[tuple[SdpProblem, SdpSolution]]:
        _RECORDERS.append(self.records)
        return self.records

    def __exit__(self, *exc) -> None:
        _RECORDERS.remove(self.records)


def _notify_recorders(problem: SdpProblem, solution: SdpSolution) -> None:
    for records in _RECORDERS:
        records.append((problem, solution))
