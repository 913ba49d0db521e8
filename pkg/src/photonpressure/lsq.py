"""Damped Gauss-Newton least-squares engine.

A small, dependency-free Levenberg-Marquardt-style minimizer used by every
fit in the package.  Complex residual vectors are stacked as (real, imag)
pairs, the Jacobian is built from forward finite differences with step
max(1e-8*|p|, 1e-12), and a step is only ever accepted if it does not
increase the cost.  Convergence is declared when the relative parameter step
drops below ``step_tol`` (default 1e-9) or the relative cost decrease below
``cost_tol`` (default 1e-12).  Running out of iterations returns a
non-converged result with diagnostics instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["FitResult", "least_squares"]

_MAX_DAMPING = 1e14


@dataclass
class FitResult:
    """Outcome of a least-squares fit.

    ``params`` follows the order of the initial guess; ``names`` (when set by
    the model-level wrappers) allows lookup through :meth:`value` and
    :meth:`uncertainty`.  ``extras`` carries model-specific products such as
    derived parameters or a background-corrected trace.
    """

    params: np.ndarray
    uncertainties: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    message: str
    cost_history: list = field(default_factory=list)
    names: tuple = ()
    background: object = None
    extras: dict = field(default_factory=dict)

    def _index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no parameter named {name!r}; have {self.names}") from None

    def value(self, name: str) -> float:
        return float(self.params[self._index(name)])

    def uncertainty(self, name: str) -> float:
        return float(self.uncertainties[self._index(name)])

    def as_dict(self) -> dict:
        out = {n: float(v) for n, v in zip(self.names, self.params)}
        out.update({f"{n}_err": float(u) for n, u in zip(self.names, self.uncertainties)})
        out["residual_norm"] = self.residual_norm
        out["iterations"] = self.iterations
        out["converged"] = self.converged
        for key, value in self.extras.items():
            if isinstance(value, (int, float)):
                out[key] = float(value)
        return out


def _stack(values) -> np.ndarray:
    values = np.atleast_1d(np.asarray(values))
    if np.iscomplexobj(values):
        return np.concatenate([values.real, values.imag]).astype(float)
    return values.astype(float)


def least_squares(residual, x0, *, names=(), max_iterations=200,
                  step_tol=1e-9, cost_tol=1e-12, step_floor=1e-12) -> FitResult:
    """Minimize sum(|residual(p)|^2) starting from ``x0``.

    ``residual`` maps a parameter vector to a real or complex residual
    array.  Returns a :class:`FitResult`; never raises on non-convergence.
    ``step_floor`` is the absolute lower bound of the finite-difference step;
    callers fitting parameters normalized to order 1 should raise it to
    ~1e-8 so the Jacobian stays above the rounding noise near zero crossings.
    """
    p = np.asarray(x0, dtype=float).copy()
    n = p.size

    def cost_of(q):
        r = _stack(residual(q))
        return r, float(r @ r)

    r, cost = cost_of(p)
    m = r.size
    history = [cost]
    lam = 0.0
    converged = False
    message = "maximum iterations reached"
    iterations = 0
    jtj = np.zeros((n, n))

    for iterations in range(1, max_iterations + 1):
        # forward-difference Jacobian of the stacked residual
        jac = np.empty((m, n))
        for j in range(n):
            h = max(1e-8 * abs(p[j]), step_floor)
            q = p.copy()
            q[j] += h
            jac[:, j] = (_stack(residual(q)) - r) / h
        grad = jac.T @ r
        jtj = jac.T @ jac
        diag = np.diag(jtj).copy()
        diag[diag <= 0] = 1.0

        accepted = False
        while lam <= _MAX_DAMPING:
            try:
                step = np.linalg.solve(jtj + lam * np.diag(diag), -grad)
            except np.linalg.LinAlgError:
                step = None
            if step is not None and np.all(np.isfinite(step)):
                p_try = p + step
                r_try, cost_try = cost_of(p_try)
                if np.isfinite(cost_try) and cost_try <= cost:
                    accepted = True
                    break
            lam = 1e-4 if lam == 0.0 else lam * 10.0

        if not accepted:
            message = "damping exhausted without an acceptable step"
            break

        prev_cost = cost
        p, r, cost = p_try, r_try, cost_try
        history.append(cost)
        lam = 0.0 if lam < 1e-12 else lam / 10.0

        rel_step = np.linalg.norm(step) / (np.linalg.norm(p) + step_tol)
        rel_decrease = (prev_cost - cost) / max(prev_cost, 1e-300)
        if rel_step < step_tol:
            converged, message = True, "parameter step below tolerance"
            break
        if rel_decrease < cost_tol:
            converged, message = True, "cost decrease below tolerance"
            break

    # standard uncertainties from the normal matrix at the solution,
    # scaled by the residual variance (approximate, as usual)
    uncertainties = np.full(n, np.nan)
    if m > n:
        s2 = cost / (m - n)
        try:
            cov = s2 * np.linalg.inv(jtj)
            uncertainties = np.sqrt(np.maximum(np.diag(cov), 0.0))
        except np.linalg.LinAlgError:
            pass

    return FitResult(
        params=p,
        uncertainties=uncertainties,
        residual_norm=float(np.sqrt(cost)),
        iterations=iterations,
        converged=converged,
        message=message,
        cost_history=history,
        names=tuple(names),
    )
