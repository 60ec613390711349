"""Assembly of pseudo-holomorphic Hamiltonian data from (J, Omega_R, H_R).

Sign conventions, fixed once for the whole package:

* Hamiltonian vector field:  w(X, .) = -dH, which with the matrix convention
  ``W[a, b] = w(e_a, e_b)`` is the linear solve ``W X = grad H``.
* Induced form:  Omega_I = -Omega_R(J., .),  i.e.  W_I = -J^T W_R.
* The imaginary Hamiltonian H_I is the primitive of  Omega_R(J X, .)  anchored
  at the model base point, H_I(base) = 0.
* Poisson bracket {F, G} = Omega_R(X_F, X_G); under these conventions the
  Darboux pair gives {q, p} = -1.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import integrate

from .errors import NonClosedFormError, SingularFormError
from .fields import CovectorField, ScalarField, TwoFormField, VectorField
from .tensors import (
    acs_residual,
    anticompat_residual,
    exterior_derivative_2form,
    interior_product_3form,
    lie_bracket,
    lie_derivative_matrix,
    nijenhuis,
)
from .util import as_point, max_abs, seeded_points, thread_count


@dataclass
class PhhsModel:
    """One Hamiltonian system under study on a coordinate patch.

    Optional hooks carry closed forms where a model knows them (exact
    Hamiltonian fields, exact solutions); every hook has a generic numerical
    route next to it so the two can be cross-checked.
    """

    m: int
    J: object
    omega_R: object
    H_R: object
    lambda_R: object = None
    base_point: np.ndarray = None
    closed_form: object = None
    name: str = "model"
    X_hook: object = None
    H_I_hook: object = None
    extras: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.base_point is None:
            self.base_point = np.zeros(2 * self.m)
        self.base_point = np.asarray(self.base_point, dtype=float)

    @property
    def dim(self):
        return 2 * self.m


@dataclass
class PhsmData:
    """A pseudo-holomorphic symplectic patch without a Hamiltonian."""

    m: int
    J: object
    omega_R: object
    name: str = "phsm"


@dataclass
class HamiltonianFields:
    """Assembled dynamical data of a model plus its diagnostic record."""

    model: PhhsModel
    X: VectorField
    JX: VectorField
    H_I: ScalarField
    omega_I: TwoFormField
    alpha: CovectorField
    diagnostics: dict

    def H_complex(self, p):
        return complex(self.model.H_R(p), self.H_I(p))


def omega_I_from(omega_R, J):
    """Induced 2-form Omega_I = -Omega_R(J., .), pointwise -J^T W_R."""

    def fn(p):
        return -np.asarray(J(p), dtype=float).T @ np.asarray(omega_R(p), dtype=float)

    return TwoFormField(fn, fd=J.fd, name="omega_I")


def hamiltonian_vector_field(omega, H, name="X"):
    """Vector field solving w(X, .) = -dH pointwise."""

    def fn(p):
        W = np.asarray(omega(p), dtype=float)
        g = H.gradient(p)
        try:
            x = np.linalg.solve(W, g)
        except np.linalg.LinAlgError as exc:
            raise SingularFormError(f"2-form singular at {p}: {exc}") from exc
        if not np.all(np.isfinite(x)):
            raise SingularFormError(f"2-form solve produced non-finite values at {p}")
        return x

    return VectorField(fn, fd=H.fd, name=name)


def pairing_covector(omega, V, name="alpha"):
    """1-form w(V, .) as a coefficient field (W^T V pointwise)."""

    def fn(p):
        return np.asarray(omega(p), dtype=float).T @ np.asarray(V(p), dtype=float)

    return CovectorField(fn, fd=V.fd, name=name)


def closedness_residual(alpha, p, diameter=0.2, n_triangles=8, seed=7, n_gauss=24):
    """Worst loop integral of alpha over random small triangles through p.

    Returns the residual scaled by triangle area; for a closed form it is the
    quadrature noise floor, for a non-closed form the size of d(alpha).
    """
    p = as_point(p)
    rng = np.random.default_rng(seed)
    nodes, weights = np.polynomial.legendre.leggauss(n_gauss)
    worst = 0.0
    for _ in range(n_triangles):
        verts = [p] + [p + 0.5 * diameter * (2.0 * rng.random(p.size) - 1.0) for _ in range(2)]
        u = verts[1] - verts[0]
        v = verts[2] - verts[0]
        area = 0.5 * np.sqrt(max(np.dot(u, u) * np.dot(v, v) - np.dot(u, v) ** 2, 0.0))
        if area < 1e-12:
            continue
        loop = 0.0
        for a, b in ((0, 1), (1, 2), (2, 0)):
            seg = verts[b] - verts[a]
            mid = 0.5 * (verts[a] + verts[b])
            half = 0.5 * seg
            vals = [np.dot(np.asarray(alpha(mid + t * half), dtype=float), seg) for t in nodes]
            loop += 0.5 * float(np.dot(weights, vals))
        worst = max(worst, abs(loop) / area)
    return worst


def primitive_scalar(alpha, base, p, check_closed=True, closed_tol=1e-4, quad_tol=1e-11):
    """Line integral of alpha along the straight segment base -> p.

    Defines a primitive anchored at the base point (value 0 there).  With
    ``check_closed`` the loop diagnostic runs first and a NonClosedFormError
    signals that alpha has no primitive, i.e. the originating (J, Omega_R,
    H_R) triple is not a pseudo-holomorphic Hamiltonian system.
    """
    base = as_point(base)
    p = as_point(p)
    if check_closed:
        res = closedness_residual(alpha, p)
        if res > closed_tol:
            raise NonClosedFormError(
                f"loop residual {res:.3e} exceeds {closed_tol:.1e}; the 1-form is not closed"
            )
    seg = p - base

    def integrand(t):
        return float(np.dot(np.asarray(alpha(base + t * seg), dtype=float), seg))

    val, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=quad_tol, epsrel=quad_tol, limit=200)
    return val


def poisson_bracket(F, G, omega, p):
    """Omega(X_F, X_G) at p, both fields from the pointwise solve."""
    p = as_point(p)
    W = np.asarray(omega(p), dtype=float)
    try:
        xf = np.linalg.solve(W, F.gradient(p))
        xg = np.linalg.solve(W, G.gradient(p))
    except np.linalg.LinAlgError as exc:
        raise SingularFormError(f"2-form singular at {p}: {exc}") from exc
    return float(xf @ W @ xg)


def _default_samples(model, count=10, scale=0.35, seed=11):
    return seeded_points(seed, count, model.dim, scale=scale, center=model.base_point)


def assemble_phhs(
    model,
    samples=None,
    tol_exact=1e-6,
    tol_derived=1e-3,
    check_closedness=True,
    use_hooks=True,
):
    """Produce X, JX, Omega_I, H_I and run the full diagnostic suite.

    Validation failures of the structure tensors (J not an almost complex
    structure, or not anticompatible with Omega_R) abort the assembly; the
    remaining diagnostics are recorded in the report without being fatal.
    """
    if samples is None:
        samples = _default_samples(model)

    acs = max(acs_residual(model.J, p) for p in samples)
    anti = max(anticompat_residual(model.omega_R, model.J, p) for p in samples)
    if acs > tol_exact:
        raise ValueError(f"J fails J^2 = -1 on samples (residual {acs:.3e}); assembly aborted")
    if anti > tol_exact:
        raise ValueError(
            f"J is not Omega_R-anticompatible on samples (residual {anti:.3e}); assembly aborted"
        )

    X = model.X_hook if (use_hooks and model.X_hook is not None) else hamiltonian_vector_field(
        model.omega_R, model.H_R
    )
    X_generic = hamiltonian_vector_field(model.omega_R, model.H_R)

    def jx_fn(p):
        return np.asarray(model.J(p), dtype=float) @ np.asarray(X(p), dtype=float)

    JX = VectorField(jx_fn, fd=X.fd, name="JX")
    omega_I = omega_I_from(model.omega_R, model.J)
    alpha = pairing_covector(model.omega_R, JX, name="omega_R(JX,.)")

    if check_closedness:
        worst = max(closedness_residual(alpha, p) for p in [model.base_point, samples[0]])
        if worst > 1e-4:
            raise NonClosedFormError(
                f"Omega_R(J X, .) is not closed (residual {worst:.3e}); "
                "the data do not form a pseudo-holomorphic Hamiltonian system"
            )

    if use_hooks and model.H_I_hook is not None:
        H_I = ScalarField(model.H_I_hook, fd=model.H_R.fd, grad=lambda p: np.asarray(alpha(p)), name="H_I")
    else:
        base = model.base_point

        def h_i_fn(p):
            return primitive_scalar(alpha, base, p, check_closed=False)

        H_I = ScalarField(h_i_fn, fd=model.H_R.fd, grad=lambda p: np.asarray(alpha(p)), name="H_I")

    diagnostics = {
        "acs": acs,
        "anticompat": anti,
        "hook_vs_solve": max(max_abs(np.asarray(X(p)) - np.asarray(X_generic(p))) for p in samples),
        "commutator": max(max_abs(lie_bracket(X, JX, p)) for p in samples),
        "omega_R_closed": max(max_abs(exterior_derivative_2form(model.omega_R, p)) for p in samples),
        "omega_I_antisym": max(omega_I.antisymmetry_residual(p) for p in samples),
    }

    ph = 0.0
    cr_i = 0.0
    cr_r = 0.0
    pb = 0.0
    X_omega_I_H_I = hamiltonian_vector_field(omega_I, H_I)
    X_omega_I_H_R = hamiltonian_vector_field(omega_I, model.H_R)
    for p in samples:
        Jm = np.asarray(model.J(p), dtype=float)
        g_r = model.H_R.gradient(p)
        g_i = H_I.gradient(p)
        dh = g_r + 1j * g_i
        ph = max(ph, max_abs(Jm.T @ dh - 1j * dh))
        cr_i = max(cr_i, max_abs(np.asarray(X_omega_I_H_I(p)) - np.asarray(X(p))))
        cr_r = max(cr_r, max_abs(np.asarray(X_omega_I_H_R(p)) - np.asarray(JX(p))))
        pb = max(pb, abs(poisson_bracket(model.H_R, H_I, model.omega_R, p)))
    diagnostics.update(
        {
            "pseudo_holomorphy": ph,
            "cr_X_omega_I_H_I": cr_i,
            "cr_X_omega_I_H_R": cr_r,
            "poisson_H_R_H_I": pb,
        }
    )
    if model.lambda_R is not None:
        diagnostics["lambda_primitive"] = max(
            max_abs(
                _covector_exterior_derivative(model.lambda_R, p)
                - np.asarray(model.omega_R(p), dtype=float)
            )
            for p in samples
        )
    diagnostics["tolerances"] = {"exact": tol_exact, "derived": tol_derived}

    return HamiltonianFields(
        model=model, X=X, JX=JX, H_I=H_I, omega_I=omega_I, alpha=alpha, diagnostics=diagnostics
    )


def _covector_exterior_derivative(lam, p):
    """(d lam)_{ab} = d_a lam_b - d_b lam_a via the field's stencil."""
    from .fields import partial_jet

    p = as_point(p)
    n = p.size
    D = np.stack([partial_jet(lam, p, a) for a in range(n)])
    return D - D.T


@dataclass
class IntegrabilityReport:
    points: np.ndarray
    nijenhuis_norms: np.ndarray
    d_omega_I_norms: np.ndarray
    threshold: float

    @property
    def max_nijenhuis(self):
        return float(np.max(self.nijenhuis_norms))

    @property
    def max_d_omega_I(self):
        return float(np.max(self.d_omega_I_norms))

    @property
    def classification(self):
        ok = self.max_nijenhuis <= self.threshold and self.max_d_omega_I <= self.threshold
        return "integrable" if ok else "proper"


def integrability_report(model, grid, threshold=1e-3):
    """Per-point (|N_J|, |d Omega_I|) over a grid plus the dichotomy verdict.

    Integrability of J and closedness of the induced Omega_I vanish together;
    the report exposes both sides so the equivalence is observable.
    """
    omega_I = omega_I_from(model.omega_R, model.J)
    pts = np.asarray(grid, dtype=float)

    def one(p):
        return max_abs(nijenhuis(model.J, p)), max_abs(exterior_derivative_2form(omega_I, p))

    workers = thread_count()
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(one, pts))
    else:
        results = [one(p) for p in pts]
    n_norms = np.array([r[0] for r in results])
    d_norms = np.array([r[1] for r in results])
    return IntegrabilityReport(pts, n_norms, d_norms, threshold)


@dataclass
class JPreservingReport:
    points: np.ndarray
    lie_norms: np.ndarray
    contraction_norms: np.ndarray

    @property
    def max_lie(self):
        return float(np.max(self.lie_norms))

    @property
    def max_contraction(self):
        return float(np.max(self.contraction_norms))


def j_preserving_check(V, model, grid):
    """Pairs (|L_V J|, |iota_V d Omega_I|) over a grid; the two vanish together."""
    omega_I = omega_I_from(model.omega_R, model.J)
    pts = np.asarray(grid, dtype=float)
    lie, con = [], []
    for p in pts:
        lie.append(max_abs(lie_derivative_matrix(V, model.J, p)))
        T = exterior_derivative_2form(omega_I, p)
        con.append(max_abs(interior_product_3form(T, np.asarray(V(p), dtype=float))))
    return JPreservingReport(pts, np.array(lie), np.array(con))
