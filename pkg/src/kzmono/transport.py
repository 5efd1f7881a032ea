"""Parallel transport of the KZ connection along configuration-space paths.

Flat sections obey Y' = -A(t) Y with A(t) the form evaluated on the path
tangent; transport integrates the matrix ODE with the identity as initial
frame. Two integrators are available: an adaptive embedded Runge-Kutta
(DOP853) on the real-stacked system, and a fourth-order Magnus stepper
(two-point Gauss quadrature with a single commutator, one matrix exponential
per step) whose step count doubles until self-consistent. Both report a
step-doubling style error estimate obtained from a refined solve.

Block monodromy uses the dual transport (dual=True, sections of the dual
bundle, Y' = +A(t) Y). The block subspace is the subspace model, through the
contravariant form, of the invariant functionals annihilating the image of
the raising-operator power; functionals are parallel for the dual of the
connection on sections, and since the two-slot Casimirs are self-adjoint for
the contravariant form, that dual transport in the subspace model is exactly
the sign-flipped ODE. Transporting the block frame this way reproduces the
fusion-dimension subspace at the endpoint to integrator accuracy, which is
the subbundle-preservation check; the plain section transport moves the
complement instead and matches the global-rotation scalar oracle.

Braid generators are realised as half-twists: the two exchanged points move
on a circle about their midpoint (counterclockwise for the positive
generator), everything else stays put. When the exchanged slots carry equal
weights the transport is composed with the inverse slot transposition, which
turns the path transports into endomorphisms of one fibre that compose like
braid-group elements; braid matrices are then expressed in the block basis.
For unequal weights the generator still makes sense as a map into the block
space at the permuted points and is returned in that endpoint basis.

The pairwise separation of the moving points is monitored at every
right-hand-side evaluation; coming too close to a diagonal aborts with the
offending parameter value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .blocks import block_subspace
from .errors import PathSingularError, TransportError, ValidationError
from .exact import invert_rows

DEFAULT_TOL = 1e-10
DEFAULT_BLOCK_TOL = 1e-8
_MAGNUS_MAX_STEPS = 1 << 16
_GAUSS_OFFSET = math.sqrt(3) / 6


@dataclass(frozen=True)
class Segment:
    """One smooth piece of a path: z(t) and dz/dt(t) for t in [0, 1]."""

    z: object
    dz: object


@dataclass(frozen=True)
class Path:
    n: int
    segments: tuple
    kind: str = "custom"

    def start(self):
        return self.segments[0].z(0.0)

    def end(self):
        return self.segments[-1].z(1.0)


def constant_path(points):
    pts = tuple(complex(p) for p in points)
    zero = tuple(0j for _ in pts)
    return Path(len(pts), (Segment(lambda t: pts, lambda t: zero),),
                kind="constant")


def rotation_path(points, turns=1):
    pts = tuple(complex(p) for p in points)
    w = 2j * math.pi * turns

    def z(t):
        ph = np.exp(w * t)
        return tuple(ph * p for p in pts)

    def dz(t):
        ph = w * np.exp(w * t)
        return tuple(ph * p for p in pts)

    return Path(len(pts), (Segment(z, dz),), kind="rotation")


def braid_path(points, i, clockwise=False, wobble=0.0):
    """Half-twist exchanging points i and i+1 (1-based), others fixed.

    wobble != 0 bulges the circle radius by (1 + wobble sin(pi t)), giving a
    homotopic but differently shaped representative.
    """
    pts = tuple(complex(p) for p in points)
    n = len(pts)
    if not 1 <= i <= n - 1:
        raise ValidationError(f"braid generator {i} out of range for n={n}")
    a, b = i - 1, i
    mid = (pts[a] + pts[b]) / 2
    rad = (pts[b] - pts[a]) / 2
    sgn = -1.0 if clockwise else 1.0

    def arm(t):
        return rad * (1 + wobble * math.sin(math.pi * t)) * \
            np.exp(1j * sgn * math.pi * t)

    def darm(t):
        rho = 1 + wobble * math.sin(math.pi * t)
        drho = wobble * math.pi * math.cos(math.pi * t)
        return rad * (drho + rho * 1j * sgn * math.pi) * \
            np.exp(1j * sgn * math.pi * t)

    def z(t):
        out = list(pts)
        out[a] = mid - arm(t)
        out[b] = mid + arm(t)
        return tuple(out)

    def dz(t):
        out = [0j] * n
        out[a] = -darm(t)
        out[b] = darm(t)
        return tuple(out)

    return Path(n, (Segment(z, dz),), kind=f"braid_generator({i})")


def concat_paths(first, second, tol=1e-9):
    if first.n != second.n:
        raise ValidationError("paths have different point counts")
    gap = max(abs(x - y) for x, y in zip(first.end(), second.start()))
    if gap > tol:
        raise ValidationError(f"paths do not concatenate: endpoint gap {gap}")
    return Path(first.n, first.segments + second.segments, kind="custom")


def reverse_path(path):
    segs = []
    for seg in reversed(path.segments):
        z, dz = seg.z, seg.dz
        segs.append(Segment(lambda t, z=z: z(1.0 - t),
                            lambda t, dz=dz: tuple(-v for v in dz(1.0 - t))))
    return Path(path.n, tuple(segs), kind="custom")


def reparametrize(path, fn, dfn):
    """Same geometric path traversed with parameter t -> fn(t)."""
    segs = []
    for seg in path.segments:
        z, dz = seg.z, seg.dz
        segs.append(Segment(
            lambda t, z=z: z(fn(t)),
            lambda t, dz=dz: tuple(dfn(t) * v for v in dz(fn(t)))))
    return Path(path.n, tuple(segs), kind=path.kind)


@dataclass
class MonodromyResult:
    """Transport matrix with its error estimate and block residual."""

    matrix: np.ndarray
    est_error: float
    block_residual: float | None = None


def _min_separation(z):
    best = math.inf
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            d = abs(z[i] - z[j])
            if d < best:
                best = d
    return best


class _FormOnPath:
    """A(t) for one segment, with diagonal-proximity monitoring."""

    def __init__(self, form, segment, floor):
        self.form = form
        self.segment = segment
        self.floor = floor

    def __call__(self, t):
        z = self.segment.z(t)
        if _min_separation(z) < self.floor:
            raise PathSingularError(
                f"points within {self.floor} of a diagonal at t={t}", t=t)
        return self.form.evaluate(z, self.segment.dz(t))


def _solve_segment_adaptive(afun, y0, tol, sign):
    d = y0.shape[0]

    def rhs(t, y):
        mat = y[:d * d].reshape(d, d) + 1j * y[d * d:].reshape(d, d)
        dy = sign * afun(t) @ mat
        return np.concatenate([dy.real.ravel(), dy.imag.ravel()])

    packed = np.concatenate([y0.real.ravel(), y0.imag.ravel()])
    sol = solve_ivp(rhs, (0.0, 1.0), packed, method="DOP853",
                    rtol=tol, atol=tol * 1e-2)
    if not sol.success:
        raise TransportError(f"integrator failed: {sol.message}")
    y = sol.y[:, -1]
    return y[:d * d].reshape(d, d) + 1j * y[d * d:].reshape(d, d)


def _solve_segment_magnus(afun, y0, steps, sign):
    y = y0
    h = 1.0 / steps
    for s in range(steps):
        t0 = s * h
        a1 = afun(t0 + h * (0.5 - _GAUSS_OFFSET))
        a2 = afun(t0 + h * (0.5 + _GAUSS_OFFSET))
        # fourth order for Y' = sign*A Y; the commutator term carries sign^2
        core = sign * (h / 2) * (a1 + a2) \
            - (math.sqrt(3) * h * h / 12) * (a1 @ a2 - a2 @ a1)
        y = expm(core) @ y
    return y


def _run_path(form, path, tol, method, min_separation, sign):
    if path.n != form.n:
        raise ValidationError(
            f"path has {path.n} points, form expects {form.n}")
    scale = max(_min_separation(path.start()), 1e-30)
    floor = min_separation * scale
    d = form.dim
    y = np.eye(d, dtype=complex)
    if method == "adaptive":
        for seg in path.segments:
            y = _solve_segment_adaptive(_FormOnPath(form, seg, floor), y,
                                        tol, sign)
        return y
    if method == "magnus":
        for seg in path.segments:
            afun = _FormOnPath(form, seg, floor)
            steps = 8
            prev = _solve_segment_magnus(afun, y, steps, sign)
            while True:
                steps *= 2
                if steps > _MAGNUS_MAX_STEPS:
                    raise TransportError(
                        "magnus stepper exceeded the step budget "
                        f"before reaching tol={tol}")
                cur = _solve_segment_magnus(afun, y, steps, sign)
                if np.linalg.norm(cur - prev) < tol:
                    y = cur
                    break
                prev = cur
        return y
    raise ValidationError(f"unknown transport method {method!r}")


def transport(form, path, tol=DEFAULT_TOL, method="adaptive",
              min_separation=1e-9, dual=False):
    """Parallel transport along a path; frame starts as the identity.

    dual=True transports dual-bundle frames (Y' = +A Y), the parallel
    structure of the block subspaces; the default transports sections
    (Y' = -A Y), the one the rotation-scalar oracle pins down. The error
    estimate compares against a solve at a hundredfold tighter tolerance
    (the returned matrix is the refined one).
    """
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    sign = 1.0 if dual else -1.0
    coarse = _run_path(form, path, tol, method, min_separation, sign)
    fine = _run_path(form, path, max(tol * 1e-2, 1e-13), method,
                     min_separation, sign)
    est = float(np.linalg.norm(fine - coarse))
    return MonodromyResult(matrix=fine, est_error=est)


def magnus_fixed_steps(form, path, steps, dual=False):
    """Fixed-step Magnus transport, exposed for convergence-order checks."""
    d = form.dim
    y = np.eye(d, dtype=complex)
    sign = 1.0 if dual else -1.0
    for seg in path.segments:
        y = _solve_segment_magnus(_FormOnPath(form, seg, 1e-30), y, steps,
                                  sign)
    return y


def projective_compare(a, b):
    """Unit scalar c minimising ||a - c b||_F and the attained residual."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValidationError("matrices must have the same shape")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValidationError("projective comparison of a zero matrix")
    t = np.vdot(b, a)
    c = t / abs(t) if abs(t) > 0 else 1.0 + 0j
    return c, float(np.linalg.norm(a - c * b))


def _in_block_basis(columns, transported):
    """Least-squares coordinates plus the relative off-subspace residual."""
    sol, _res, _rank, _sv = np.linalg.lstsq(columns, transported, rcond=None)
    off = transported - columns @ sol
    denom = max(np.linalg.norm(transported), 1e-300)
    return sol, float(np.linalg.norm(off) / denom)


def braid_generator(form, block, i, tol=DEFAULT_TOL,
                    block_tol=DEFAULT_BLOCK_TOL, clockwise=False,
                    method="adaptive"):
    """Monodromy of one braid generator on the block subspace (i is 1-based).

    The block frame is moved with the dual transport, under which the block
    subbundle is parallel (see the module docstring). Equal weights on the
    exchanged slots give an endomorphism of the block at the starting
    configuration, expressed in its basis (this is what braid words
    compose). Otherwise the matrix maps into the block basis at the
    permuted configuration. The block residual is the relative norm of the
    transported frame's component outside the target subspace and must stay
    below block_tol.
    """
    system = form.system
    n = system.n
    if not 1 <= i <= n - 1:
        raise ValidationError(f"braid generator {i} out of range for n={n}")
    if block.dim == 0:
        raise ValidationError("block subspace is zero dimensional")
    z0 = tuple(complex(p) for p in block.points)
    path = braid_path(z0, i, clockwise=clockwise)
    res = transport(form, path, tol=tol, method=method, dual=True)
    cols = block.coeffs_complex()

    equal = system.weights[i - 1] == system.weights[i]
    if equal:
        swap = system.swap_restricted(i - 1)
        swap_inv = np.array(
            [[float(v) for v in row] for row in invert_rows(swap)],
            dtype=complex)
        acting = swap_inv @ res.matrix
        target = cols
    else:
        acting = res.matrix
        pts = list(block.points)
        pts[i - 1], pts[i] = pts[i], pts[i - 1]
        endpoint = block_subspace(system, block.k, pts)
        target = endpoint.coeffs_complex()

    mat, residual = _in_block_basis(target, acting @ cols)
    if residual > block_tol:
        raise TransportError(
            f"braid generator {i}: block residual {residual:.3e} exceeds "
            f"{block_tol:.1e} (integrator or block construction failure)")
    return MonodromyResult(matrix=mat, est_error=res.est_error,
                           block_residual=residual)


def parse_braid_word(text):
    """Signed integers separated by whitespace, e.g. '1 -2 1'."""
    letters = []
    for tok in str(text).split():
        try:
            w = int(tok)
        except ValueError as exc:
            raise ValidationError(f"bad braid letter {tok!r}") from exc
        if w == 0:
            raise ValidationError("braid letters are nonzero integers")
        letters.append(w)
    return letters


def braid_word_transport(form, block, word, tol=DEFAULT_TOL,
                         block_tol=DEFAULT_BLOCK_TOL, method="adaptive"):
    """Monodromy of a braid word on the block, letters acting left first.

    Requires all tensor weights equal so every generator is an endomorphism
    of the same fibre. Letter matrices are cached and reused.
    """
    letters = word if isinstance(word, list) else parse_braid_word(word)
    system = form.system
    n = system.n
    if len(set(system.weights)) > 1:
        raise ValidationError(
            "braid words need all marked points to carry the same weight")
    for w in letters:
        if not 1 <= abs(w) <= n - 1:
            raise ValidationError(
                f"braid letter {w} out of range for n={n}")
    cache = {}
    total = np.eye(block.dim, dtype=complex)
    worst_res = 0.0
    err = 0.0
    for w in letters:
        if w not in cache:
            cache[w] = braid_generator(form, block, abs(w), tol=tol,
                                       block_tol=block_tol,
                                       clockwise=(w < 0), method=method)
        res = cache[w]
        total = res.matrix @ total
        worst_res = max(worst_res, res.block_residual)
        err += res.est_error
    return MonodromyResult(matrix=total, est_error=err,
                           block_residual=worst_res)


def monodromy_to_json(result, manifest=None):
    import json
    doc = {
        "matrix_re": result.matrix.real.tolist(),
        "matrix_im": result.matrix.imag.tolist(),
        "est_error": result.est_error,
        "block_residual": result.block_residual,
    }
    if manifest is not None:
        doc["manifest"] = manifest
    return json.dumps(doc, sort_keys=True)
