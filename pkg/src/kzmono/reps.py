"""Exact irreducible highest-weight modules and their tensor products.

A module is generated from a highest-weight vector by the lowering operators,
weight space by weight space; at each new weight the Gram matrix of the
contravariant form on the candidate vectors picks a basis and expresses every
dependent candidate through it, which quotients out the radical and lands
exactly on the irreducible module. Dimensions are cross-checked against the
Weyl dimension formula as a hard assertion.

Matrix conventions (weights are Dynkin labels):
    [h_i, e_j] = cartan[j][i] e_j,   [e_i, f_j] = delta_ij h_i,
and h_i acts on a weight-mu vector as mu[i]. Basis vectors are ordered by the
height of lam - mu, then lexicographically by mu, then by construction order
inside a weight space, so exports are reproducible.

Root vectors for non-simple roots come from a fixed iterated-bracket scheme
(always bracketing with the lowest simple index that stays in the root
system), so "e_alpha" names the same abstract element in every module; the
pairings <e_alpha, f_alpha> needed for dual bases are extracted once per
algebra from [e_alpha, f_alpha] acting in a small faithful module.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from fractions import Fraction
from functools import lru_cache

from . import algebra as la
from .errors import (ConstructionError, DimensionCapError,
                     NonDominantWeightError)
from .exact import (SRMatrix, bareiss_echelon, commutator, nullspace_rows,
                    pivot_rows, restrict_operator, solve_rows)

DEFAULT_DIMENSION_CAP = 200_000

_F0 = Fraction(0)
_F1 = Fraction(1)


class Representation:
    """Irreducible module with exact sparse generator matrices.

    e, f, h are tuples of SRMatrix indexed by simple root; basis_weights
    lists the weight of every basis vector; gram is the contravariant form
    on the basis (block diagonal over weight spaces, e and f mutually
    adjoint for it). Immutable after construction.
    """

    def __init__(self, alg, highest_weight, basis_weights, e, f, gram):
        self.alg = alg
        self.highest_weight = highest_weight
        self.basis_weights = tuple(basis_weights)
        self.dim = len(self.basis_weights)
        self.e = tuple(e)
        self.f = tuple(f)
        self.gram = gram
        self.h = tuple(
            SRMatrix(self.dim, self.dim,
                     {(v, v): Fraction(w[i])
                      for v, w in enumerate(self.basis_weights) if w[i]})
            for i in range(alg.rank))
        self._root_vectors = None

    @property
    def basis_hash(self):
        text = repr((self.alg.series, self.alg.rank, self.highest_weight,
                     self.basis_weights))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def __repr__(self):
        return (f"Representation({self.alg.name}, "
                f"{self.highest_weight}, dim={self.dim})")


def _block_matvec(columns, vec):
    """Apply a list-of-columns block matrix to a coefficient vector."""
    if not columns:
        return []
    out = [_F0] * len(columns[0])
    for c, x in zip(columns, vec):
        if x:
            for r, v in enumerate(c):
                if v:
                    out[r] += x * v
    return out


def _construct_blocks(alg, lam):
    """Weight-by-weight lowering construction; see module docstring."""
    rank = alg.rank
    alpha = [alg.cartan[i] for i in range(rank)]   # Dynkin labels of a_i

    blocks = {lam: 1}
    depth_of = {lam: 0}
    gram = {lam: [[_F1]]}
    e_blk = {}    # (i, w) -> columns of e_i : block(w) -> block(w + a_i)
    f_blk = {}    # (i, w) -> columns of f_i : block(w) -> block(w - a_i)

    layer = [lam]
    depth = 0
    while layer:
        depth += 1
        candidates = {}
        for w in layer:
            for i in range(rank):
                mu = tuple(w[j] - alpha[i][j] for j in range(rank))
                candidates.setdefault(mu, []).append(i)
        next_layer = []
        for mu in sorted(candidates):
            parents = sorted(candidates[mu])
            span = [(i, tuple(mu[j] + alpha[i][j] for j in range(rank)), t)
                    for i in parents
                    for t in range(blocks[tuple(mu[j] + alpha[i][j]
                                                for j in range(rank))])]
            m = len(span)
            s_mat = [[_F0] * m for _ in range(m)]
            for b, (j, y, ty) in enumerate(span):
                # e_i f_j b_y = f_j e_i b_y + delta_ij (y_i) b_y per column
                for a, (i, x, tx) in enumerate(span):
                    val = _F0
                    up = tuple(y[q] + alpha[i][q] for q in range(rank))
                    ecols = e_blk.get((i, y))
                    fcols = f_blk.get((j, up))
                    if ecols is not None and fcols is not None:
                        fz = _block_matvec(fcols, ecols[ty])
                        gx = gram[x]
                        val = sum((gx[tx][r] * fz[r]
                                   for r in range(len(fz)) if fz[r]),
                                  start=_F0)
                    if i == j:
                        val += Fraction(y[i]) * gram[x][tx][ty]
                    s_mat[a][b] = val
            work = [list(row) for row in s_mat]
            piv = bareiss_echelon(work, m)
            keep = [c for (_r, c) in piv]
            size = len(keep)
            if size == 0:
                continue
            s_kk = [[s_mat[a][b] for b in keep] for a in keep]
            rhs = [[s_mat[a][b] for b in range(m)] for a in keep]
            coeff = solve_rows(s_kk, rhs)   # size x m, unit columns on keep

            blocks[mu] = size
            depth_of[mu] = depth
            gram[mu] = s_kk
            next_layer.append(mu)

            # lowering matrices into the new block
            pos = {s: idx for idx, s in enumerate(span)}
            for i in parents:
                x = tuple(mu[j2] + alpha[i][j2] for j2 in range(rank))
                cols = [[coeff[r][pos[(i, x, t)]] for r in range(size)]
                        for t in range(blocks[x])]
                f_blk[(i, x)] = cols

            # raising matrices out of the new block
            for i in range(rank):
                target = tuple(mu[j2] + alpha[i][j2] for j2 in range(rank))
                if target not in blocks:
                    continue
                tsize = blocks[target]
                cols = []
                for (j, y, ty) in (span[b] for b in keep):
                    col = [_F0] * tsize
                    up = tuple(y[q] + alpha[i][q] for q in range(rank))
                    ecols = e_blk.get((i, y))
                    fcols = f_blk.get((j, up))
                    if ecols is not None and fcols is not None:
                        fz = _block_matvec(fcols, ecols[ty])
                        for r, v in enumerate(fz):
                            col[r] += v
                    if i == j:
                        col[ty] += Fraction(y[i])
                    cols.append(col)
                e_blk[(i, mu)] = cols
        layer = next_layer

    return blocks, depth_of, e_blk, f_blk, gram


@lru_cache(maxsize=None)
def irrep(alg, lam):
    """The irreducible module of a dominant highest weight, exactly."""
    lam = la.require_dominant(alg, lam)
    rank = alg.rank
    blocks, depth_of, e_blk, f_blk, gram = _construct_blocks(alg, lam)

    order = sorted(blocks, key=lambda w: (depth_of[w], w))
    offset = {}
    basis_weights = []
    for w in order:
        offset[w] = len(basis_weights)
        basis_weights.extend([w] * blocks[w])

    dim = len(basis_weights)
    expected = la.weyl_dimension(alg, lam)
    if dim != expected:
        raise ConstructionError(
            f"{alg.name} weight {lam}: constructed dimension {dim} != "
            f"Weyl dimension {expected}")

    alpha = [alg.cartan[i] for i in range(rank)]
    gen_e = []
    gen_f = []
    for i in range(rank):
        em = SRMatrix(dim, dim)
        fm = SRMatrix(dim, dim)
        for w in order:
            up = tuple(w[j] + alpha[i][j] for j in range(rank))
            cols = e_blk.get((i, w))
            if cols is not None and up in offset:
                for t, col in enumerate(cols):
                    for r, v in enumerate(col):
                        if v:
                            em.data[(offset[up] + r, offset[w] + t)] = v
            down = tuple(w[j] - alpha[i][j] for j in range(rank))
            cols = f_blk.get((i, w))
            if cols is not None and down in offset:
                for t, col in enumerate(cols):
                    for r, v in enumerate(col):
                        if v:
                            fm.data[(offset[down] + r, offset[w] + t)] = v
        gen_e.append(em)
        gen_f.append(fm)

    gram_total = SRMatrix(dim, dim)
    for w in order:
        rows = gram[w]
        base = offset[w]
        for r in range(len(rows)):
            for c in range(len(rows)):
                if rows[r][c]:
                    gram_total.data[(base + r, base + c)] = rows[r][c]

    return Representation(alg, lam, basis_weights, gen_e, gen_f, gram_total)


@lru_cache(maxsize=None)
def _bracket_scheme(alg):
    """How each positive root is reached: 'simple i' or [x_i, x_beta]."""
    coords = alg.positive_root_coords
    index = {c: k for k, c in enumerate(coords)}
    plan = []
    for k, c in enumerate(coords):
        if sum(c) == 1:
            plan.append(("simple", c.index(1), None))
            continue
        for i in range(alg.rank):
            lower = list(c)
            lower[i] -= 1
            low = tuple(lower)
            if min(lower) >= 0 and low in index:
                plan.append(("bracket", i, index[low]))
                break
        else:
            raise ConstructionError(f"{alg.name}: root {c} has no "
                                    "simple-root predecessor")
    return tuple(plan)


def root_vectors(rep):
    """Matrices of e_alpha, f_alpha for every positive root, cached."""
    if rep._root_vectors is None:
        ems, fms = [], []
        for kind, i, low in _bracket_scheme(rep.alg):
            if kind == "simple":
                ems.append(rep.e[i])
                fms.append(rep.f[i])
            else:
                ems.append(commutator(rep.e[i], ems[low]))
                fms.append(commutator(rep.f[i], fms[low]))
        rep._root_vectors = (tuple(ems), tuple(fms))
    return rep._root_vectors


@lru_cache(maxsize=None)
def _reference_weight(alg):
    """Fundamental weight of smallest module dimension (lowest index wins)."""
    best = None
    for i in range(alg.rank):
        w = tuple(int(i == j) for j in range(alg.rank))
        d = la.weyl_dimension(alg, w)
        if best is None or d < best[0]:
            best = (d, w)
    return best[1]


@lru_cache(maxsize=None)
def casimir_constants(alg):
    """c_alpha = <e_alpha, f_alpha> for every positive root.

    [e_alpha, f_alpha] acts on a weight-mu vector as c_alpha <mu, alpha>;
    the constants are representation independent, so they are read off in a
    small faithful module and validated across its whole weight spectrum.
    For a simple root, c equals 1/d_i, which is asserted.
    """
    ref = irrep(alg, _reference_weight(alg))
    ems, fms = root_vectors(ref)
    out = []
    for k, label in enumerate(alg.positive_roots):
        m = commutator(ems[k], fms[k])
        for (r, c) in m.data:
            if r != c:
                raise ConstructionError(
                    f"{alg.name}: [e,f] for root {label} is not diagonal")
        c_val = None
        for v, w in enumerate(ref.basis_weights):
            pa = la.pairing(alg, w, label)
            if pa:
                val = m.get(v, v) / pa
                if c_val is None:
                    c_val = val
                elif c_val != val:
                    raise ConstructionError(
                        f"{alg.name}: inconsistent <e,f> for root {label}")
        if not c_val:
            raise ConstructionError(
                f"{alg.name}: could not extract <e,f> for root {label}")
        out.append(c_val)
    for i, (kind, idx, _low) in enumerate(_bracket_scheme(alg)):
        if kind == "simple":
            assert out[i] == 1 / alg.symmetrizers[idx]
    return tuple(out)


def casimir_matrix(rep):
    """Quadratic Casimir as an exact matrix; scalar <lam, lam+2rho> on irreps."""
    alg = rep.alg
    ems, fms = root_vectors(rep)
    cs = casimir_constants(alg)
    total = SRMatrix(rep.dim, rep.dim)
    for k in range(len(cs)):
        inv_c = 1 / cs[k]
        for m in (ems[k] @ fms[k], fms[k] @ ems[k]):
            for (r, c), v in m.data.items():
                total.add_at(r, c, inv_c * v)
    for v, w in enumerate(rep.basis_weights):
        total.add_at(v, v, la.pairing(alg, w, w))
    return total


casimir_scalar = la.casimir_scalar


class TensorSystem:
    """Tensor product of irreducibles with its exact invariant subspace.

    The invariant basis spans the joint kernel of the diagonal e_i and f_i
    actions (computed inside the zero-weight subspace, where it must live).
    Two-slot Casimir operators are assembled factor-wise as sparse matrices;
    no dense total-space matrix is ever formed in the exact layer.
    """

    def __init__(self, alg, weights, max_dim=DEFAULT_DIMENSION_CAP):
        weights = tuple(la.require_dominant(alg, w) for w in weights)
        if not weights:
            raise NonDominantWeightError("need at least one tensor factor")
        self.alg = alg
        self.weights = weights
        self.factors = tuple(irrep(alg, w) for w in weights)
        self.dims = tuple(rep.dim for rep in self.factors)
        total = 1
        for d in self.dims:
            total *= d
        if total > max_dim:
            raise DimensionCapError(
                f"tensor dimension {total} exceeds cap {max_dim}")
        self.total_dim = total
        self.n = len(weights)
        strides = [1] * self.n
        for s in range(self.n - 2, -1, -1):
            strides[s] = strides[s + 1] * self.dims[s + 1]
        self.strides = tuple(strides)
        self._omega = {}
        self._invariant = None
        self._pivots = None
        self._inv_gram = None

    def digits(self, g):
        out = []
        for s in range(self.n):
            out.append((g // self.strides[s]) % self.dims[s])
        return tuple(out)

    def index(self, digits):
        return sum(d * s for d, s in zip(digits, self.strides))

    def basis_weight(self, g):
        rank = self.alg.rank
        acc = [0] * rank
        for s, d in enumerate(self.digits(g)):
            w = self.factors[s].basis_weights[d]
            for q in range(rank):
                acc[q] += w[q]
        return tuple(acc)

    # -- invariants ------------------------------------------------------

    def zero_weight_indices(self):
        zero = tuple(0 for _ in range(self.alg.rank))
        out = []
        for combo in itertools.product(*[range(d) for d in self.dims]):
            acc = [0] * self.alg.rank
            for s, d in enumerate(combo):
                w = self.factors[s].basis_weights[d]
                for q in range(self.alg.rank):
                    acc[q] += w[q]
            if tuple(acc) == zero:
                out.append(self.index(combo))
        return out

    @property
    def invariant_basis(self):
        if self._invariant is None:
            self._invariant = self._compute_invariants()
        return self._invariant

    @property
    def invariant_dim(self):
        return self.invariant_basis.ncols

    def _compute_invariants(self):
        zero_idx = self.zero_weight_indices()
        local = {g: q for q, g in enumerate(zero_idx)}
        d0 = len(zero_idx)
        row_key = {}
        rows = []

        def row_for(key):
            q = row_key.get(key)
            if q is None:
                q = len(rows)
                row_key[key] = q
                rows.append([_F0] * d0)
            return q

        for i in range(self.alg.rank):
            for tag, mats in (("e", [rep.e[i] for rep in self.factors]),
                              ("f", [rep.f[i] for rep in self.factors])):
                cols = [m.columns_index() for m in mats]
                for g in zero_idx:
                    dg = self.digits(g)
                    q = local[g]
                    for s in range(self.n):
                        for r, v in cols[s].get(dg[s], ()):
                            g2 = g + (r - dg[s]) * self.strides[s]
                            rows[row_for((tag, i, g2))][q] += v
        basis_cols = nullspace_rows(rows, d0) if rows else \
            [[_F1 if p == q else _F0 for p in range(d0)] for q in range(d0)]
        out = SRMatrix(self.total_dim, len(basis_cols))
        for j, col in enumerate(basis_cols):
            for q, v in enumerate(col):
                if v:
                    out.data[(zero_idx[q], j)] = v
        return out

    def _pivot_rows(self):
        if self._pivots is None:
            self._pivots = pivot_rows(self.invariant_basis)
        return self._pivots

    def invariant_gram(self):
        """Product contravariant form on the invariant basis, exactly.

        Nondegenerate because the invariants are form-orthogonal to the
        image of the diagonal action; this is the pairing under which the
        two-slot Casimirs are self-adjoint and the block subspaces are the
        duals of the raising-operator annihilator conditions.
        """
        if self._inv_gram is None:
            total = self.slot_operator(
                {s: rep.gram for s, rep in enumerate(self.factors)})
            b = self.invariant_basis
            self._inv_gram = (b.transpose() @ (total @ b)).to_rows()
        return self._inv_gram

    def restrict(self, op):
        """Exact matrix of op on the invariant subspace (dense rows).

        Raises if op does not preserve the subspace, which doubles as the
        subspace-preservation witness for every restricted operator.
        """
        return restrict_operator(op, self.invariant_basis, self._pivot_rows())

    # -- slot operators --------------------------------------------------

    def slot_operator(self, assignments):
        """Sparse total-space matrix of a product of one-slot operators.

        assignments maps slot -> small matrix on that factor; unassigned
        slots act as identity.
        """
        items = sorted(assignments.items())
        cols = [(s, m.columns_index()) for s, m in items]
        out = SRMatrix(self.total_dim, self.total_dim)
        for g in range(self.total_dim):
            dg = self.digits(g)
            partial = [(g, _F1)]
            for s, colidx in cols:
                hits = colidx.get(dg[s])
                if not hits:
                    partial = []
                    break
                partial = [(gb + (r - dg[s]) * self.strides[s], vb * v)
                           for gb, vb in partial for r, v in hits]
            for g2, v in partial:
                out.add_at(g2, g, v)
        return out

    def diagonal_generator(self, i, kind):
        """Sum over slots of e_i (kind 'e') or f_i (kind 'f')."""
        out = SRMatrix(self.total_dim, self.total_dim)
        for s in range(self.n):
            rep = self.factors[s]
            m = rep.e[i] if kind == "e" else rep.f[i]
            cols = m.columns_index()
            for g in range(self.total_dim):
                d = self.digits(g)[s]
                for r, v in cols.get(d, ()):
                    out.add_at(g + (r - d) * self.strides[s], g, v)
        return out

    # -- Casimir pair operators ------------------------------------------

    def omega_pair(self, i, j):
        """Exact two-slot Casimir Omega^{ij}, full matrix and restriction.

        Assembled two independent ways which must agree exactly: the dual
        basis sum over root vectors plus the Cartan term, and one half of
        (pair Casimir - scalar Casimirs). Cached per unordered pair.
        """
        if i == j:
            raise ValueError("slots must be distinct")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"slot out of range for n={self.n}")
        key = (min(i, j), max(i, j))
        if key not in self._omega:
            self._omega[key] = self._build_omega(*key)
        return self._omega[key]

    def _cartan_diag(self, i, j):
        out = SRMatrix(self.total_dim, self.total_dim)
        wi = self.factors[i].basis_weights
        wj = self.factors[j].basis_weights
        cache = {}
        for g in range(self.total_dim):
            dg = self.digits(g)
            key = (dg[i], dg[j])
            v = cache.get(key)
            if v is None:
                v = la.pairing(self.alg, wi[dg[i]], wj[dg[j]])
                cache[key] = v
            if v:
                out.data[(g, g)] = v
        return out

    def _build_omega(self, i, j):
        alg = self.alg
        cs = casimir_constants(alg)
        ri, rj = self.factors[i], self.factors[j]
        ei, fi = root_vectors(ri)
        ej, fj = root_vectors(rj)

        full = self._cartan_diag(i, j)
        for k, c in enumerate(cs):
            inv_c = 1 / c
            for m in (self.slot_operator({i: ei[k], j: fj[k]}),
                      self.slot_operator({i: fi[k], j: ej[k]})):
                for (r, cc), v in m.data.items():
                    full.add_at(r, cc, inv_c * v)

        # independent route: half of (pair Casimir - scalars)
        pair = SRMatrix(self.total_dim, self.total_dim)
        wi = ri.basis_weights
        wj = rj.basis_weights
        for g in range(self.total_dim):
            dg = self.digits(g)
            s = la.weight_add(wi[dg[i]], wj[dg[j]])
            v = la.pairing(alg, s, s)
            if v:
                pair.data[(g, g)] = v
        for k, c in enumerate(cs):
            inv_c = 1 / c
            ee = self.slot_operator({i: ei[k]}) + self.slot_operator({j: ej[k]})
            ff = self.slot_operator({i: fi[k]}) + self.slot_operator({j: fj[k]})
            for m in (ee @ ff, ff @ ee):
                for (r, cc), v in m.data.items():
                    pair.add_at(r, cc, inv_c * v)
        ci = la.casimir_scalar(alg, self.weights[i])
        cj = la.casimir_scalar(alg, self.weights[j])
        half = Fraction(1, 2)
        other = pair
        for g in range(self.total_dim):
            other.add_at(g, g, -(ci + cj))
        other = other.scale(half)
        if other != full:
            raise ConstructionError(
                f"Omega^{{{i}{j}}} routes disagree on {alg.name} "
                f"{self.weights}")

        restricted = self.restrict(full)
        return full, restricted

    def omega_restricted(self, i, j):
        return self.omega_pair(i, j)[1]

    def sum_casimirs(self):
        return sum((la.casimir_scalar(self.alg, w) for w in self.weights),
                   start=Fraction(0))

    # -- slot swap --------------------------------------------------------

    def swap_matrix(self, i):
        """Adjacent slot transposition on the total space (equal factors)."""
        if not (0 <= i < self.n - 1):
            raise ValueError("swap slot out of range")
        if self.weights[i] != self.weights[i + 1]:
            raise ValueError("slot swap needs equal weights on both slots")
        out = SRMatrix(self.total_dim, self.total_dim)
        for g in range(self.total_dim):
            dg = list(self.digits(g))
            dg[i], dg[i + 1] = dg[i + 1], dg[i]
            out.data[(self.index(dg), g)] = _F1
        return out

    def swap_restricted(self, i):
        return self.restrict(self.swap_matrix(i))

    def __repr__(self):
        return (f"TensorSystem({self.alg.name}, {self.weights}, "
                f"dim={self.total_dim})")


def tensor_system(alg, weights, max_dim=DEFAULT_DIMENSION_CAP):
    return TensorSystem(alg, weights, max_dim=max_dim)


# -- serialization ---------------------------------------------------------

def _triplets(mat):
    return [[r, c, v.numerator, v.denominator] for r, c, v in mat.entries()]


def rep_to_json(rep):
    doc = {
        "algebra": {"series": rep.alg.series, "rank": rep.alg.rank},
        "highest_weight": list(rep.highest_weight),
        "dimension": rep.dim,
        "basis_weights": [list(w) for w in rep.basis_weights],
        "basis_hash": rep.basis_hash,
        "matrices": {},
    }
    for i in range(rep.alg.rank):
        doc["matrices"][f"e{i + 1}"] = _triplets(rep.e[i])
        doc["matrices"][f"f{i + 1}"] = _triplets(rep.f[i])
        doc["matrices"][f"h{i + 1}"] = _triplets(rep.h[i])
    return json.dumps(doc, sort_keys=True)


def omega_to_json(system, i, j):
    full, _restricted = system.omega_pair(i, j)
    doc = {
        "algebra": {"series": system.alg.series, "rank": system.alg.rank},
        "weights": [list(w) for w in system.weights],
        "slots": [i, j],
        "basis_hash": hashlib.sha256(
            repr([f.basis_hash for f in system.factors]).encode()
        ).hexdigest()[:16],
        "triplets": _triplets(full),
    }
    return json.dumps(doc, sort_keys=True)
