"""Algebraic curvature operators on the wedge space of R^n.

Conventions used throughout the toolkit:

* The wedge basis b_i ^ b_j induced by the standard orthonormal basis of
  R^n is declared orthonormal, so an operator is a symmetric N x N matrix
  with N = n(n-1)/2 and the inner product is <A, B> = tr(AB).
* For n = 3 the basis is kept in Hodge (cyclic) order (2,3), (3,1), (1,2),
  which makes the induced wedge-coordinate rotation of Q in SO(3) equal to
  Q itself; for n >= 4 pairs are lexicographic.
* scal(R) = tr(Ric(R)) = tr(R), and the round unit sphere corresponds to
  twice the identity (Ric(2I) = (n-1) id).
* The sharp operator is the second equivariant quadratic map of the
  reaction ODE R' = R^2 + R^#, normalized so that sharp(I) = (n-2) I.
  In dimension 3 this is exactly the adjugate in wedge coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .errors import CapabilityError, InvalidInputError, NumericError

MAX_SHARP_DIM = 8

# tolerances for construction-time invariants
SYMMETRY_TOL = 1e-12
BIANCHI_CONSTRUCTION_RTOL = 1e-10
ORTHOGONALITY_TOL = 1e-10


def wedge_dim(n):
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def wedge_pairs(n):
    """Ordered wedge index pairs (0-based)."""
    if n < 2:
        raise InvalidInputError(f"base dimension must be >= 2, got {n}")
    if n == 3:
        return ((1, 2), (2, 0), (0, 1))
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def _pair_index(n):
    """(i, j) -> (wedge coordinate, orientation sign) for all ordered pairs."""
    index = {}
    for k, (i, j) in enumerate(wedge_pairs(n)):
        index[(i, j)] = (k, 1.0)
        index[(j, i)] = (k, -1.0)
    return index


@dataclass(frozen=True)
class WedgeBasis:
    """The ordered orthonormal wedge basis for a base dimension."""

    n: int
    pairs: tuple

    @classmethod
    def standard(cls, n):
        return cls(n=n, pairs=wedge_pairs(n))

    def __post_init__(self):
        N = wedge_dim(self.n)
        if len(self.pairs) != N:
            raise InvalidInputError(f"expected {N} pairs for n={self.n}, got {len(self.pairs)}")
        seen = {frozenset(p) for p in self.pairs}
        if len(seen) != N:
            raise InvalidInputError("wedge pairs must cover each unordered pair exactly once")

    @property
    def dim(self):
        return len(self.pairs)


# --- symmetric-matrix vectorization (isometric: <A,B> = svec(A).svec(B)) ---

_SQ2 = np.sqrt(2.0)


@lru_cache(maxsize=None)
def _svec_indices(N):
    rows, cols, weights = [], [], []
    for i in range(N):
        rows.append(i)
        cols.append(i)
        weights.append(1.0)
    for i in range(N):
        for j in range(i + 1, N):
            rows.append(i)
            cols.append(j)
            weights.append(_SQ2)
    return np.array(rows), np.array(cols), np.array(weights)


def sym_dim(N):
    return N * (N + 1) // 2


def sym_vec(mat):
    """Isometric vectorization of a symmetric matrix (sqrt2-weighted off-diagonals)."""
    mat = np.asarray(mat)
    N = mat.shape[-1]
    rows, cols, weights = _svec_indices(N)
    return mat[..., rows, cols] * weights


def sym_mat(vec, N):
    vec = np.asarray(vec)
    rows, cols, weights = _svec_indices(N)
    out = np.zeros(vec.shape[:-1] + (N, N))
    vals = vec / weights
    out[..., rows, cols] = vals
    out[..., cols, rows] = vals
    return out


# --- the operator type ---


class EigenData(NamedTuple):
    values: np.ndarray  # ascending
    frame: np.ndarray   # orthonormal columns matching values


@dataclass(frozen=True)
class CurvatureOperator:
    """Symmetric operator on the wedge space in standard wedge coordinates."""

    n: int
    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=float)
        N = wedge_dim(self.n)
        if mat.shape != (N, N):
            raise InvalidInputError(f"expected a {N}x{N} matrix for n={self.n}, got {mat.shape}")
        scale = 1.0 + np.abs(mat).max(initial=0.0)
        if np.abs(mat - mat.T).max(initial=0.0) > SYMMETRY_TOL * scale:
            raise InvalidInputError("matrix is not symmetric within tolerance")
        object.__setattr__(self, "mat", 0.5 * (mat + mat.T))

    @classmethod
    def from_matrix(cls, mat, n, project=False):
        """Construct and, for n >= 4, verify (or restore) the first Bianchi identity."""
        op = cls(n=n, mat=mat)
        if n >= 4:
            if project:
                return first_bianchi_project(op.mat, n)
            res = first_bianchi_residual(op.mat, n)
            if res > BIANCHI_CONSTRUCTION_RTOL * max(op.norm, 1.0):
                raise InvalidInputError(
                    f"matrix violates the first Bianchi identity (residual {res:.3e}); "
                    "pass project=True to project onto the Bianchi subspace"
                )
        return op

    @classmethod
    def identity(cls, n):
        return cls(n=n, mat=np.eye(wedge_dim(n)))

    @classmethod
    def zero(cls, n):
        return cls(n=n, mat=np.zeros((wedge_dim(n), wedge_dim(n))))

    @classmethod
    def from_diag(cls, values, n=3):
        values = np.asarray(values, dtype=float)
        if values.shape != (wedge_dim(n),):
            raise InvalidInputError("diagonal length must equal the wedge dimension")
        return cls(n=n, mat=np.diag(values))

    @property
    def norm(self):
        return float(np.linalg.norm(self.mat))


def _check_same_dimension(R, n):
    if R.n != n:
        raise InvalidInputError(f"dimension mismatch: operator has n={R.n}, expected n={n}")


# --- ric / scal ---


def ricci(R: CurvatureOperator) -> np.ndarray:
    """Ricci endomorphism Ric(R)_{uv} = 1/2 sum_k R(e_u^e_k, e_v^e_k), an n x n matrix."""
    n = R.n
    index = _pair_index(n)
    out = np.zeros((n, n))
    for u in range(n):
        for v in range(u, n):
            acc = 0.0
            for k in range(n):
                if k == u or k == v:
                    continue
                pu, su = index[(u, k)]
                pv, sv = index[(v, k)]
                acc += su * sv * R.mat[pu, pv]
            if u == v:
                for k in range(n):
                    if k == u:
                        continue
                    pu, su = index[(u, k)]
                    acc += R.mat[pu, pu]
                # the k == u, k == v exclusions above skipped the diagonal terms twice
                acc *= 0.5
                out[u, u] = acc
            else:
                out[u, v] = out[v, u] = 0.5 * acc
    return out


def scalar_curvature(R: CurvatureOperator) -> float:
    """scal(R) = tr(Ric(R)) = tr(R) in an orthonormal wedge basis."""
    return float(np.trace(R.mat))


# --- sharp operator ---


def adjugate3(mats):
    """Adjugate of (batched) 3x3 matrices via the characteristic polynomial.

    adj(A) = A^2 - tr(A) A + sigma2(A) I; equals the classical
    cofactor transpose and is continuous at repeated eigenvalues.
    """
    mats = np.asarray(mats, dtype=float)
    a2 = mats @ mats
    tr = np.trace(mats, axis1=-2, axis2=-1)[..., None, None]
    tr2 = np.trace(a2, axis1=-2, axis2=-1)[..., None, None]
    sigma2 = 0.5 * (tr * tr - tr2)
    return a2 - tr * mats + sigma2 * np.eye(3)


def reaction3(mats):
    """Batched reaction map A^2 + adj(A) for 3x3 wedge matrices."""
    mats = np.asarray(mats, dtype=float)
    return mats @ mats + adjugate3(mats)


@lru_cache(maxsize=None)
def structure_tensor(n):
    """so(n) structure constants C[g, d, a] = <[L_g, L_d], L_a> in the wedge basis.

    The basis L_(i,j) = E_ij - E_ji (with the stored pair orientation) is
    orthonormal for <A, B> = -1/2 tr(AB).  The returned tensor is validated
    against the calibration identity sharp(I) = (n-2) I before use.
    """
    if n > MAX_SHARP_DIM:
        raise CapabilityError(f"sharp is configured for n <= {MAX_SHARP_DIM}, got n={n}")
    pairs = wedge_pairs(n)
    N = len(pairs)
    basis = []
    for (i, j) in pairs:
        L = np.zeros((n, n))
        L[i, j] = 1.0
        L[j, i] = -1.0
        basis.append(L)
    C = np.zeros((N, N, N))
    for g in range(N):
        for d in range(N):
            bracket = basis[g] @ basis[d] - basis[d] @ basis[g]
            for a in range(N):
                C[g, d, a] = -0.5 * np.trace(bracket @ basis[a])
    calib = _sharp_raw(np.eye(N), C)
    if np.abs(calib - (n - 2) * np.eye(N)).max() > 1e-12 * max(n - 2, 1):
        raise NumericError(
            f"sharp calibration failed for n={n}: sharp(I) != (n-2) I",
            residual=float(np.abs(calib - (n - 2) * np.eye(N)).max()),
        )
    return C


def _sharp_raw(mat, C):
    out = 0.5 * np.einsum("gda,gc,de,ceb->ab", C, mat, mat, C, optimize=True)
    return 0.5 * (out + out.T)


def sharp(R: CurvatureOperator) -> CurvatureOperator:
    """The quadratic sharp map, adjugate for n = 3 and structure-constant form otherwise.

    The result of sharp alone need not satisfy the first Bianchi identity
    for n >= 4; only the combination R^2 + R^# does.
    """
    if R.n == 3:
        return CurvatureOperator(n=3, mat=adjugate3(R.mat))
    return CurvatureOperator(n=R.n, mat=_sharp_raw(R.mat, structure_tensor(R.n)))


def reaction_map(R: CurvatureOperator) -> CurvatureOperator:
    """Right-hand side R^2 + R^# of the reaction ODE."""
    return CurvatureOperator(n=R.n, mat=R.mat @ R.mat + sharp(R).mat)


# --- rotations ---


def _check_orthogonal(Q, n):
    Q = np.asarray(Q, dtype=float)
    if Q.shape != (n, n):
        raise InvalidInputError(f"expected a {n}x{n} rotation, got {Q.shape}")
    if np.abs(Q.T @ Q - np.eye(n)).max() > ORTHOGONALITY_TOL:
        raise InvalidInputError("matrix is not orthogonal within tolerance")
    return Q


def lambda2_matrix(Q, n) -> np.ndarray:
    """Induced orthogonal action of Q on wedge coordinates.

    Entry (p, q) is the p-th wedge coordinate of Qe_i ^ Qe_j for the q-th
    stored pair (i, j).  For n = 3 and Q in SO(3) this equals Q.
    """
    Q = _check_orthogonal(Q, n)
    pairs = wedge_pairs(n)
    N = len(pairs)
    out = np.empty((N, N))
    for p, (a, b) in enumerate(pairs):
        for q, (i, j) in enumerate(pairs):
            out[p, q] = Q[a, i] * Q[b, j] - Q[a, j] * Q[b, i]
    return out


def rotate_operator(Q, R: CurvatureOperator) -> CurvatureOperator:
    """Pullback action of an orthogonal Q, realized as wedge-coordinate conjugation."""
    P = lambda2_matrix(Q, R.n)
    return CurvatureOperator(n=R.n, mat=P @ R.mat @ P.T)


# --- eigendecomposition ---


def eigen_sorted(R: CurvatureOperator) -> EigenData:
    """Ascending eigenvalues with a deterministic orthonormal frame.

    Frame columns are sign-fixed so the first component of significant
    magnitude is positive, making reports reproducible.
    """
    values, frame = np.linalg.eigh(R.mat)
    scale = 1.0 + float(np.linalg.norm(R.mat))
    residual = float(np.linalg.norm(R.mat @ frame - frame @ np.diag(values)))
    if residual > 1e-9 * scale:
        raise NumericError("eigendecomposition residual too large", residual=residual)
    for k in range(frame.shape[1]):
        col = frame[:, k]
        ref = np.abs(col).max()
        nz = np.nonzero(np.abs(col) > 1e-12 * max(ref, 1e-300))[0]
        if nz.size and col[nz[0]] < 0:
            frame[:, k] = -col
    return EigenData(values=values, frame=frame)


# --- first Bianchi identity (n >= 4) ---


@lru_cache(maxsize=None)
def _bianchi_constraint_rows(n):
    """Orthonormal svec rows spanning the complement of the Bianchi subspace."""
    index = _pair_index(n)
    N = wedge_dim(n)
    rows = []
    for (x, y, z, w) in combinations(range(n), 4):
        E = np.zeros((N, N))
        for (a, b, c, d) in ((x, y, z, w), (y, z, x, w), (z, x, y, w)):
            p, sp = index[(a, b)]
            q, sq = index[(c, d)]
            E[p, q] += 0.5 * sp * sq
            E[q, p] += 0.5 * sp * sq
        rows.append(sym_vec(E))
    A = np.asarray(rows)
    u, s, vt = np.linalg.svd(A, full_matrices=False)
    rank = int((s > 1e-10 * s[0]).sum())
    return vt[:rank]


def first_bianchi_residual(mat, n) -> float:
    """Norm of the component violating the first Bianchi identity (0 for n <= 3)."""
    if n <= 3:
        return 0.0
    rows = _bianchi_constraint_rows(n)
    return float(np.linalg.norm(rows @ sym_vec(np.asarray(mat, dtype=float))))


def first_bianchi_project(mat, n) -> CurvatureOperator:
    """Orthogonal projection of a symmetric matrix onto the Bianchi subspace.

    Calling it for n <= 3 is flagged as misuse: there the projection is
    the identity because every symmetric operator is a curvature operator.
    """
    if n <= 3:
        raise CapabilityError("first Bianchi projection is the identity for n <= 3")
    mat = np.asarray(mat, dtype=float)
    mat = 0.5 * (mat + mat.T)
    rows = _bianchi_constraint_rows(n)
    v = sym_vec(mat)
    v = v - rows.T @ (rows @ v)
    return CurvatureOperator(n=n, mat=sym_mat(v, wedge_dim(n)))


def bianchi_subspace_dimension(n) -> int:
    """Rank of the Bianchi projector, measured as dim S^2 minus constraint rank."""
    if n <= 3:
        return sym_dim(wedge_dim(n))
    return sym_dim(wedge_dim(n)) - _bianchi_constraint_rows(n).shape[0]
