"""Truncated Fock space over a trace monoid.

Basis vectors are the trace words of length <= R. Creation prepends a
letter and maps to zero once the result would exceed R; annihilation is its
transpose. Norms of operators built here are norms of compressions, hence
lower bounds for the untruncated operators.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as sla

from .graphs import SimpleGraph, clique_report
from .moments import BoundReport
from .trace_monoid import DEFAULT_BALL_GUARD, Ball, TraceWord, first_clique_size, monoid_for

DENSE_CUTOFF = 200


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class FockBasis:
    graph: SimpleGraph
    radius: int
    ball: Ball
    # creation matrices, filled on first use
    _creation: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def words(self) -> list[TraceWord]:
        return self.ball.words

    @property
    def dim(self) -> int:
        return len(self.ball)

    def index(self, w: TraceWord) -> int:
        return self.ball.index[w]

    def vacuum(self, dtype=np.int64) -> np.ndarray:
        x = np.zeros(self.dim, dtype=dtype)
        x[0] = 1
        return x


def build_fock_basis(G: SimpleGraph, radius: int, guard: int = DEFAULT_BALL_GUARD) -> FockBasis:
    return FockBasis(G, radius, monoid_for(G).ball(radius, guard))


@dataclass(frozen=True)
class SparseSymOperator:
    """A sparse operator on a truncated Fock space (possibly tensored with C^d)."""

    matrix: sp.csr_matrix
    symmetric: bool

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def entry(self, i: int, j: int):
        return self.matrix[i, j]

    @property
    def T(self) -> "SparseSymOperator":
        return SparseSymOperator(self.matrix.T.conj().tocsr(), self.symmetric)

    def __add__(self, other: "SparseSymOperator") -> "SparseSymOperator":
        return SparseSymOperator((self.matrix + other.matrix).tocsr(), self.symmetric and other.symmetric)

    def __matmul__(self, other: "SparseSymOperator") -> "SparseSymOperator":
        return SparseSymOperator((self.matrix @ other.matrix).tocsr(), False)

    def to_coo_text(self) -> str:
        """``row col value`` per line after a ``# dim`` header; complex values as ``re im``."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        out = io.StringIO()
        out.write(f"# dim {self.dim} symmetric {int(self.symmetric)}\n")
        is_complex = np.iscomplexobj(coo.data)
        for k in order:
            v = coo.data[k]
            if is_complex:
                out.write(f"{coo.row[k]} {coo.col[k]} {float(v.real)!r} {float(v.imag)!r}\n")
            elif np.issubdtype(coo.data.dtype, np.integer):
                out.write(f"{coo.row[k]} {coo.col[k]} {int(v)}\n")
            else:
                out.write(f"{coo.row[k]} {coo.col[k]} {float(v)!r}\n")
        return out.getvalue()

    @classmethod
    def from_coo_text(cls, text: str) -> "SparseSymOperator":
        lines = text.splitlines()
        header = lines[0].split()
        dim, symmetric = int(header[2]), bool(int(header[4]))
        rows, cols, vals = [], [], []
        is_complex = False
        for line in lines[1:]:
            parts = line.split()
            rows.append(int(parts[0]))
            cols.append(int(parts[1]))
            if len(parts) == 4:
                is_complex = True
                vals.append(complex(float(parts[2]), float(parts[3])))
            elif "." in parts[2] or "e" in parts[2] or "n" in parts[2]:
                vals.append(float(parts[2]))
            else:
                vals.append(int(parts[2]))
        dtype = complex if is_complex else (float if any(isinstance(v, float) for v in vals) else np.int64)
        m = sp.csr_matrix((np.array(vals, dtype=dtype), (rows, cols)), shape=(dim, dim))
        return cls(m, symmetric)


def creation_operator(basis: FockBasis, i: int) -> SparseSymOperator:
    """l(x_i): x_w -> x_{i w} when |i w| <= R, zero otherwise."""
    if not 0 <= i < basis.graph.n:
        raise ValueError(f"letter {i} outside the graph")
    if not basis._creation:
        n = basis.graph.n
        rows: list[list[int]] = [[] for _ in range(n)]
        cols: list[list[int]] = [[] for _ in range(n)]
        for w_idx, succ in enumerate(basis.ball.up):
            for v, j in succ:
                rows[v].append(j)
                cols[v].append(w_idx)
        for v in range(n):
            data = np.ones(len(rows[v]), dtype=np.int64)
            m = sp.csr_matrix((data, (rows[v], cols[v])), shape=(basis.dim, basis.dim))
            basis._creation[v] = m
    # copy so callers cannot mutate the cached matrix
    return SparseSymOperator(basis._creation[i].copy(), False)


def annihilation_operator(basis: FockBasis, i: int) -> SparseSymOperator:
    return SparseSymOperator(creation_operator(basis, i).matrix.T.tocsr(), False)


def semicircle_operator(basis: FockBasis, i: int) -> SparseSymOperator:
    l = creation_operator(basis, i).matrix
    return SparseSymOperator((l + l.T).tocsr(), True)


def semicircle_sum(basis: FockBasis, alpha: Optional[Sequence[float]] = None) -> SparseSymOperator:
    """sum_i alpha_i s_i (all ones by default)."""
    if alpha is None:
        alpha = [1] * basis.graph.n
    total = None
    for i, a in enumerate(alpha):
        term = semicircle_operator(basis, i).matrix * a
        total = term if total is None else total + term
    return SparseSymOperator(total.tocsr(), True)


def number_like_operator(basis: FockBasis) -> SparseSymOperator:
    """sum_i l(x_i) l*(x_i): diagonal, with the first-clique size at each word."""
    diag = np.array([first_clique_size(w) for w in basis.words], dtype=np.int64)
    return SparseSymOperator(sp.diags(diag, format="csr", dtype=np.int64), True)


def vacuum_moment(op: SparseSymOperator, order: int, basis: FockBasis):
    """<op^order x_e, x_e>, exact for integer operators.

    Only valid while ``order <= 2R``: beyond that, truncation changes the
    answer for operators moving word length by one per application.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if order > 2 * basis.radius:
        raise ValueError(f"order {order} exceeds 2 * radius = {2 * basis.radius}; truncation would corrupt it")
    m = op.matrix
    if np.issubdtype(m.dtype, np.integer):
        row_sum = float(abs(m).sum(axis=1).max()) if m.nnz else 0.0
        if row_sum ** order < 2.0**62:
            x = basis.vacuum()
            for _ in range(order):
                x = m @ x
            return int(x[0])
        return _exact_power_vacuum(m, order)
    x = basis.vacuum(dtype=m.dtype)
    for _ in range(order):
        x = m @ x
    return x[0]


def _exact_power_vacuum(m: sp.csr_matrix, order: int) -> int:
    indptr, indices, data = m.indptr, m.indices, [int(v) for v in m.data]
    x = [0] * m.shape[0]
    x[0] = 1
    for _ in range(order):
        x = [sum(data[k] * x[indices[k]] for k in range(indptr[i], indptr[i + 1])) for i in range(m.shape[0])]
    return x[0]


def _is_hermitian(m: sp.spmatrix) -> bool:
    diff = m - m.T.conj()
    return diff.nnz == 0 or float(abs(diff).max()) <= 1e-14 * max(1.0, float(abs(m).max()))


def operator_norm(op: SparseSymOperator, tol: float = 1e-10, seed: int = 0) -> float:
    """Largest singular value; largest |eigenvalue| for Hermitian operators.

    Diagonal operators are read off exactly, small ones go through a dense
    eigensolve, the rest through ARPACK's restarted Lanczos from a seeded
    start vector. Non-Hermitian operators are replaced by their Hermitian
    dilation ``[[0, T], [T*, 0]]``.
    """
    m = op.matrix
    if m.nnz == 0:
        return 0.0
    coo = m.tocoo()
    if np.all(coo.row == coo.col):
        return float(np.max(np.abs(coo.data)))
    if not (op.symmetric and _is_hermitian(m)):
        m = sp.bmat([[None, m], [m.T.conj(), None]], format="csr")
    n = m.shape[0]
    if n <= DENSE_CUTOFF:
        return float(np.max(np.abs(np.linalg.eigvalsh(m.toarray()))))
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(n)
    if np.iscomplexobj(m.data):
        v0 = v0 + 1j * rng.standard_normal(n)
    try:
        vals = sla.eigsh(m, k=1, which="LM", tol=tol, v0=v0, maxiter=max(10_000, 20 * n),
                         return_eigenvectors=False)
    except sla.ArpackNoConvergence as exc:
        raise ConvergenceError(f"Lanczos did not converge (tol={tol}, dim={n})") from exc
    return float(np.max(np.abs(vals)))


# operator-valued coefficients


@dataclass(frozen=True)
class OperatorCoefficients:
    mats: tuple[np.ndarray, ...]
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        mats = tuple(np.asarray(a) for a in self.mats)
        if not mats:
            raise ValueError("need at least one coefficient matrix")
        d = mats[0].shape
        if any(a.ndim != 2 or a.shape != d or d[0] != d[1] for a in mats):
            raise ValueError("coefficients must be square matrices of one common size")
        object.__setattr__(self, "mats", mats)

    @property
    def d(self) -> int:
        return self.mats[0].shape[0]

    @property
    def L(self) -> int:
        return len(self.mats)

    def row_column_norm(self) -> float:
        """max(||sum a a*||, ||sum a* a||)^{1/2}."""
        rows = sum(a @ a.conj().T for a in self.mats)
        cols = sum(a.conj().T @ a for a in self.mats)
        top = max(np.max(np.abs(np.linalg.eigvalsh(rows))), np.max(np.abs(np.linalg.eigvalsh(cols))))
        return math.sqrt(float(top))

    def is_hermitian(self) -> bool:
        return all(np.allclose(a, a.conj().T, atol=0, rtol=0) for a in self.mats)


def random_hermitian_coefficients(L: int, d: int, seed: int, complex_entries: bool = True) -> OperatorCoefficients:
    """L Hermitian d x d matrices: symmetrized entries from the unit disk (or [-1, 1])."""
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(L):
        if complex_entries:
            radius = np.sqrt(rng.uniform(0, 1, (d, d)))
            angle = rng.uniform(0, 2 * np.pi, (d, d))
            m = radius * np.exp(1j * angle)
        else:
            m = rng.uniform(-1, 1, (d, d))
        mats.append((m + m.conj().T) / 2)
    return OperatorCoefficients(tuple(mats), seed)


def operator_valued_sum(coeffs: OperatorCoefficients, basis: FockBasis, selfadjoint_part: bool = False) -> SparseSymOperator:
    """sum_i a_i (x) s_i as a sparse matrix of size d * dim (Kronecker order: a_i outer).

    With ``selfadjoint_part`` the annihilation half uses ``a_i*`` instead of
    ``a_i``, giving ``sum_i a_i (x) l_i + a_i* (x) l_i*``, which is self-adjoint
    for arbitrary coefficients and coincides with the plain sum when every
    ``a_i`` is Hermitian.
    """
    if coeffs.L != basis.graph.n:
        raise ValueError(f"{coeffs.L} coefficients for a graph on {basis.graph.n} vertices")
    total = None
    for i, a in enumerate(coeffs.mats):
        l = creation_operator(basis, i).matrix
        a_star = a.conj().T if selfadjoint_part else a
        term = sp.kron(sp.csr_matrix(a), l) + sp.kron(sp.csr_matrix(a_star), l.T)
        total = term if total is None else total + term
    total = total.tocsr()
    total.eliminate_zeros()
    symmetric = selfadjoint_part or coeffs.is_hermitian()
    return SparseSymOperator(total, symmetric)


def default_radius(G: SimpleGraph) -> int:
    return max(clique_report(G).omega, 6)


def check_operator_khintchine(
    coeffs: OperatorCoefficients, G: SimpleGraph, radius: Optional[int] = None, tol: float = 1e-6,
    basis: Optional[FockBasis] = None,
) -> BoundReport:
    """Compressed norm of sum a_i (x) s_i against 2 sqrt(omega) |T|_2."""
    if basis is None:
        basis = build_fock_basis(G, default_radius(G) if radius is None else radius)
    T = operator_valued_sum(coeffs, basis)
    lhs = operator_norm(T, tol=1e-10)
    omega = clique_report(G).omega
    rhs = 2 * math.sqrt(omega) * coeffs.row_column_norm()
    return BoundReport(lhs, rhs, "operator_khintchine",
                       {"radius": basis.radius, "d": coeffs.d, "seed": coeffs.seed, "omega": omega}, tol=tol)
